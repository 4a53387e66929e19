#pragma once

// Grid coarsening approximations.
//
// Every log-reliability is floored onto a grid of unit k and the exact DP is run on
// the coarsened network. With k = -log(1 - eps) / n each edge loses at most a factor
// (1 - eps)^(1/n), so the winner is within (1 - eps) of the optimum. The pruned
// variant repeats the solve once per distinct edge reliability a_i, deleting edges
// below a_i and using the finer unit eps * (-log a_i) / n, and keeps the best result.

#include <atomic>
#include <cmath>
#include <cstddef>
#include <future>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "mrp/exact_dp.hpp"
#include "mrp/model.hpp"

namespace mrp {

// Floors each finite log-reliability onto multiples of unit; IMPOSSIBLE stays.
// Guarantees log a - unit < unit * cost <= log a, also after floating-point rounding.
inline IntegerCostNetwork coarsen(const Network& net, double unit) {
    if (!(unit > 0.0) || !std::isfinite(unit)) throw input_error("coarsening unit must be positive");
    IntegerCostNetwork out{net, unit, {}};
    out.costs.reserve(net.edge_count());
    for (EdgeIndex e = 0; e < net.edge_count(); ++e) {
        CostVector c(net.state_count());
        for (std::size_t k = 0; k < net.state_count(); ++k) {
            double r = net.reliability(e, k);
            if (r == 0.0) {
                c[k] = kImpossibleCost;
                continue;
            }
            double log_r = std::min(0.0, std::log(r));
            double steps = std::floor(log_r / unit);
            if (steps * unit > log_r) steps -= 1.0;
            c[k] = static_cast<std::int64_t>(steps);
        }
        out.costs.push_back(std::move(c));
    }
    return out;
}

enum class ApproxVariant { Basic, Pruned };

inline const char* to_string(ApproxVariant v) { return v == ApproxVariant::Basic ? "approx-basic" : "approx-pruned"; }

struct ApproxResult {
    std::optional<Path> path;
    double true_reliability = 0.0;  // recomputed on the input network
    double coarsened_value = 0.0;   // objective of the winning path on its grid
    double epsilon = 0.0;
    ApproxVariant variant = ApproxVariant::Basic;
    double unit = 0.0;                   // grid unit of the winning solve
    std::size_t prunings_evaluated = 0;  // thresholds whose DP ran to completion
    std::size_t guard_trips = 0;         // thresholds skipped because the DP table guard fired
    std::optional<double> threshold;     // pruning threshold of the winning iteration

    bool found() const noexcept { return path.has_value(); }
};

inline void check_epsilon(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw input_error("epsilon must lie in (0, 1)");
}

inline double basic_unit(std::size_t vertex_count, double epsilon) {
    return -std::log1p(-epsilon) / static_cast<double>(vertex_count);
}

inline ApproxResult approx_solve_basic(const Network& net, double epsilon, const DpOptions& options = {}) {
    check_epsilon(epsilon);
    ApproxResult result;
    result.epsilon = epsilon;
    result.variant = ApproxVariant::Basic;
    result.unit = basic_unit(net.vertex_count(), epsilon);

    const DpResult dp = dp_solve(coarsen(net, result.unit), options);
    if (!dp.solve.found()) return result;
    result.path = dp.solve.path;
    result.true_reliability = dp.solve.reliability;
    result.coarsened_value = dp.grid_objective;
    return result;
}

// Deletes every edge with at least one conditional reliability strictly below the
// threshold. Vertices are kept.
inline Network prune_below(const Network& net, double threshold) {
    std::vector<Edge> kept;
    for (const Edge& e : net.edges()) {
        bool below = std::any_of(e.reliability.begin(), e.reliability.end(), [&](double r) { return r < threshold; });
        if (!below) kept.push_back(e);
    }
    return Network(net.state_count(), net.prior(), net.vertices(), net.source(), net.sink(), std::move(kept));
}

// Sorted distinct conditional edge reliabilities in (0, 1).
inline std::vector<double> pruning_thresholds(const Network& net) {
    std::set<double> distinct;
    for (const Edge& e : net.edges())
        for (double r : e.reliability)
            if (r > 0.0 && r < 1.0) distinct.insert(r);
    return {distinct.begin(), distinct.end()};
}

struct PrunedOptions {
    DpOptions dp;
    unsigned threads = 1;  // threshold iterations are independent; results do not depend on this
};

namespace detail {

struct PrunedCandidate {
    bool ran = false;
    bool guard_trip = false;
    DpResult dp;
    double unit = 0.0;
};

inline PrunedCandidate run_threshold(const Network& net, double threshold, double epsilon, const DpOptions& options) {
    PrunedCandidate out;
    const Network pruned = prune_below(net, threshold);
    if (!first_path(pruned)) return out;
    out.unit = epsilon * -std::log(threshold) / static_cast<double>(pruned.vertex_count());
    try {
        out.dp = dp_solve(coarsen(pruned, out.unit), options);
        out.ran = true;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::Resource) throw;
        out.guard_trip = true;
    }
    return out;
}

}  // namespace detail

inline ApproxResult approx_solve_pruned(const Network& net, double epsilon, const PrunedOptions& options = {}) {
    check_epsilon(epsilon);
    ApproxResult result;
    result.epsilon = epsilon;
    result.variant = ApproxVariant::Pruned;

    // Reliability-1 paths are optimal and are decided exactly on the all-ones subgraph.
    const Network ones = prune_below(net, 1.0);
    if (auto perfect = first_path(ones)) {
        // indices refer to the pruned copy; ids carry over
        result.path = path_from_indices(ones, *perfect);
        result.true_reliability = path_reliability(net, *result.path);
        result.coarsened_value = 1.0;
        result.threshold = 1.0;
        return result;
    }

    const auto thresholds = pruning_thresholds(net);
    std::vector<detail::PrunedCandidate> candidates(thresholds.size());

    const unsigned threads = std::max(1u, options.threads);
    if (threads == 1) {
        for (std::size_t i = 0; i < thresholds.size(); ++i)
            candidates[i] = detail::run_threshold(net, thresholds[i], epsilon, options.dp);
    } else {
        std::vector<std::future<void>> workers;
        std::atomic<std::size_t> next{0};
        for (unsigned w = 0; w < threads; ++w) {
            workers.push_back(std::async(std::launch::async, [&] {
                for (std::size_t i = next++; i < thresholds.size(); i = next++)
                    candidates[i] = detail::run_threshold(net, thresholds[i], epsilon, options.dp);
            }));
        }
        for (auto& w : workers) w.get();
    }

    // Deterministic reduction: best true reliability, smaller threshold index on ties.
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const auto& c = candidates[i];
        result.guard_trips += c.guard_trip ? 1 : 0;
        if (!c.ran) continue;
        ++result.prunings_evaluated;
        if (!c.dp.solve.found()) continue;
        if (!best || c.dp.solve.reliability > candidates[*best].dp.solve.reliability) best = i;
    }
    if (!best) return result;

    const auto& winner = candidates[*best];
    // Edge ids are preserved by pruning, so the path is valid on the input network.
    result.path = winner.dp.solve.path;
    result.true_reliability = path_reliability(net, *result.path);
    result.coarsened_value = winner.dp.grid_objective;
    result.unit = winner.unit;
    result.threshold = thresholds[*best];
    return result;
}

}  // namespace mrp
