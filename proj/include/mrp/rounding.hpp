#pragma once

// Fractional unit flows, their path decomposition, and randomized path selection.
//
// A feasible point of the relaxed path program is a unit source-to-sink flow. It is
// split greedily into weighted paths whose per-edge weight sums reproduce the flow;
// sampling a path by weight then gives an expected path reliability that is at least
// the relaxed objective (convexity of exp).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mrp/model.hpp"

namespace mrp {

inline constexpr double kFlowTolerance = 1e-9;

struct Flow {
    std::map<std::string, double> values;  // absent edges carry 0

    double at(const std::string& edge_id) const {
        auto it = values.find(edge_id);
        return it == values.end() ? 0.0 : it->second;
    }
};

inline ValidationReport validate_flow(const Network& net, const Flow& flow) {
    ValidationReport report;
    std::vector<double> balance(net.vertex_count(), 0.0);  // out minus in

    for (const auto& [id, x] : flow.values) {
        auto e = net.edge_index(id);
        if (!e) {
            report.add("unknown-edge", "flow names unknown edge '" + id + "'");
            continue;
        }
        if (!(x >= -kFlowTolerance && x <= 1.0 + kFlowTolerance)) {
            std::ostringstream os;
            os.precision(17);
            os << "edge '" << id << "' carries " << x << ", outside [0,1]";
            report.add("range", os.str());
        }
        if (net.tail(*e) != kNoIndex) balance[net.tail(*e)] += x;
        if (net.head(*e) != kNoIndex) balance[net.head(*e)] -= x;
    }

    for (VertexIndex v = 0; v < net.vertex_count(); ++v) {
        double expected = v == net.source_index() ? 1.0 : v == net.sink_index() ? -1.0 : 0.0;
        if (std::abs(balance[v] - expected) > kFlowTolerance) {
            std::ostringstream os;
            os.precision(17);
            os << "vertex '" << net.vertices()[v] << "' has net out-flow " << balance[v] << ", expected "
               << expected << " (residual " << balance[v] - expected << ")";
            report.add("conservation", os.str());
        }
    }
    return report;
}

inline void require_feasible(const Network& net, const Flow& flow) {
    auto report = validate_flow(net, flow);
    if (report.ok()) return;
    std::string what = "infeasible flow:";
    for (const auto& v : report.violations) what += "\n  " + v.message;
    throw input_error(what);
}

// sum_k prior_k * exp(sum_e x_e log r_e^(k)); a state whose term touches an
// IMPOSSIBLE edge with positive flow contributes zero.
inline double relaxed_objective(const Network& net, const Flow& flow) {
    require_feasible(net, flow);
    double total = 0.0;
    for (std::size_t k = 0; k < net.state_count(); ++k) {
        double exponent = 0.0;
        bool dead = false;
        for (const auto& [id, x] : flow.values) {
            if (x <= 0.0) continue;
            LogReliability c = detail::edge_log_reliability(net, *net.edge_index(id), k);
            if (c.is_impossible()) {
                dead = true;
                break;
            }
            exponent += c.value() * x;
        }
        if (!dead) total += net.prior()[k] * std::exp(exponent);
    }
    return total;
}

// Weighted paths with strictly positive weights summing to 1.
class PathDistribution {
public:
    struct Entry {
        Path path;
        double weight;
    };

    PathDistribution() = default;

    // Drops zero weights; the rest must be positive and sum to 1 within tolerance.
    explicit PathDistribution(std::vector<Entry> entries) {
        double sum = 0.0;
        for (auto& e : entries) {
            if (e.weight < 0.0) throw input_error("negative path weight");
            if (e.weight == 0.0) continue;
            sum += e.weight;
            entries_.push_back(std::move(e));
        }
        if (!entries_.empty() && std::abs(sum - 1.0) > kFlowTolerance)
            throw input_error("path weights sum to " + std::to_string(sum) + ", expected 1");
    }

    const std::vector<Entry>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    // Per-edge sum of the weights of the paths that use the edge.
    Flow marginals() const {
        Flow flow;
        for (const auto& e : entries_)
            for (const auto& id : e.path.edge_ids) flow.values[id] += e.weight;
        return flow;
    }

private:
    std::vector<Entry> entries_;
};

// Constructs a feasible flow as a convex combination of paths.
inline Flow mix_paths(const Network& net, const std::vector<Path>& paths, const std::vector<double>& weights) {
    if (paths.size() != weights.size()) throw input_error("paths and weights differ in length");
    if (paths.empty()) throw input_error("no paths to mix");
    double sum = 0.0;
    for (double w : weights) {
        if (!(w > 0.0)) throw input_error("path weights must be positive");
        sum += w;
    }
    if (std::abs(sum - 1.0) > kFlowTolerance) throw input_error("path weights must sum to 1");

    Flow flow;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        resolve_path(net, paths[i]);
        for (const auto& id : paths[i].edge_ids) flow.values[id] += weights[i];
    }
    return flow;
}

// Greedy decomposition: from the source, repeatedly follow the positive-residual
// out-edge with the largest residual (smaller edge id on ties) to the sink, then
// subtract the path's bottleneck. Stops when the source residual drops below
// tolerance, and renormalizes the weights to sum to 1.
inline PathDistribution decompose_flow(const Network& net, const Flow& flow) {
    require_feasible(net, flow);
    std::vector<double> residual(net.edge_count(), 0.0);
    for (const auto& [id, x] : flow.values) residual[*net.edge_index(id)] = std::max(0.0, x);

    auto source_residual = [&] {
        double total = 0.0;
        for (EdgeIndex e : net.out_edges(net.source_index())) total += residual[e];
        return total;
    };

    std::vector<std::pair<std::vector<EdgeIndex>, double>> extracted;
    while (source_residual() >= kFlowTolerance) {
        if (extracted.size() > net.edge_count())
            throw decomposition_error("decomposition did not terminate within |E| paths");
        std::vector<EdgeIndex> edges;
        for (VertexIndex v = net.source_index(); v != net.sink_index();) {
            std::optional<EdgeIndex> pick;
            for (EdgeIndex e : net.out_edges(v))  // sorted by id, so strict > keeps the smaller id
                if (residual[e] > kFlowTolerance && (!pick || residual[e] > residual[*pick])) pick = e;
            if (!pick)
                throw decomposition_error("no positive-flow edge leaves vertex '" + net.vertices()[v] +
                                          "' while flow remains");
            edges.push_back(*pick);
            v = net.head(*pick);
        }
        double bottleneck = residual[edges.front()];
        for (EdgeIndex e : edges) bottleneck = std::min(bottleneck, residual[e]);
        for (EdgeIndex e : edges) {
            residual[e] -= bottleneck;
            if (residual[e] <= kFlowTolerance) residual[e] = 0.0;
        }
        extracted.emplace_back(std::move(edges), bottleneck);
    }

    double total = 0.0;
    for (const auto& [edges, w] : extracted) total += w;
    std::vector<PathDistribution::Entry> entries;
    for (const auto& [edges, w] : extracted) entries.push_back({path_from_indices(net, edges), w / total});
    return PathDistribution(std::move(entries));
}

// Inverse-CDF draw over the entries in stored order. All randomness comes from the
// seed; mt19937_64 output is specified by the standard, and the uniform is built
// from its top 53 bits so the draw is identical on every platform.
inline const Path& sample_path(const PathDistribution& dist, std::uint64_t seed) {
    if (dist.empty()) throw input_error("cannot sample from an empty distribution");
    std::mt19937_64 rng(seed);
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    double cumulative = 0.0;
    for (const auto& e : dist.entries()) {
        cumulative += e.weight;
        if (u < cumulative) return e.path;
    }
    return dist.entries().back().path;
}

struct RoundingCertificate {
    PathDistribution distribution;
    double expected_path_objective = 0.0;  // sum of weight * path reliability
    double relaxed = 0.0;                  // relaxed objective of the input flow
    bool jensen_holds = false;             // expected >= relaxed within tolerance
    // Only meaningful for a flow claimed optimal: then every decomposed path must
    // reach the relaxed value (and hence the optimum).
    std::optional<bool> optimality_consistent;
};

inline RoundingCertificate rounding_certificate(const Network& net, const Flow& flow, bool flow_is_optimal = false) {
    RoundingCertificate cert;
    cert.distribution = decompose_flow(net, flow);
    cert.relaxed = relaxed_objective(net, flow);
    for (const auto& e : cert.distribution.entries())
        cert.expected_path_objective += e.weight * path_reliability(net, e.path);
    cert.jensen_holds = cert.expected_path_objective >= cert.relaxed - kFlowTolerance;
    if (flow_is_optimal) {
        cert.optimality_consistent = std::all_of(
            cert.distribution.entries().begin(), cert.distribution.entries().end(),
            [&](const auto& e) { return path_reliability(net, e.path) >= cert.relaxed - kFlowTolerance; });
    }
    return cert;
}

}  // namespace mrp
