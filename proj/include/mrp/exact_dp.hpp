#pragma once

// Exact dynamic program over per-state integer log-cost vectors.
//
// When every edge log-reliability is an integer multiple of a grid unit, a path is
// characterized (for the purpose of its mixture reliability) by the d-vector of its
// per-state integer costs. The table maps, per vertex, each reachable cost vector
// to the back-pointers that produce it. The table is sparse and built forward:
// each entry at u is pushed along every out-edge of u in topological order.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "mrp/model.hpp"
#include "mrp/oracle.hpp"

namespace mrp {

inline constexpr std::int64_t kImpossibleCost = std::numeric_limits<std::int64_t>::min();
inline constexpr std::size_t kDefaultMaxTableEntries = 10'000'000;

// Per-state integer costs; kImpossibleCost marks probability zero. Because the
// sentinel is the smallest int64, the defaulted lexicographic order already puts
// IMPOSSIBLE below every finite entry.
class CostVector {
public:
    CostVector() = default;
    explicit CostVector(std::size_t states, std::int64_t fill = 0) : entries_(states, fill) {}
    CostVector(std::initializer_list<std::int64_t> entries) : entries_(entries) {}
    explicit CostVector(std::vector<std::int64_t> entries) : entries_(std::move(entries)) {}

    std::size_t size() const noexcept { return entries_.size(); }
    std::int64_t operator[](std::size_t k) const { return entries_[k]; }
    std::int64_t& operator[](std::size_t k) { return entries_[k]; }
    bool impossible(std::size_t k) const { return entries_[k] == kImpossibleCost; }
    const std::vector<std::int64_t>& entries() const noexcept { return entries_; }

    friend CostVector operator+(const CostVector& a, const CostVector& b) {
        CostVector sum(a.size());
        for (std::size_t k = 0; k < a.size(); ++k) {
            sum.entries_[k] = (a.impossible(k) || b.impossible(k)) ? kImpossibleCost : a[k] + b[k];
        }
        return sum;
    }

    // Every component >= the other's (IMPOSSIBLE lowest) and at least one strictly greater.
    bool dominates(const CostVector& other) const {
        bool strict = false;
        for (std::size_t k = 0; k < size(); ++k) {
            if (entries_[k] < other.entries_[k]) return false;
            if (entries_[k] > other.entries_[k]) strict = true;
        }
        return strict;
    }

    friend bool operator==(const CostVector&, const CostVector&) = default;
    friend auto operator<=>(const CostVector&, const CostVector&) = default;

    friend std::ostream& operator<<(std::ostream& os, const CostVector& c) {
        os << '(';
        for (std::size_t k = 0; k < c.size(); ++k) {
            if (k) os << ',';
            if (c.impossible(k))
                os << "IMPOSSIBLE";
            else
                os << c[k];
        }
        return os << ')';
    }

private:
    std::vector<std::int64_t> entries_;
};

// A network whose edge log-reliabilities are costs[e][k] * unit.
struct IntegerCostNetwork {
    Network base;
    double unit = 1.0;
    std::vector<CostVector> costs;  // indexed by edge

    // Mixture reliability represented by a cost vector on this grid.
    double objective(const CostVector& c) const {
        double total = 0.0;
        for (std::size_t k = 0; k < c.size(); ++k)
            if (!c.impossible(k)) total += base.prior()[k] * std::exp(unit * static_cast<double>(c[k]));
        return total;
    }

    // Largest finite per-edge cost magnitude plus one: the q with costs in {0..-q+1}.
    std::int64_t q() const {
        std::int64_t worst = 0;
        for (const auto& c : costs)
            for (std::size_t k = 0; k < c.size(); ++k)
                if (!c.impossible(k)) worst = std::max(worst, -c[k]);
        return worst + 1;
    }
};

// Snaps log-reliabilities that already lie on the grid. Anything further than
// 1e-9 from a multiple of unit is rejected with a precision error.
inline IntegerCostNetwork quantize_exact(const Network& net, double unit, double tolerance = 1e-9) {
    if (!(unit > 0.0) || !std::isfinite(unit)) throw input_error("grid unit must be a positive number");
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
            double log_r = std::log(r);
            double steps = std::round(log_r / unit);
            if (std::abs(log_r - steps * unit) > tolerance) {
                std::ostringstream os;
                os.precision(17);
                os << "edge '" << net.edges()[e].id << "' state " << k << ": log reliability " << log_r
                   << " is not a multiple of unit " << unit;
                throw precision_error(os.str());
            }
            c[k] = static_cast<std::int64_t>(steps);
            if (c[k] > 0) c[k] = 0;
        }
        out.costs.push_back(std::move(c));
    }
    return out;
}

struct BackPointer {
    VertexIndex from = kNoIndex;
    EdgeIndex edge = kNoIndex;
    CostVector from_cost;
};

// Entries at one vertex. Each cost vector keeps every back-pointer that reaches it;
// the first one is the canonical predecessor.
using DpSlice = std::map<CostVector, std::vector<BackPointer>>;

struct DpTable {
    std::vector<DpSlice> at;  // indexed by vertex
    std::size_t live_entries = 0;
    std::size_t peak_entries = 0;
};

// Removes every cost vector dominated by another in the same slice. The mixture
// objective is nondecreasing in every component, so a dominated vector can never
// overtake its dominator downstream.
inline DpSlice dominance_prune(DpSlice slice) {
    std::vector<const CostVector*> kept;
    std::vector<CostVector> doomed;
    // A vector can only be dominated by a lexicographically larger one.
    for (auto it = slice.rbegin(); it != slice.rend(); ++it) {
        const CostVector& c = it->first;
        bool dominated = std::any_of(kept.begin(), kept.end(), [&](const CostVector* k) { return k->dominates(c); });
        if (dominated)
            doomed.push_back(c);
        else
            kept.push_back(&c);
    }
    for (const auto& c : doomed) slice.erase(c);
    return slice;
}

struct DpOptions {
    bool prune = true;
    std::size_t max_entries = kDefaultMaxTableEntries;
    // Cap on paths recovered from the back-pointer lists when several paths tie on
    // the grid objective at the sink.
    std::size_t max_realizations = 100'000;
};

inline DpTable build_dp_table(const IntegerCostNetwork& icnet, const DpOptions& options = {}) {
    const Network& net = icnet.base;
    const auto order = topo_order_indices(net);
    const VertexIndex t = net.sink_index();

    DpTable table;
    table.at.assign(net.vertex_count(), {});
    table.at[net.source_index()].try_emplace(CostVector(net.state_count(), 0));
    table.live_entries = table.peak_entries = 1;

    for (VertexIndex v : order) {
        auto& slice = table.at[v];
        if (slice.empty()) continue;
        if (options.prune && v != net.source_index()) {
            std::size_t before = slice.size();
            slice = dominance_prune(std::move(slice));
            table.live_entries -= before - slice.size();
        }
        if (v == t) continue;  // simple source-to-sink paths end here
        for (EdgeIndex e : net.out_edges(v)) {
            auto& next = table.at[net.head(e)];
            for (const auto& [cost, back] : slice) {
                auto [it, inserted] = next.try_emplace(cost + icnet.costs[e]);
                it->second.push_back({v, e, cost});
                if (inserted && ++table.live_entries > options.max_entries) {
                    throw resource_error("DP table exceeded " + std::to_string(options.max_entries) + " entries");
                }
            }
        }
        table.peak_entries = std::max(table.peak_entries, table.live_entries);
    }
    return table;
}

// Walks back-pointers from (v, cost) and reports every source-to-v path with that
// cost vector, canonical path first. Stops after `limit` paths in total.
inline void for_each_realization(const IntegerCostNetwork& icnet, const DpTable& table, VertexIndex v,
                                 const CostVector& cost, std::size_t& budget,
                                 const std::function<void(std::span<const EdgeIndex>)>& visit) {
    std::vector<EdgeIndex> reversed;
    std::function<void(VertexIndex, const CostVector&)> walk = [&](VertexIndex at, const CostVector& c) {
        if (budget == 0) return;
        if (at == icnet.base.source_index()) {
            std::vector<EdgeIndex> edges(reversed.rbegin(), reversed.rend());
            --budget;
            visit(edges);
            return;
        }
        const auto& back = table.at[at].at(c);
        for (const auto& bp : back) {
            reversed.push_back(bp.edge);
            walk(bp.from, bp.from_cost);
            reversed.pop_back();
            if (budget == 0) return;
        }
    };
    walk(v, cost);
}

struct DpResult {
    SolveResult solve;
    double grid_objective = 0.0;  // mixture reliability of the winning cost vector on the grid
    CostVector cost;
    std::size_t sink_vectors = 0;
    std::size_t peak_entries = 0;
};

// Most reliable path on an integer-cost network. Among sink cost vectors, those
// whose grid objective is within 1e-12 (relative) of the best are candidates,
// visited lexicographically largest first; every path realizing a candidate is
// evaluated on the base network and the most reliable wins, earliest on ties.
// The returned reliability is always recomputed from the base reliabilities.
inline DpResult dp_solve(const IntegerCostNetwork& icnet, const DpOptions& options = {}) {
    const Network& net = icnet.base;
    const DpTable table = build_dp_table(icnet, options);
    const DpSlice& sink = table.at[net.sink_index()];

    DpResult result;
    result.solve.method = "dp";
    result.sink_vectors = sink.size();
    result.peak_entries = table.peak_entries;
    if (sink.empty()) return result;

    double best_objective = 0.0;
    for (const auto& [cost, back] : sink) best_objective = std::max(best_objective, icnet.objective(cost));
    const double cutoff = best_objective * (1.0 - 1e-12);

    std::size_t budget = options.max_realizations;
    std::vector<EdgeIndex> best_edges;
    double best_reliability = -1.0;
    for (auto it = sink.rbegin(); it != sink.rend(); ++it) {
        double objective = icnet.objective(it->first);
        if (objective < cutoff) continue;
        if (budget == 0) budget = 1;  // always evaluate at least the canonical path of each candidate
        for_each_realization(icnet, table, net.sink_index(), it->first, budget, [&](std::span<const EdgeIndex> edges) {
            double r = detail::path_reliability(net, edges);
            if (r > best_reliability) {
                best_reliability = r;
                best_edges.assign(edges.begin(), edges.end());
                result.cost = it->first;
                result.grid_objective = objective;
            }
        });
    }
    result.solve.path = path_from_indices(net, best_edges);
    result.solve.reliability = best_reliability;
    return result;
}

}  // namespace mrp
