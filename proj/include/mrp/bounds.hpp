#pragma once

// Log-domain bounds on the optimum.
//
//   f(path) = log sum_k prior_k * Pr[path survives | k]      (the true objective)
//   g(path) = sum_k prior_k * log Pr[path survives | k]      (Jensen lower bound)
//
// g is additive over edges, so its maximizer is a longest path in the DAG.

#include <optional>
#include <vector>

#include "mrp/model.hpp"
#include "mrp/oracle.hpp"

namespace mrp {

inline LogReliability f_value(const Network& net, const Path& path) {
    return LogReliability::from_probability(std::min(1.0, path_reliability(net, path)));
}

namespace detail {

inline LogReliability edge_g_cost(const Network& net, EdgeIndex e) {
    LogReliability total;
    for (std::size_t k = 0; k < net.state_count(); ++k)
        total += edge_log_reliability(net, e, k).weighted(net.prior()[k]);
    return total;
}

}  // namespace detail

inline LogReliability edge_g_cost(const Network& net, std::string_view edge_id) {
    auto e = net.edge_index(edge_id);
    if (!e) throw input_error("unknown edge '" + std::string(edge_id) + "'");
    return detail::edge_g_cost(net, *e);
}

// Evaluated straight from the definition (per-state conditional reliability first,
// then the prior-weighted log), independently of edge_g_cost.
inline LogReliability g_value(const Network& net, const Path& path) {
    const auto edges = resolve_path(net, path);
    LogReliability total;
    for (std::size_t k = 0; k < net.state_count(); ++k) {
        double conditional = detail::conditional_reliability(net, edges, k);
        total += LogReliability::from_probability(conditional).weighted(net.prior()[k]);
    }
    return total;
}

struct LowerBoundResult {
    std::optional<Path> sigma_star;  // absent when the sink is unreachable
    LogReliability g_of_sigma = LogReliability::impossible();
    LogReliability f_of_sigma = LogReliability::impossible();

    // Per-vertex DP value (best g of any source-to-v path), nullopt when v is unreachable.
    std::vector<std::optional<LogReliability>> table;
};

// Maximizes g exactly by a longest-path sweep in topological order. Among
// predecessors achieving the maximum, the one earliest in topological order wins,
// then the smaller edge id.
inline LowerBoundResult lower_bound_dp(const Network& net) {
    const auto order = topo_order_indices(net);
    std::vector<std::size_t> rank(net.vertex_count());
    for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i;

    LowerBoundResult result;
    result.table.assign(net.vertex_count(), std::nullopt);
    std::vector<EdgeIndex> via(net.vertex_count(), kNoIndex);
    result.table[net.source_index()] = LogReliability();

    for (VertexIndex v : order) {
        if (v == net.source_index()) continue;
        auto in = net.in_edges(v);
        std::stable_sort(in.begin(), in.end(),
                         [&](EdgeIndex a, EdgeIndex b) { return rank[net.tail(a)] < rank[net.tail(b)]; });
        for (EdgeIndex e : in) {
            const auto& from = result.table[net.tail(e)];
            if (!from) continue;
            LogReliability candidate = *from + detail::edge_g_cost(net, e);
            if (!result.table[v] || candidate > *result.table[v]) {
                result.table[v] = candidate;
                via[v] = e;
            }
        }
    }

    const VertexIndex t = net.sink_index();
    if (!result.table[t]) return result;

    std::vector<EdgeIndex> edges;
    for (VertexIndex v = t; v != net.source_index(); v = net.tail(via[v])) edges.push_back(via[v]);
    std::reverse(edges.begin(), edges.end());
    result.sigma_star = path_from_indices(net, edges);
    result.g_of_sigma = *result.table[t];
    result.f_of_sigma = f_value(net, *result.sigma_star);
    return result;
}

struct SandwichCertificate {
    LogReliability g_pi_star;
    LogReliability g_sigma_star;
    LogReliability f_sigma_star;
    LogReliability f_pi_star;
    Path pi_star;
    Path sigma_star;

    // g(pi*) <= g(sigma*) <= f(sigma*) <= f(pi*), with slack on the comparisons
    // between independently computed quantities.
    bool holds(double slack = 1e-9) const {
        return leq_with_slack(g_pi_star, g_sigma_star, slack) && leq_with_slack(g_sigma_star, f_sigma_star, slack) &&
               leq_with_slack(f_sigma_star, f_pi_star, slack);
    }
};

inline SandwichCertificate sandwich_certificate(const Network& net, std::size_t max_paths = kDefaultMaxPaths) {
    const SolveResult best = brute_force_best(net, max_paths);
    if (!best.found()) throw input_error("sink is unreachable");
    const LowerBoundResult lower = lower_bound_dp(net);

    SandwichCertificate cert;
    cert.pi_star = *best.path;
    cert.sigma_star = *lower.sigma_star;
    cert.g_pi_star = g_value(net, cert.pi_star);
    cert.g_sigma_star = lower.g_of_sigma;
    cert.f_sigma_star = lower.f_of_sigma;
    cert.f_pi_star = f_value(net, cert.pi_star);
    return cert;
}

}  // namespace mrp
