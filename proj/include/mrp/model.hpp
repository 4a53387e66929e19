#pragma once

// Networks whose edge failures are independent given a hidden discrete state.
//
// A Network stores, for every edge, the probability that the edge has NOT failed
// under each hidden state, plus the prior over states. Construction never throws
// on bad data: validate_network() reports every violated invariant so that tools
// can print them all. Algorithms assume a valid network.
//
// Hidden states are indexed from 0 in this API.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mrp/error.hpp"
#include "mrp/log_reliability.hpp"

namespace mrp {

using VertexIndex = std::size_t;
using EdgeIndex = std::size_t;

inline constexpr std::size_t kNoIndex = std::numeric_limits<std::size_t>::max();
inline constexpr double kProbabilitySumTolerance = 1e-9;

struct Edge {
    std::string id;
    std::string from;
    std::string to;
    std::vector<double> reliability;  // entry k = Pr[edge has not failed | X = k]
};

// Ordered edge identifiers from source to sink. Edge ids (not vertices) so that
// parallel edges stay distinguishable.
struct Path {
    std::vector<std::string> edge_ids;

    bool empty() const noexcept { return edge_ids.empty(); }
    std::size_t size() const noexcept { return edge_ids.size(); }
    friend bool operator==(const Path&, const Path&) = default;
    friend auto operator<=>(const Path&, const Path&) = default;
};

inline std::string to_string(const Path& path) {
    std::string out;
    for (const auto& id : path.edge_ids) {
        if (!out.empty()) out += ' ';
        out += id;
    }
    return out;
}

class Network {
public:
    Network() = default;

    Network(std::size_t state_count, std::vector<double> prior, std::vector<std::string> vertices,
            std::string source, std::string sink, std::vector<Edge> edges)
        : state_count_(state_count),
          prior_(std::move(prior)),
          vertices_(std::move(vertices)),
          source_(std::move(source)),
          sink_(std::move(sink)),
          edges_(std::move(edges)) {
        build_index();
    }

    std::size_t state_count() const noexcept { return state_count_; }
    const std::vector<double>& prior() const noexcept { return prior_; }
    const std::vector<std::string>& vertices() const noexcept { return vertices_; }
    const std::string& source() const noexcept { return source_; }
    const std::string& sink() const noexcept { return sink_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    std::size_t vertex_count() const noexcept { return vertices_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    std::optional<VertexIndex> vertex_index(std::string_view name) const {
        auto it = vertex_lookup_.find(std::string(name));
        if (it == vertex_lookup_.end()) return std::nullopt;
        return it->second;
    }

    std::optional<EdgeIndex> edge_index(std::string_view id) const {
        auto it = edge_lookup_.find(std::string(id));
        if (it == edge_lookup_.end()) return std::nullopt;
        return it->second;
    }

    // kNoIndex when the endpoint is not a listed vertex.
    VertexIndex tail(EdgeIndex e) const { return tails_[e]; }
    VertexIndex head(EdgeIndex e) const { return heads_[e]; }
    VertexIndex source_index() const noexcept { return source_index_; }
    VertexIndex sink_index() const noexcept { return sink_index_; }

    // Edges with resolvable endpoints, sorted by edge id.
    const std::vector<EdgeIndex>& out_edges(VertexIndex v) const { return out_[v]; }
    const std::vector<EdgeIndex>& in_edges(VertexIndex v) const { return in_[v]; }

    double reliability(EdgeIndex e, std::size_t state) const { return edges_[e].reliability[state]; }

private:
    void build_index() {
        for (std::size_t v = 0; v < vertices_.size(); ++v) vertex_lookup_.try_emplace(vertices_[v], v);
        for (std::size_t e = 0; e < edges_.size(); ++e) edge_lookup_.try_emplace(edges_[e].id, e);

        auto resolve = [&](const std::string& name) {
            auto it = vertex_lookup_.find(name);
            return it == vertex_lookup_.end() ? kNoIndex : it->second;
        };
        source_index_ = resolve(source_);
        sink_index_ = resolve(sink_);

        out_.assign(vertices_.size(), {});
        in_.assign(vertices_.size(), {});
        tails_.resize(edges_.size());
        heads_.resize(edges_.size());
        for (std::size_t e = 0; e < edges_.size(); ++e) {
            tails_[e] = resolve(edges_[e].from);
            heads_[e] = resolve(edges_[e].to);
            if (tails_[e] == kNoIndex || heads_[e] == kNoIndex) continue;
            out_[tails_[e]].push_back(e);
            in_[heads_[e]].push_back(e);
        }
        auto by_id = [&](EdgeIndex a, EdgeIndex b) {
            return edges_[a].id != edges_[b].id ? edges_[a].id < edges_[b].id : a < b;
        };
        for (auto& list : out_) std::sort(list.begin(), list.end(), by_id);
        for (auto& list : in_) std::sort(list.begin(), list.end(), by_id);
    }

    std::size_t state_count_ = 0;
    std::vector<double> prior_;
    std::vector<std::string> vertices_;
    std::string source_;
    std::string sink_;
    std::vector<Edge> edges_;

    std::unordered_map<std::string, VertexIndex> vertex_lookup_;
    std::unordered_map<std::string, EdgeIndex> edge_lookup_;
    std::vector<VertexIndex> tails_;
    std::vector<VertexIndex> heads_;
    VertexIndex source_index_ = kNoIndex;
    VertexIndex sink_index_ = kNoIndex;
    std::vector<std::vector<EdgeIndex>> out_;
    std::vector<std::vector<EdgeIndex>> in_;
};

// ---------------------------------------------------------------------------
// Validation

struct Violation {
    std::string code;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const noexcept { return violations.empty(); }

    bool has(std::string_view code) const {
        return std::any_of(violations.begin(), violations.end(),
                           [&](const Violation& v) { return v.code == code; });
    }

    void add(std::string code, std::string message) {
        violations.push_back({std::move(code), std::move(message)});
    }
};

namespace detail {

// Kahn's algorithm, smallest vertex-list position first among ready vertices.
// Returns an order covering fewer than all vertices when a cycle exists.
inline std::vector<VertexIndex> kahn_order(const Network& net) {
    const std::size_t n = net.vertex_count();
    std::vector<std::size_t> indegree(n, 0);
    for (VertexIndex v = 0; v < n; ++v) indegree[v] = net.in_edges(v).size();

    std::priority_queue<VertexIndex, std::vector<VertexIndex>, std::greater<>> ready;
    for (VertexIndex v = 0; v < n; ++v)
        if (indegree[v] == 0) ready.push(v);

    std::vector<VertexIndex> order;
    order.reserve(n);
    while (!ready.empty()) {
        VertexIndex v = ready.top();
        ready.pop();
        order.push_back(v);
        for (EdgeIndex e : net.out_edges(v))
            if (--indegree[net.head(e)] == 0) ready.push(net.head(e));
    }
    return order;
}

}  // namespace detail

inline ValidationReport validate_network(const Network& net) {
    ValidationReport report;
    const std::size_t d = net.state_count();

    if (d == 0) report.add("state-count", "state_count must be positive");

    if (net.prior().size() != d) {
        report.add("prior-length", "prior has " + std::to_string(net.prior().size()) +
                                       " entries, expected " + std::to_string(d));
    }
    double prior_sum = 0.0;
    for (std::size_t k = 0; k < net.prior().size(); ++k) {
        double p = net.prior()[k];
        if (!(p >= 0.0 && p <= 1.0))
            report.add("prior-range", "prior[" + std::to_string(k) + "] outside [0,1]");
        prior_sum += p;
    }
    if (!(std::abs(prior_sum - 1.0) <= kProbabilitySumTolerance)) {
        std::ostringstream os;
        os.precision(17);
        os << "prior sums to " << prior_sum << ", expected 1";
        report.add("prior-sum", os.str());
    }

    {
        std::unordered_map<std::string, std::size_t> seen;
        for (const auto& name : net.vertices())
            if (++seen[name] == 2) report.add("duplicate-vertex", "vertex '" + name + "' listed twice");
    }

    if (net.source_index() == kNoIndex)
        report.add("missing-source", "source '" + net.source() + "' is not a listed vertex");
    if (net.sink_index() == kNoIndex)
        report.add("missing-sink", "sink '" + net.sink() + "' is not a listed vertex");
    if (net.source() == net.sink())
        report.add("source-equals-sink", "source and sink must be distinct");

    {
        std::unordered_map<std::string, std::size_t> seen;
        for (std::size_t e = 0; e < net.edge_count(); ++e) {
            const Edge& edge = net.edges()[e];
            if (++seen[edge.id] == 2) report.add("duplicate-edge", "edge id '" + edge.id + "' used twice");
            if (net.tail(e) == kNoIndex)
                report.add("dangling-endpoint", "edge '" + edge.id + "' leaves unknown vertex '" + edge.from + "'");
            if (net.head(e) == kNoIndex)
                report.add("dangling-endpoint", "edge '" + edge.id + "' enters unknown vertex '" + edge.to + "'");
            if (edge.reliability.size() != d) {
                report.add("reliability-length", "edge '" + edge.id + "' has " +
                                                     std::to_string(edge.reliability.size()) +
                                                     " reliabilities, expected " + std::to_string(d));
            }
            for (std::size_t k = 0; k < edge.reliability.size(); ++k) {
                double r = edge.reliability[k];
                if (!(r >= 0.0 && r <= 1.0)) {
                    report.add("reliability-range",
                               "edge '" + edge.id + "' state " + std::to_string(k) + " outside [0,1]");
                }
            }
        }
    }

    if (detail::kahn_order(net).size() != net.vertex_count()) {
        report.add("cycle", "the graph contains a directed cycle");
    }
    return report;
}

// Topological order starting at the source, ties broken by vertex-list position.
// Throws a structural error on a cycle or when the source has incoming edges.
inline std::vector<VertexIndex> topo_order_indices(const Network& net) {
    if (net.source_index() == kNoIndex) throw input_error("source is not a listed vertex");
    if (!net.in_edges(net.source_index()).empty())
        throw structural_error("source '" + net.source() + "' has incoming edges; no order starts at the source");
    auto order = detail::kahn_order(net);
    if (order.size() != net.vertex_count()) throw structural_error("the graph contains a directed cycle");
    // The source is ready from the start; move it to the front without disturbing
    // the relative order of the remaining vertices.
    auto it = std::find(order.begin(), order.end(), net.source_index());
    std::rotate(order.begin(), it, it + 1);
    return order;
}

inline std::vector<std::string> topo_order(const Network& net) {
    std::vector<std::string> names;
    for (VertexIndex v : topo_order_indices(net)) names.push_back(net.vertices()[v]);
    return names;
}

// ---------------------------------------------------------------------------
// Paths

// Resolves a path to edge indices, checking that it is a simple source-to-sink chain.
inline std::vector<EdgeIndex> resolve_path(const Network& net, const Path& path) {
    if (path.empty()) throw input_error("empty path");
    std::vector<EdgeIndex> edges;
    edges.reserve(path.size());
    std::vector<bool> visited(net.vertex_count(), false);
    VertexIndex at = net.source_index();
    if (at == kNoIndex) throw input_error("source is not a listed vertex");
    visited[at] = true;
    for (const auto& id : path.edge_ids) {
        auto e = net.edge_index(id);
        if (!e) throw input_error("unknown edge '" + id + "'");
        if (net.tail(*e) != at) throw input_error("path breaks at edge '" + id + "'");
        at = net.head(*e);
        if (at == kNoIndex) throw input_error("edge '" + id + "' enters an unknown vertex");
        if (visited[at]) throw input_error("path revisits vertex '" + net.vertices()[at] + "'");
        visited[at] = true;
        edges.push_back(*e);
    }
    if (at != net.sink_index()) throw input_error("path does not end at the sink");
    return edges;
}

inline Path path_from_indices(const Network& net, std::span<const EdgeIndex> edges) {
    Path path;
    path.edge_ids.reserve(edges.size());
    for (EdgeIndex e : edges) path.edge_ids.push_back(net.edges()[e].id);
    return path;
}

namespace detail {

inline double conditional_reliability(const Network& net, std::span<const EdgeIndex> edges,
                                      std::size_t state) {
    double product = 1.0;
    for (EdgeIndex e : edges) product *= net.reliability(e, state);
    return product;
}

// Mixture over hidden states; states are summed in index order and path edges
// multiplied in path order, so every caller gets bit-identical values.
inline double path_reliability(const Network& net, std::span<const EdgeIndex> edges) {
    double total = 0.0;
    for (std::size_t k = 0; k < net.state_count(); ++k)
        total += net.prior()[k] * conditional_reliability(net, edges, k);
    return total;
}

inline LogReliability edge_log_reliability(const Network& net, EdgeIndex e, std::size_t state) {
    return LogReliability::from_probability(net.reliability(e, state));
}

}  // namespace detail

inline void check_state(const Network& net, std::size_t state) {
    if (state >= net.state_count())
        throw input_error("state " + std::to_string(state) + " out of range (d = " +
                          std::to_string(net.state_count()) + ")");
}

inline double conditional_path_reliability(const Network& net, const Path& path, std::size_t state) {
    check_state(net, state);
    return detail::conditional_reliability(net, resolve_path(net, path), state);
}

inline double path_reliability(const Network& net, const Path& path) {
    return detail::path_reliability(net, resolve_path(net, path));
}

inline LogReliability edge_log_reliability(const Network& net, std::string_view edge_id,
                                           std::size_t state) {
    auto e = net.edge_index(edge_id);
    if (!e) throw input_error("unknown edge '" + std::string(edge_id) + "'");
    check_state(net, state);
    return detail::edge_log_reliability(net, *e, state);
}

// First source-to-sink path in depth-first order over edge ids, or nothing when the
// sink is unreachable. Linear time; every vertex is expanded at most once.
inline std::optional<std::vector<EdgeIndex>> first_path(const Network& net) {
    const VertexIndex s = net.source_index(), t = net.sink_index();
    if (s == kNoIndex || t == kNoIndex) return std::nullopt;
    std::vector<bool> dead(net.vertex_count(), false);
    std::vector<EdgeIndex> stack;

    std::function<bool(VertexIndex)> dfs = [&](VertexIndex v) {
        if (v == t) return true;
        for (EdgeIndex e : net.out_edges(v)) {
            VertexIndex w = net.head(e);
            if (dead[w]) continue;
            stack.push_back(e);
            if (dfs(w)) return true;
            stack.pop_back();
        }
        dead[v] = true;
        return false;
    };
    if (!dfs(s)) return std::nullopt;
    return stack;
}

// Relabels vertex and edge identifiers. Solvers must be indifferent to names.
template <class VertexFn, class EdgeFn>
Network relabel(const Network& net, VertexFn&& vertex_name, EdgeFn&& edge_name) {
    std::vector<std::string> vertices;
    for (const auto& v : net.vertices()) vertices.push_back(vertex_name(v));
    std::vector<Edge> edges;
    for (const auto& e : net.edges())
        edges.push_back({edge_name(e.id), vertex_name(e.from), vertex_name(e.to), e.reliability});
    return Network(net.state_count(), net.prior(), std::move(vertices), vertex_name(net.source()),
                   vertex_name(net.sink()), std::move(edges));
}

}  // namespace mrp
