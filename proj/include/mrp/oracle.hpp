#pragma once

// Exhaustive path enumeration. Exponential by nature; every other solver in the
// library is checked against brute_force_best on small instances.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mrp/model.hpp"

namespace mrp {

inline constexpr std::size_t kDefaultMaxPaths = 1'000'000;

struct SolveResult {
    std::optional<Path> path;  // absent when the sink is unreachable
    double reliability = 0.0;
    std::string method;

    bool found() const noexcept { return path.has_value(); }
};

namespace detail {

// Vertices from which the sink can be reached.
inline std::vector<bool> reaches_sink(const Network& net) {
    std::vector<bool> reach(net.vertex_count(), false);
    if (net.sink_index() == kNoIndex) return reach;
    std::vector<VertexIndex> stack{net.sink_index()};
    reach[net.sink_index()] = true;
    while (!stack.empty()) {
        VertexIndex v = stack.back();
        stack.pop_back();
        for (EdgeIndex e : net.in_edges(v)) {
            VertexIndex u = net.tail(e);
            if (!reach[u]) {
                reach[u] = true;
                stack.push_back(u);
            }
        }
    }
    return reach;
}

}  // namespace detail

// Calls visit(edges) for every simple source-to-sink path, depth first with
// out-edges taken in edge-id order. Throws a resource error once more than
// max_paths paths have been produced.
inline void for_each_path(const Network& net,
                          const std::function<void(std::span<const EdgeIndex>)>& visit,
                          std::size_t max_paths = kDefaultMaxPaths) {
    const VertexIndex s = net.source_index(), t = net.sink_index();
    if (s == kNoIndex || t == kNoIndex) return;
    const auto reach = detail::reaches_sink(net);
    if (!reach[s]) return;

    std::size_t produced = 0;
    std::vector<EdgeIndex> stack;
    std::function<void(VertexIndex)> dfs = [&](VertexIndex v) {
        if (v == t) {
            if (++produced > max_paths)
                throw resource_error("path enumeration exceeded " + std::to_string(max_paths) + " paths");
            visit(stack);
            return;
        }
        for (EdgeIndex e : net.out_edges(v)) {
            if (!reach[net.head(e)]) continue;
            stack.push_back(e);
            dfs(net.head(e));
            stack.pop_back();
        }
    };
    dfs(s);
}

inline std::vector<Path> enumerate_paths(const Network& net, std::size_t max_paths = kDefaultMaxPaths) {
    std::vector<Path> paths;
    for_each_path(net, [&](std::span<const EdgeIndex> edges) { paths.push_back(path_from_indices(net, edges)); },
                  max_paths);
    return paths;
}

// Most reliable path by exhaustive search; the first maximal path in enumeration
// order wins ties.
inline SolveResult brute_force_best(const Network& net, std::size_t max_paths = kDefaultMaxPaths) {
    SolveResult best{std::nullopt, 0.0, "brute"};
    std::vector<EdgeIndex> best_edges;
    bool found = false;
    for_each_path(
        net,
        [&](std::span<const EdgeIndex> edges) {
            double r = detail::path_reliability(net, edges);
            if (!found || r > best.reliability) {
                found = true;
                best.reliability = r;
                best_edges.assign(edges.begin(), edges.end());
            }
        },
        max_paths);
    if (found) best.path = path_from_indices(net, best_edges);
    return best;
}

}  // namespace mrp
