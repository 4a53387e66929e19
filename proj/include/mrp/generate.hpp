#pragma once

// Seeded random layered DAGs. The same parameters and seed always give the same
// network: draws come from mt19937_64, whose output sequence is fixed by the
// standard, and are mapped to numbers without any library distribution object.

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mrp/model.hpp"

namespace mrp {

struct GeneratorParams {
    std::size_t vertices = 6;     // including source and sink
    std::size_t layer_width = 2;  // interior vertices per layer
    double density = 0.5;         // probability of each extra edge between adjacent layers
    double skip_density = 0.1;    // probability of each edge jumping over one layer
    std::size_t states = 2;
    double min_reliability = 0.05;
    double max_reliability = 1.0;
    // When set, reliabilities are e^(-j) with j uniform in {0, ..., levels-1}
    // (exact on the unit-1 grid); min/max are then ignored.
    std::optional<std::size_t> grid_levels;
    bool uniform_prior = false;
    // Probability that an edge gets a parallel twin with an identical reliability vector.
    double parallel_probability = 0.0;
    std::uint64_t seed = 0;
};

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
    bool chance(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

inline void check_generator_params(const GeneratorParams& p) {
    if (p.vertices < 2) throw input_error("need at least 2 vertices (source and sink)");
    if (p.layer_width < 1) throw input_error("layer width must be at least 1");
    if (!(p.density >= 0.0 && p.density <= 1.0)) throw input_error("density must lie in [0,1]");
    if (!(p.skip_density >= 0.0 && p.skip_density <= 1.0)) throw input_error("skip density must lie in [0,1]");
    if (!(p.parallel_probability >= 0.0 && p.parallel_probability <= 1.0))
        throw input_error("parallel probability must lie in [0,1]");
    if (p.states < 1) throw input_error("state count must be positive");
    if (p.grid_levels && *p.grid_levels < 1) throw input_error("grid levels must be positive");
    if (!p.grid_levels &&
        !(p.min_reliability >= 0.0 && p.min_reliability <= p.max_reliability && p.max_reliability <= 1.0))
        throw input_error("reliability range must satisfy 0 <= min <= max <= 1");
}

// Layered DAG: source, ceil((n-2)/width) interior layers, sink. Every vertex gets
// at least one edge from the previous layer and one into the next, so the sink is
// always reachable from the source.
inline Network generate_random(const GeneratorParams& p) {
    check_generator_params(p);
    Rng rng(p.seed);

    std::vector<std::string> names{"s"};
    std::vector<std::vector<std::size_t>> layers{{0}};
    const std::size_t interior = p.vertices - 2;
    for (std::size_t i = 0; i < interior; ++i) {
        if (i % p.layer_width == 0) layers.emplace_back();
        layers.back().push_back(names.size());
        names.push_back("v" + std::to_string(i + 1));
    }
    layers.push_back({names.size()});
    names.push_back("t");

    std::set<std::pair<std::size_t, std::size_t>> arcs;
    for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
        const auto& from = layers[l];
        const auto& to = layers[l + 1];
        for (std::size_t w : to) arcs.insert({from[rng.below(from.size())], w});
        for (std::size_t u : from) {
            bool has_out = false;
            for (std::size_t w : to) has_out = has_out || arcs.count({u, w});
            if (!has_out) arcs.insert({u, to[rng.below(to.size())]});
        }
        for (std::size_t u : from)
            for (std::size_t w : to)
                if (rng.chance(p.density)) arcs.insert({u, w});
        if (l + 2 < layers.size()) {
            for (std::size_t u : from)
                for (std::size_t w : layers[l + 2])
                    if (rng.chance(p.skip_density)) arcs.insert({u, w});
        }
    }

    auto draw_reliability = [&] {
        if (p.grid_levels) return std::exp(-static_cast<double>(rng.below(*p.grid_levels)));
        return p.min_reliability == p.max_reliability ? p.min_reliability
                                                      : rng.uniform(p.min_reliability, p.max_reliability);
    };

    std::vector<Edge> edges;
    for (const auto& [u, w] : arcs) {
        std::vector<double> r(p.states);
        for (auto& x : r) x = draw_reliability();
        edges.push_back({"e" + std::to_string(edges.size() + 1), names[u], names[w], r});
        if (rng.chance(p.parallel_probability))
            edges.push_back({"e" + std::to_string(edges.size() + 1), names[u], names[w], std::move(r)});
    }

    std::vector<double> prior(p.states, 1.0 / static_cast<double>(p.states));
    if (!p.uniform_prior && p.states > 1) {
        double sum = 0.0;
        for (auto& x : prior) sum += (x = 0.05 + rng.uniform());
        for (auto& x : prior) x /= sum;
    }
    return Network(p.states, std::move(prior), std::move(names), "s", "t", std::move(edges));
}

}  // namespace mrp
