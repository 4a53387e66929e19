#include <gtest/gtest.h>

#include <cmath>

#include "mrp/approx.hpp"
#include "mrp/oracle.hpp"
#include "test_support.hpp"

namespace mrp {
namespace {

using testing::make_network;
using testing::path;

TEST(Coarsen, Examples) {
    auto net = make_network({1.0}, {"s", "a", "b", "c", "t"},
                            {{"e1", "s", "a", {std::exp(-0.3)}},
                             {"e2", "a", "b", {std::exp(-0.4)}},
                             {"e3", "b", "c", {0.0}},
                             {"e4", "c", "t", {1.0}}});
    auto c = coarsen(net, 0.2);
    EXPECT_EQ(c.costs[0], CostVector({-2}));
    EXPECT_EQ(c.costs[1], CostVector({-2}));
    EXPECT_EQ(c.costs[2], CostVector({kImpossibleCost}));
    EXPECT_EQ(c.costs[3], CostVector({0}));
    EXPECT_THROW(coarsen(net, 0.0), Error);
    EXPECT_THROW(coarsen(net, -1.0), Error);
}

TEST(Coarsen, FloorsWithinOneUnit) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto net = generate_random(testing::family(8, 3, seed));
        for (double unit : {0.01, 0.137, 1.0}) {
            auto c = coarsen(net, unit);
            for (EdgeIndex e = 0; e < net.edge_count(); ++e) {
                for (std::size_t k = 0; k < net.state_count(); ++k) {
                    double log_r = std::log(net.reliability(e, k));
                    double grid = unit * static_cast<double>(c.costs[e][k]);
                    EXPECT_LE(grid, log_r);
                    EXPECT_GT(grid, log_r - unit - 1e-12);
                }
            }
        }
    }
}

TEST(Coarsen, CoarsenedObjectiveNeverExceedsTruth) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto net = generate_random(testing::family(7, 2, seed));
        auto c = coarsen(net, basic_unit(net.vertex_count(), 0.1));
        for (const auto& p : enumerate_paths(net)) {
            CostVector sum(net.state_count());
            for (EdgeIndex e : resolve_path(net, p)) sum = sum + c.costs[e];
            double truth = path_reliability(net, p);
            EXPECT_LE(c.objective(sum), truth * (1 + 1e-12));
            EXPECT_GE(c.objective(sum), truth * 0.9 * (1 - 1e-12));
        }
    }
}

TEST(ApproxBasic, EpsilonOutOfRange) {
    auto net = testing::gap_diamond();
    EXPECT_THROW(approx_solve_basic(net, 0.0), Error);
    EXPECT_THROW(approx_solve_basic(net, 1.0), Error);
    EXPECT_THROW(approx_solve_pruned(net, -0.5), Error);
}

TEST(ApproxBasic, WithinOneMinusEpsilonOfOptimum) {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        auto net = generate_random(testing::family(4 + seed % 6, 1 + seed % 3, seed));
        const double opt = brute_force_best(net).reliability;
        for (double eps : {0.3, 0.1, 0.01}) {
            auto r = approx_solve_basic(net, eps);
            ASSERT_TRUE(r.found());
            EXPECT_GE(r.true_reliability, (1 - eps) * opt * (1 - 1e-12)) << "seed " << seed << " eps " << eps;
            EXPECT_LE(r.true_reliability, opt);
            EXPECT_EQ(r.true_reliability, path_reliability(net, *r.path));
            EXPECT_LE(r.coarsened_value, r.true_reliability * (1 + 1e-12));
        }
    }
}

TEST(ApproxBasic, AllOnesNetworkFindsPerfectPath) {
    auto net = testing::diamond({0.5, 0.5}, {1, 1}, {0.2, 0.3}, {1, 1}, {0.9, 0.9});
    auto r = approx_solve_basic(net, 0.1);
    EXPECT_EQ(*r.path, path({"e1", "e3"}));
    EXPECT_EQ(r.true_reliability, 1.0);
    EXPECT_EQ(r.coarsened_value, 1.0);
}

TEST(ApproxBasic, UnreachableSink) {
    auto net = make_network({1.0}, {"s", "a", "t"}, {{"e1", "s", "a", {0.5}}});
    EXPECT_FALSE(approx_solve_basic(net, 0.1).found());
    EXPECT_FALSE(approx_solve_pruned(net, 0.1).found());
}

TEST(PruneBelow, Examples) {
    auto net = testing::diamond({0.5, 0.5}, {0.9, 0.4}, {0.9, 0.9}, {0.6, 0.7}, {0.8, 0.8});
    auto pruned = prune_below(net, 0.5);
    EXPECT_EQ(pruned.edge_count(), 3u);
    EXPECT_FALSE(pruned.edge_index("e1"));  // one state is below, so the edge goes
    EXPECT_EQ(pruned.vertex_count(), net.vertex_count());
    EXPECT_EQ(prune_below(net, 0.4).edge_count(), 4u);  // threshold is inclusive
    EXPECT_EQ(prune_below(net, 0.95).edge_count(), 0u);
}

TEST(PruningThresholds, DistinctInteriorValues) {
    auto net = testing::diamond({0.5, 0.5}, {1.0, 0.4}, {0.0, 0.9}, {0.4, 0.7}, {0.9, 1.0});
    EXPECT_EQ(pruning_thresholds(net), (std::vector<double>{0.4, 0.7, 0.9}));
}

TEST(ApproxPruned, WithinPowerOfOptimum) {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        auto net = generate_random(testing::family(4 + seed % 6, 1 + seed % 3, seed));
        const double opt = brute_force_best(net).reliability;
        for (double eps : {0.3, 0.1}) {
            auto r = approx_solve_pruned(net, eps);
            ASSERT_TRUE(r.found());
            EXPECT_GE(r.true_reliability, std::pow(opt, 1 + eps) * (1 - 1e-12)) << "seed " << seed << " eps " << eps;
            EXPECT_LE(r.true_reliability, opt);
            EXPECT_EQ(r.guard_trips, 0u);
            EXPECT_GT(r.prunings_evaluated, 0u);
            ASSERT_TRUE(r.threshold);
        }
    }
}

TEST(ApproxPruned, PerfectPathShortCircuits) {
    auto net = testing::diamond({0.5, 0.5}, {0.3, 0.3}, {1, 1}, {0.3, 0.3}, {1, 1});
    auto r = approx_solve_pruned(net, 0.1);
    EXPECT_EQ(*r.path, path({"e2", "e4"}));
    EXPECT_EQ(r.true_reliability, 1.0);
    EXPECT_EQ(r.prunings_evaluated, 0u);
}

TEST(ApproxPruned, SinglePathNetworkReturnsIt) {
    auto net = make_network({0.3, 0.7}, {"s", "a", "t"}, {{"x", "s", "a", {0.2, 0.6}}, {"y", "a", "t", {0.5, 0.9}}});
    for (double eps : {0.5, 0.1}) {
        EXPECT_EQ(*approx_solve_pruned(net, eps).path, path({"x", "y"}));
        EXPECT_EQ(*approx_solve_basic(net, eps).path, path({"x", "y"}));
    }
}

TEST(ApproxPruned, GuardTripsAreCounted) {
    auto net = generate_random(testing::family(10, 3, 4));
    PrunedOptions opts;
    opts.dp.max_entries = 1;
    auto r = approx_solve_pruned(net, 0.1, opts);
    EXPECT_GT(r.guard_trips, 0u);
    EXPECT_EQ(r.guard_trips + r.prunings_evaluated, pruning_thresholds(net).size() - [&] {
        std::size_t disconnected = 0;
        for (double a : pruning_thresholds(net)) disconnected += first_path(prune_below(net, a)) ? 0 : 1;
        return disconnected;
    }());
}

TEST(ApproxPruned, GridLossBoundArithmetic) {
    // A path whose edges all survive threshold a loses at most a factor a^eps on the
    // finer grid; if its reliability is at most a this is at least OPT^eps.
    for (double a : {0.9, 0.5, 0.1, 1e-3}) {
        for (double eps : {0.5, 0.1, 0.01}) {
            for (double opt : {a, a * 0.5, a * a}) {
                EXPECT_GE(opt * std::pow(a, eps), std::pow(opt, 1 + eps) * (1 - 1e-15));
            }
        }
    }
}

TEST(ApproxPruned, AdditiveSlackBecomesMultiplicative) {
    // x >= delta/eps and y <= x + delta give y <= x(1 + eps)
    Rng rng(45);
    for (int i = 0; i < 10000; ++i) {
        const double eps = rng.uniform(1e-3, 1.0), delta = rng.uniform(0.0, 5.0);
        const double x = delta / eps * (1.0 + rng.uniform(0.0, 3.0));
        const double y = x + delta * rng.uniform();
        EXPECT_LE(y, x * (1 + eps) * (1 + 1e-15));
    }
}

TEST(ApproxPruned, ZeroStateOnOptimalPathIsNeverRetained) {
    // The optimum uses edges that are dead under one state. Zero is not a threshold,
    // so every iteration prunes those edges and only the lower path remains.
    auto net = testing::gap_diamond();
    auto r = approx_solve_pruned(net, 0.25);
    EXPECT_EQ(*r.path, path({"e2", "e4"}));
    EXPECT_NEAR(r.true_reliability, 0.36, 1e-15);
    EXPECT_LT(r.true_reliability, std::pow(brute_force_best(net).reliability, 1.25));
}

TEST(ApproxPruned, ThreadCountDoesNotChangeResult) {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        auto net = generate_random(testing::family(9, 2, seed));
        auto one = approx_solve_pruned(net, 0.1, {.threads = 1});
        auto four = approx_solve_pruned(net, 0.1, {.threads = 4});
        EXPECT_EQ(one.path, four.path);
        EXPECT_EQ(one.true_reliability, four.true_reliability);
        EXPECT_EQ(one.threshold, four.threshold);
        EXPECT_EQ(one.prunings_evaluated, four.prunings_evaluated);
    }
}

TEST(Approx, TighterEpsilonStaysInBand) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        auto net = generate_random(testing::family(8, 2, seed));
        const double opt = brute_force_best(net).reliability;
        for (double eps : {0.5, 0.2, 0.05, 0.01}) {
            double r = approx_solve_basic(net, eps).true_reliability;
            EXPECT_GE(r, (1 - eps) * opt * (1 - 1e-12));
            EXPECT_LE(r, opt);
        }
    }
}

}  // namespace
}  // namespace mrp
