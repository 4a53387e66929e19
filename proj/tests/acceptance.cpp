// Acceptance harness: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "commands.hpp"
#include "mrp/io.hpp"
#include "mrp/mrp.hpp"

using namespace mrp;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

GeneratorParams base_family(std::size_t n, std::size_t d, std::uint64_t seed) {
    GeneratorParams p;
    p.vertices = n;
    p.layer_width = 2;
    p.density = 0.5;
    p.skip_density = 0.15;
    p.states = d;
    p.min_reliability = 0.05;
    p.max_reliability = 1.0;
    p.seed = seed;
    return p;
}

std::string fmt(double x) { return format_double(x); }

// 1
Outcome dp_matches_oracle() {
    std::size_t mismatches = 0, instances = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        auto p = base_family(4 + seed % 7, 1 + seed % 3, 1000 + seed);
        p.grid_levels = 4;
        const Network net = generate_random(p);
        const auto dp = dp_solve(quantize_exact(net, 1.0));
        const auto brute = brute_force_best(net);
        const double dp_r = dp.solve.found() ? path_reliability(net, *dp.solve.path) : 0.0;
        const double brute_r = brute.found() ? path_reliability(net, *brute.path) : 0.0;
        mismatches += dp_r != brute_r;
        ++instances;
    }
    return {mismatches == 0, std::to_string(instances) + " instances, " + std::to_string(mismatches) + " mismatches"};
}

// 2
Outcome basic_guarantee() {
    std::size_t violations = 0, checks = 0;
    double worst = 2.0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const Network net = generate_random(base_family(3 + seed % 6, 1 + seed % 2, 2000 + seed));
        const double opt = brute_force_best(net).reliability;
        for (double eps : {0.5, 0.25, 0.1}) {
            const double r = approx_solve_basic(net, eps).true_reliability;
            violations += !(r >= (1 - eps) * opt);
            worst = std::min(worst, r / opt);
            ++checks;
        }
    }
    return {violations == 0, std::to_string(checks) + " checks, " + std::to_string(violations) +
                                 " violations, worst ratio " + fmt(worst)};
}

// 3
Outcome pruned_guarantee() {
    std::size_t violations = 0, checks = 0, trips = 0;
    double worst_margin = 1.0;  // min over checks of log(r) / ((1+eps) log OPT); >= 1 means satisfied
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const Network net = generate_random(base_family(3 + seed % 6, 1 + seed % 2, 2000 + seed));
        const double opt = brute_force_best(net).reliability;
        for (double eps : {0.5, 0.25}) {
            const auto r = approx_solve_pruned(net, eps);
            trips += r.guard_trips;
            const double bound = std::pow(opt, 1 + eps);
            violations += !(r.true_reliability >= bound);
            if (opt < 1.0) worst_margin = std::min(worst_margin, (1 + eps) * std::log(opt) / std::log(r.true_reliability));
            ++checks;
        }
    }
    return {violations == 0, std::to_string(checks) + " checks, " + std::to_string(violations) + " violations, " +
                                 std::to_string(trips) + " guard trips, tightest exponent ratio " + fmt(worst_margin)};
}

// 4
Outcome sandwich_chain() {
    std::size_t failures = 0, strict = 0, distinct = 0, instances = 0;
    auto check = [&](const Network& net) {
        const auto cert = sandwich_certificate(net);
        failures += !cert.holds(1e-9);
        strict += cert.g_sigma_star < cert.f_pi_star;
        distinct += cert.pi_star != cert.sigma_star;
        ++instances;
    };
    // f prefers the upper branch, g the lower one
    check(Network(2, {0.5, 0.5}, {"s", "a", "b", "t"}, "s", "t",
                  {{"e1", "s", "a", {1.0, 0.0}}, {"e2", "s", "b", {0.6, 0.6}},
                   {"e3", "a", "t", {1.0, 0.0}}, {"e4", "b", "t", {0.6, 0.6}}}));
    for (std::uint64_t seed = 0; seed < 499; ++seed) check(generate_random(base_family(4 + seed % 7, 1 + seed % 4, 4000 + seed)));
    return {failures == 0 && strict > 0 && distinct > 0,
            std::to_string(instances) + " instances, " + std::to_string(failures) + " chain failures, " +
                std::to_string(strict) + " strict, " + std::to_string(distinct) + " with distinct maximizers"};
}

// 5
Outcome rounding_pipeline() {
    std::size_t marginal_failures = 0, jensen_failures = 0, optimal_failures = 0, flows = 0, optimal_flows = 0;
    Rng rng(5005);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        auto params = base_family(4 + seed % 5, 1 + seed % 3, 5000 + seed);
        params.parallel_probability = 0.3;
        const Network net = generate_random(params);
        const auto paths = enumerate_paths(net);

        std::vector<Path> chosen;
        std::vector<double> weights;
        double total = 0.0;
        const std::size_t count = 1 + rng.below(4);
        for (std::size_t i = 0; i < count; ++i) {
            chosen.push_back(paths[rng.below(paths.size())]);
            weights.push_back(0.1 + rng.uniform());
            total += weights.back();
        }
        for (double& w : weights) w /= total;
        const Flow flow = mix_paths(net, chosen, weights);
        const auto cert = rounding_certificate(net, flow);
        const Flow recovered = cert.distribution.marginals();
        for (EdgeIndex e = 0; e < net.edge_count(); ++e) {
            const auto& id = net.edges()[e].id;
            if (std::abs(recovered.at(id) - flow.at(id)) > 1e-9) {
                ++marginal_failures;
                break;
            }
        }
        jensen_failures += !(cert.expected_path_objective >= cert.relaxed - 1e-9);
        ++flows;

        // mix of reliability-optimal paths only
        const double opt = brute_force_best(net).reliability;
        std::vector<Path> optimal;
        for (const auto& p : paths)
            if (path_reliability(net, p) == opt) optimal.push_back(p);
        if (optimal.size() > 4) optimal.resize(4);
        std::vector<double> ow(optimal.size());
        double osum = 0.0;
        for (double& w : ow) osum += (w = 0.1 + rng.uniform());
        for (double& w : ow) w /= osum;
        const auto ocert = rounding_certificate(net, mix_paths(net, optimal, ow), true);
        for (const auto& entry : ocert.distribution.entries()) {
            if (path_reliability(net, entry.path) != opt) {
                ++optimal_failures;
                break;
            }
        }
        optimal_flows += optimal.size() > 1;
    }
    return {marginal_failures + jensen_failures + optimal_failures == 0,
            std::to_string(flows) + " flows: " + std::to_string(marginal_failures) + " marginal, " +
                std::to_string(jensen_failures) + " Jensen, " + std::to_string(optimal_failures) +
                " optimality failures (" + std::to_string(optimal_flows) + " optimal mixes had ties)"};
}

// 6
Outcome reduction_identity() {
    std::size_t mismatches = 0, bitstrings = 0;
    Rng rng(6006);
    for (int set = 0; set < 50; ++set) {
        const std::size_t width = 1 + rng.below(6), d = 1 + rng.below(9);
        TemplateSet ts{width, {}};
        for (std::size_t j = 0; j < d; ++j) {
            std::string t;
            for (std::size_t i = 0; i < width; ++i) t += "01*"[rng.below(3)];
            ts.templates.push_back(t);
        }
        const auto art = network_from_templates(ts);
        const double dd = static_cast<double>(d);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << width); ++mask) {
            std::string b;
            for (std::size_t i = 0; i < width; ++i) b += ((mask >> i) & 1) ? '1' : '0';
            const Path p = bitstring_to_path(art, b);
            // d * sum_k prior_k * R_k(path), with d distributed over the terms so every
            // intermediate is an exact small integer
            double scaled = 0.0;
            for (std::size_t k = 0; k < d; ++k)
                scaled += (dd * art.network.prior()[k]) * conditional_path_reliability(art.network, p, k);
            mismatches += scaled != static_cast<double>(count_matches(ts, b));
            ++bitstrings;
        }
    }
    return {mismatches == 0, std::to_string(bitstrings) + " bitstrings over 50 template sets, " +
                                 std::to_string(mismatches) + " mismatches"};
}

// 7
Outcome sat_correspondence() {
    std::size_t discrepancies = 0, sat = 0;
    Rng rng(7007);
    for (int f = 0; f < 100; ++f) {
        const std::size_t p = 3 + rng.below(2), m = 1 + rng.below(4);
        CnfFormula cnf{p, {}};
        for (std::size_t i = 0; i < m; ++i) {
            std::vector<int> vars;
            for (int v = 1; v <= static_cast<int>(p); ++v) vars.push_back(v);
            for (std::size_t j = 0; j < 3; ++j) std::swap(vars[j], vars[j + rng.below(vars.size() - j)]);
            std::array<int, 3> clause{};
            for (std::size_t j = 0; j < 3; ++j) clause[j] = rng.chance(0.5) ? vars[j] : -vars[j];
            cnf.clauses.push_back(clause);
        }
        const bool satisfiable = satisfying_assignment(cnf).has_value();
        const auto art = network_from_templates(templates_from_3sat(cnf));
        const double best = brute_force_best(art.network).reliability;
        // m of the 3m templates; the 1e-12 absorbs the rounding of the uniform prior
        const bool reaches = best >= 1.0 / 3.0 - 1e-12;
        discrepancies += satisfiable != reaches;
        sat += satisfiable;
    }
    return {discrepancies == 0, "100 formulas (" + std::to_string(sat) + " satisfiable), " +
                                    std::to_string(discrepancies) + " discrepancies"};
}

// 8
Outcome single_state_degeneration() {
    std::size_t disagreements = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto p = base_family(4 + seed % 7, 1, 8000 + seed);
        p.grid_levels = 4;
        const Network net = generate_random(p);
        const double brute = brute_force_best(net).reliability;
        const auto lb = lower_bound_dp(net);
        const double values[] = {
            lb.sigma_star ? path_reliability(net, *lb.sigma_star) : 0.0,
            dp_solve(quantize_exact(net, 1.0)).solve.reliability,
            approx_solve_basic(net, 0.01).true_reliability,
        };
        for (double v : values) disagreements += std::abs(v - brute) > 1e-9;
    }
    return {disagreements == 0, "100 instances, " + std::to_string(disagreements) + " disagreements"};
}

// 9
Outcome determinism() {
    namespace fs = std::filesystem;
    using namespace mrp::cli;
    const fs::path dir = fs::temp_directory_path() / "mrp_acceptance";
    fs::create_directories(dir);
    auto write = [&](const std::string& name, const std::string& text) {
        const auto path = (dir / name).string();
        std::ofstream(path, std::ios::binary) << text;
        return path;
    };

    auto gp = base_family(9, 2, 9009);
    const auto net_file = write("net.json", serialize_network(generate_random(gp)));
    auto grid = gp;
    grid.grid_levels = 4;
    const auto grid_file = write("grid.json", serialize_network(generate_random(grid)));
    const auto cnf_file = write("f.cnf", "p cnf 4 2\n1 -2 3 0\n-1 2 4 0\n");
    const auto tpl_file = write("t.txt", "1*0\n*0*\n**1\n");
    const Network pair(1, {1.0}, {"s", "a", "b", "t"}, "s", "t",
                       {{"e1", "s", "a", {std::exp(-1.0)}}, {"e2", "s", "b", {std::exp(-1.0)}},
                        {"e3", "a", "t", {std::exp(-1.0)}}, {"e4", "b", "t", {std::exp(-2.0)}}});
    const auto pair_file = write("pair.json", serialize_network(pair));
    const auto flow_file = write("pair.flow", "network pair.json\ne1 0.25\ne2 0.75\ne3 0.25\ne4 0.75\n");

    auto strip_timing = [](const std::string& table) {
        std::istringstream in(table);
        std::string out;
        for (std::string line; std::getline(in, line);) {
            std::istringstream cells(line);
            int col = 0;
            for (std::string c; std::getline(cells, c, '\t'); ++col) out += (col == 4 ? "*" : c) + "\t";
            out += '\n';
        }
        return out;
    };

    std::vector<std::pair<std::string, std::function<std::string()>>> commands;
    auto add = [&](std::string name, std::function<int(std::ostream&, std::ostream&)> body) {
        commands.emplace_back(std::move(name), [body] {
            std::ostringstream out, err;
            const int code = guarded([&] { return body(out, err); }, err);
            return std::to_string(code) + "\n" + out.str();
        });
    };
    add("validate", [&](auto& o, auto& e) { return cmd_validate(net_file, o, e); });
    for (const auto& m : solve_methods()) {
        SolveOptions so{.method = m, .epsilon = 0.1, .unit = 1.0, .threads = 4};
        add("solve " + m, [=](auto& o, auto& e) { return cmd_solve(m == "dp" ? grid_file : net_file, so, o, e); });
    }
    GenerateOptions random_gen{.kind = "random", .random = gp};
    add("generate random", [=](auto& o, auto& e) { return cmd_generate(random_gen, o, e); });
    GenerateOptions cnf_gen{.kind = "from-cnf", .input = cnf_file};
    add("generate from-cnf", [=](auto& o, auto& e) { return cmd_generate(cnf_gen, o, e); });
    GenerateOptions tpl_gen{.kind = "from-templates", .input = tpl_file};
    add("generate from-templates", [=](auto& o, auto& e) { return cmd_generate(tpl_gen, o, e); });
    add("round", [&](auto& o, auto& e) { return cmd_round(pair_file, flow_file, {.seed = 17, .samples = 5}, o, e); });
    add("export-dot", [&](auto& o, auto& e) { return cmd_export_dot(net_file, o, e); });
    BenchOptions bench;
    bench.family = base_family(6, 2, 0);
    bench.repetitions = 2;
    bench.seed = 3;
    commands.emplace_back("bench", [=] {
        std::ostringstream out, err;
        const int code = guarded([&] { return cmd_bench(bench, out, err); }, err);
        return std::to_string(code) + "\n" + strip_timing(out.str());
    });

    std::vector<std::string> differing;
    for (const auto& [name, runner] : commands)
        if (runner() != runner()) differing.push_back(name);
    fs::remove_all(dir);

    std::string detail = std::to_string(commands.size()) + " command invocations run twice, " +
                         std::to_string(differing.size()) + " differ";
    for (const auto& d : differing) detail += "; " + d;
    return {differing.empty(), detail};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 exact DP equals oracle on grid instances", dp_matches_oracle},
        {"2 basic approximation within 1-eps", basic_guarantee},
        {"3 pruned approximation within OPT^(1+eps)", pruned_guarantee},
        {"4 sandwich chain g(pi*) <= g(sigma*) <= f(sigma*) <= f(pi*)", sandwich_chain},
        {"5 rounding pipeline", rounding_pipeline},
        {"6 reduction identity", reduction_identity},
        {"7 SAT correspondence", sat_correspondence},
        {"8 single-state degeneration", single_state_degeneration},
        {"9 determinism", determinism},
    };

    int failed = 0;
    for (const auto& [name, run] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::ostringstream line;
        line.precision(2);
        line << (o.pass ? "PASS" : "FAIL") << "  " << name << "  [" << o.detail << "] (" << std::fixed << seconds
             << " s)";
        std::cout << line.str() << std::endl;
        failed += !o.pass;
    }
    std::cout << (failed ? "FAILED " + std::to_string(failed) + " of " : "PASSED all ") << criteria.size()
              << " criteria" << std::endl;
    return failed ? 1 : 0;
}
