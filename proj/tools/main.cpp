#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
    using namespace mrp::cli;

    CLI::App app{"Most reliable paths in networks with hidden-state-dependent edge failures"};
    app.require_subcommand(1);

    std::string network_file, flow_file;

    auto* validate = app.add_subcommand("validate", "Check a network document and list every violation");
    validate->add_option("network", network_file, "Network JSON document")->required();

    SolveOptions solve_opt;
    auto* solve = app.add_subcommand("solve", "Find a (near-)most-reliable source-to-sink path");
    solve->add_option("network", network_file, "Network JSON document")->required();
    solve->add_option("-m,--method", solve_opt.method, "brute | lower-bound | dp | approx-basic | approx-pruned")
        ->check(CLI::IsMember(solve_methods()));
    solve->add_option("-e,--epsilon", solve_opt.epsilon, "Error parameter in (0,1) for approx-*");
    solve->add_option("-u,--unit", solve_opt.unit, "Log-domain grid unit for dp");
    solve->add_flag("!--no-prune", solve_opt.prune, "Disable dominance pruning in the DP table");
    solve->add_option("--max-paths", solve_opt.max_paths, "Path-enumeration guard for brute");
    solve->add_option("--max-entries", solve_opt.max_entries, "DP table-size guard");
    solve->add_option("--threads", solve_opt.threads, "Worker threads for approx-pruned");

    GenerateOptions gen_opt;
    auto* generate = app.add_subcommand("generate", "Generate a random or reduction network");
    generate->add_option("kind", gen_opt.kind, "random | from-cnf | from-templates")
        ->check(CLI::IsMember({"random", "from-cnf", "from-templates"}))
        ->required();
    generate->add_option("input", gen_opt.input, "CNF file (from-cnf) or template list (from-templates)");
    generate->add_option("-o,--output", gen_opt.output, "Output file (default: standard output)");
    generate->add_option("--mapping", gen_opt.mapping_output, "Bit-position/edge side-file for reductions");
    generate->add_option("-n,--vertices", gen_opt.random.vertices, "Vertex count including source and sink");
    generate->add_option("-w,--width", gen_opt.random.layer_width, "Interior vertices per layer");
    generate->add_option("--density", gen_opt.random.density, "Extra edge probability between adjacent layers");
    generate->add_option("--skip-density", gen_opt.random.skip_density, "Edge probability across one layer");
    generate->add_option("-d,--states", gen_opt.random.states, "Hidden state count");
    generate->add_option("--min-reliability", gen_opt.random.min_reliability, "Lower end of the reliability range");
    generate->add_option("--max-reliability", gen_opt.random.max_reliability, "Upper end of the reliability range");
    generate->add_option("--grid-levels", gen_opt.random.grid_levels, "Draw reliabilities from e^0..e^-(L-1)");
    generate->add_flag("--uniform-prior", gen_opt.random.uniform_prior, "Uniform prior over hidden states");
    generate->add_option("--parallel", gen_opt.random.parallel_probability, "Probability of a parallel twin edge");
    generate->add_option("--seed", gen_opt.random.seed, "Random seed");

    RoundOptions round_opt;
    auto* round = app.add_subcommand("round", "Decompose a fractional flow into paths and sample from it");
    round->add_option("network", network_file, "Network JSON document")->required();
    round->add_option("flow", flow_file, "Flow file")->required();
    round->add_option("--seed", round_opt.seed, "Seed of the first sample (sample i uses seed + i)");
    round->add_option("--samples", round_opt.samples, "Number of sampled paths");
    round->add_flag("--optimal", round_opt.optimal, "Treat the flow as optimal for the relaxation");

    BenchOptions bench_opt;
    auto* bench = app.add_subcommand("bench", "Time solvers over a seeded instance family");
    bench->add_option("--sizes", bench_opt.sizes, "Vertex counts")->delimiter(',');
    bench->add_option("--methods", bench_opt.methods, "Methods to run")->delimiter(',');
    bench->add_option("--repetitions", bench_opt.repetitions, "Instances per size");
    bench->add_option("--seed", bench_opt.seed, "Family seed");
    bench->add_option("-e,--epsilon", bench_opt.epsilon, "Error parameter for approx-*");
    bench->add_option("-u,--unit", bench_opt.unit, "Grid unit for dp");
    bench->add_option("-d,--states", bench_opt.family.states, "Hidden state count");
    bench->add_option("-w,--width", bench_opt.family.layer_width, "Interior vertices per layer");
    bench->add_option("--density", bench_opt.family.density, "Extra edge probability between adjacent layers");
    bench->add_option("--grid-levels", bench_opt.family.grid_levels, "Draw reliabilities from e^0..e^-(L-1)");
    bench->add_option("--max-paths", bench_opt.max_paths, "Path-enumeration guard");
    bench->add_option("--max-entries", bench_opt.max_entries, "DP table-size guard");

    auto* dot = app.add_subcommand("export-dot", "Render a network as a Graphviz digraph");
    dot->add_option("network", network_file, "Network JSON document")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kParameterError;
    }

    auto& out = std::cout;
    auto& err = std::cerr;
    return guarded(
        [&] {
            if (*validate) return cmd_validate(network_file, out, err);
            if (*solve) return cmd_solve(network_file, solve_opt, out, err);
            if (*generate) {
                if (gen_opt.kind != "random" && gen_opt.input.empty())
                    throw mrp::input_error(gen_opt.kind + " needs an input file");
                return cmd_generate(gen_opt, out, err);
            }
            if (*round) return cmd_round(network_file, flow_file, round_opt, out, err);
            if (*bench) return cmd_bench(bench_opt, out, err);
            return cmd_export_dot(network_file, out, err);
        },
        err);
}
