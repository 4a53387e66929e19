#pragma once

// Subcommand implementations for the mrp tool. Each returns the process exit code;
// machine-readable records go to `out` (one JSON object per line, or a TSV table for
// bench), human-readable summaries to `err`.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mrp/io.hpp"
#include "mrp/mrp.hpp"

namespace mrp::cli {

enum ExitCode : int {
    kOk = 0,
    kDomainViolation = 1,
    kParseError = 2,
    kNoPath = 3,
    kParameterError = 4,
    kResourceGuard = 5,
};

inline int exit_code_for(const Error& e) {
    switch (e.kind()) {
        case ErrorKind::Parse: return kParseError;
        case ErrorKind::Input:
        case ErrorKind::Precision: return kParameterError;
        case ErrorKind::Resource: return kResourceGuard;
        case ErrorKind::Structural:
        case ErrorKind::Decomposition: return kDomainViolation;
    }
    return kDomainViolation;
}

using Json = nlohmann::ordered_json;

inline void emit(std::ostream& out, const Json& record) { out << record.dump() << '\n'; }

inline Json path_json(const std::optional<Path>& path) {
    return path ? Json(path->edge_ids) : Json(nullptr);
}

inline Json log_json(LogReliability r) { return r.is_impossible() ? Json("IMPOSSIBLE") : Json(r.value()); }

inline Json report_json(const ValidationReport& report) {
    Json violations = Json::array();
    for (const auto& v : report.violations) violations.push_back({{"code", v.code}, {"message", v.message}});
    return violations;
}

// Loads and validates; on failure prints the report and returns the exit code.
inline std::optional<Network> load_valid(const std::string& file, std::ostream& out, std::ostream& err, int& code) {
    Network net = load_network(file);
    auto report = validate_network(net);
    if (!report.ok()) {
        emit(out, {{"kind", "validation"}, {"valid", false}, {"violations", report_json(report)}});
        for (const auto& v : report.violations) err << "invalid network: " << v.message << '\n';
        code = kDomainViolation;
        return std::nullopt;
    }
    return net;
}

// ---------------------------------------------------------------------------

inline int cmd_validate(const std::string& network_file, std::ostream& out, std::ostream& err) {
    const Network net = load_network(network_file);
    const auto report = validate_network(net);
    emit(out, {{"kind", "validation"}, {"valid", report.ok()}, {"violations", report_json(report)}});
    if (report.ok()) {
        err << network_file << ": valid (" << net.vertex_count() << " vertices, " << net.edge_count()
            << " edges, d = " << net.state_count() << ")\n";
        return kOk;
    }
    for (const auto& v : report.violations) err << network_file << ": " << v.code << ": " << v.message << '\n';
    return kDomainViolation;
}

struct SolveOptions {
    std::string method = "brute";
    std::optional<double> epsilon;
    std::optional<double> unit;
    bool prune = true;
    std::size_t max_paths = kDefaultMaxPaths;
    std::size_t max_entries = kDefaultMaxTableEntries;
    unsigned threads = 1;
};

inline const std::vector<std::string>& solve_methods() {
    static const std::vector<std::string> methods{"brute", "lower-bound", "dp", "approx-basic", "approx-pruned"};
    return methods;
}

// Runs one method and returns its record. Throws mrp::Error on guard trips and
// parameter problems.
inline Json run_method(const Network& net, const SolveOptions& opt) {
    DpOptions dp;
    dp.prune = opt.prune;
    dp.max_entries = opt.max_entries;

    Json record{{"kind", "solve"}, {"method", opt.method}};
    if (opt.method == "brute") {
        auto r = brute_force_best(net, opt.max_paths);
        record["found"] = r.found();
        record["path"] = path_json(r.path);
        record["reliability"] = r.reliability;
    } else if (opt.method == "lower-bound") {
        auto r = lower_bound_dp(net);
        record["found"] = r.sigma_star.has_value();
        record["path"] = path_json(r.sigma_star);
        record["reliability"] = r.sigma_star ? path_reliability(net, *r.sigma_star) : 0.0;
        record["g"] = log_json(r.g_of_sigma);
        record["f"] = log_json(r.f_of_sigma);
    } else if (opt.method == "dp") {
        if (!opt.unit) throw input_error("method dp requires --unit");
        auto r = dp_solve(quantize_exact(net, *opt.unit), dp);
        record["found"] = r.solve.found();
        record["path"] = path_json(r.solve.path);
        record["reliability"] = r.solve.reliability;
        record["unit"] = *opt.unit;
        record["sink_vectors"] = r.sink_vectors;
    } else if (opt.method == "approx-basic" || opt.method == "approx-pruned") {
        if (!opt.epsilon) throw input_error("method " + opt.method + " requires --epsilon");
        ApproxResult r;
        if (opt.method == "approx-basic") {
            r = approx_solve_basic(net, *opt.epsilon, dp);
        } else {
            PrunedOptions pruned;
            pruned.dp = dp;
            pruned.threads = opt.threads;
            r = approx_solve_pruned(net, *opt.epsilon, pruned);
        }
        record["found"] = r.found();
        record["path"] = path_json(r.path);
        record["reliability"] = r.true_reliability;
        record["coarsened_value"] = r.coarsened_value;
        record["epsilon"] = r.epsilon;
        record["variant"] = r.variant == ApproxVariant::Basic ? "BASIC" : "PRUNED";
        record["unit"] = r.unit;
        if (r.variant == ApproxVariant::Pruned) {
            record["prunings_evaluated"] = r.prunings_evaluated;
            record["guard_trips"] = r.guard_trips;
            record["threshold"] = r.threshold ? Json(*r.threshold) : Json(nullptr);
        }
    } else {
        throw input_error("unknown method '" + opt.method + "'");
    }
    return record;
}

inline int cmd_solve(const std::string& network_file, const SolveOptions& opt, std::ostream& out, std::ostream& err) {
    int code = kOk;
    auto net = load_valid(network_file, out, err, code);
    if (!net) return code;
    const Json record = run_method(*net, opt);
    emit(out, record);
    if (!record["found"].get<bool>()) {
        err << opt.method << ": no path from " << net->source() << " to " << net->sink() << '\n';
        return kNoPath;
    }
    err << opt.method << ": reliability " << format_double(record["reliability"].get<double>()) << " via "
        << record["path"].size() << " edges\n";
    return kOk;
}

// ---------------------------------------------------------------------------

struct GenerateOptions {
    std::string kind = "random";
    GeneratorParams random;
    std::string input;          // CNF or template file for the reduction kinds
    std::string output;         // empty: standard output
    std::string mapping_output; // side-file for reduction kinds; empty: <output>.map.json when output is set
};

inline void write_text(const std::string& file, const std::string& text) {
    std::ofstream f(file, std::ios::binary);
    if (!f) throw input_error("cannot write '" + file + "'");
    f << text;
}

inline int cmd_generate(const GenerateOptions& opt, std::ostream& out, std::ostream& err) {
    std::optional<ReductionArtifact> art;
    TemplateSet ts;
    Network net;
    if (opt.kind == "random") {
        net = generate_random(opt.random);
    } else if (opt.kind == "from-cnf" || opt.kind == "from-templates") {
        std::istringstream in(read_file(opt.input));
        if (opt.kind == "from-cnf") {
            ts = templates_from_3sat(parse_cnf(in));
        } else {
            ts = parse_templates(in);
        }
        art = network_from_templates(ts);
        net = art->network;
    } else {
        throw input_error("unknown generator kind '" + opt.kind + "'");
    }

    const std::string doc = serialize_network(net);
    if (opt.output.empty())
        out << doc;
    else
        write_text(opt.output, doc);

    if (art) {
        std::string mapping = opt.mapping_output;
        if (mapping.empty() && !opt.output.empty()) mapping = opt.output + ".map.json";
        if (!mapping.empty()) write_text(mapping, reduction_side_file(*art, ts).dump(2) + "\n");
    }
    err << opt.kind << ": " << net.vertex_count() << " vertices, " << net.edge_count() << " edges, d = "
        << net.state_count() << '\n';
    return kOk;
}

// ---------------------------------------------------------------------------

struct RoundOptions {
    std::uint64_t seed = 0;
    std::size_t samples = 1;
    bool optimal = false;  // the flow is claimed optimal for the relaxation
};

inline int cmd_round(const std::string& network_file, const std::string& flow_file, const RoundOptions& opt,
                     std::ostream& out, std::ostream& err) {
    int code = kOk;
    auto net = load_valid(network_file, out, err, code);
    if (!net) return code;
    const FlowDocument flow = load_flow(flow_file);

    const auto report = validate_flow(*net, flow.flow);
    emit(out, {{"kind", "flow-validation"}, {"feasible", report.ok()}, {"violations", report_json(report)}});
    if (!report.ok()) {
        for (const auto& v : report.violations) err << "infeasible flow: " << v.message << '\n';
        return kDomainViolation;
    }

    const auto cert = rounding_certificate(*net, flow.flow, opt.optimal);
    Json paths = Json::array();
    for (const auto& e : cert.distribution.entries()) {
        paths.push_back(
            {{"path", e.path.edge_ids}, {"weight", e.weight}, {"reliability", path_reliability(*net, e.path)}});
    }
    emit(out, {{"kind", "decomposition"}, {"paths", paths}});

    Json objectives{{"kind", "objectives"},
                    {"relaxed_objective", cert.relaxed},
                    {"expected_path_objective", cert.expected_path_objective},
                    {"jensen_check", cert.jensen_holds ? "PASS" : "FAIL"}};
    if (cert.optimality_consistent) objectives["optimality_check"] = *cert.optimality_consistent ? "PASS" : "FAIL";
    emit(out, objectives);

    for (std::size_t i = 0; i < opt.samples; ++i) {
        const std::uint64_t seed = opt.seed + i;
        const Path& p = sample_path(cert.distribution, seed);
        emit(out, {{"kind", "sample"}, {"seed", seed}, {"path", p.edge_ids}, {"reliability", path_reliability(*net, p)}});
    }

    err << "decomposed into " << cert.distribution.size() << " paths; expected "
        << format_double(cert.expected_path_objective) << " vs relaxed " << format_double(cert.relaxed) << ": "
        << (cert.jensen_holds ? "PASS" : "FAIL") << '\n';
    return cert.jensen_holds ? kOk : kDomainViolation;
}

// ---------------------------------------------------------------------------

struct BenchOptions {
    std::vector<std::size_t> sizes{6, 8, 10};
    std::vector<std::string> methods{"brute", "approx-basic"};
    std::size_t repetitions = 3;
    GeneratorParams family;  // vertices and seed are overridden per instance
    double epsilon = 0.1;
    double unit = 1.0;
    std::size_t max_paths = 200'000;
    std::size_t max_entries = 1'000'000;
    std::uint64_t seed = 0;
};

// One row per (size, method): mean wall time, mean reliability and the worst ratio
// to the brute-force optimum over the repetitions.
inline int cmd_bench(const BenchOptions& opt, std::ostream& out, std::ostream& err) {
    for (const auto& m : opt.methods) {
        if (std::find(solve_methods().begin(), solve_methods().end(), m) == solve_methods().end())
            throw input_error("unknown method '" + m + "'");
    }
    out << "n\td\tmethod\treps\tmean_ms\tmean_reliability\tmin_ratio_to_brute\tguard_trips\terrors\n";

    for (std::size_t n : opt.sizes) {
        std::vector<Network> instances;
        std::vector<std::optional<double>> optimum;
        for (std::size_t rep = 0; rep < opt.repetitions; ++rep) {
            GeneratorParams params = opt.family;
            params.vertices = n;
            params.seed = opt.seed * 1'000'003 + n * 1'009 + rep;
            instances.push_back(generate_random(params));
            try {
                optimum.push_back(brute_force_best(instances.back(), opt.max_paths).reliability);
            } catch (const Error&) {
                optimum.push_back(std::nullopt);
            }
        }

        for (const auto& method : opt.methods) {
            SolveOptions so;
            so.method = method;
            so.epsilon = opt.epsilon;
            so.unit = opt.unit;
            so.max_paths = opt.max_paths;
            so.max_entries = opt.max_entries;

            double total_ms = 0.0, total_reliability = 0.0;
            std::optional<double> min_ratio;
            std::size_t solved = 0, guard_trips = 0, errors = 0;
            for (std::size_t i = 0; i < instances.size(); ++i) {
                auto start = std::chrono::steady_clock::now();
                try {
                    Json r = run_method(instances[i], so);
                    double rel = r["reliability"].get<double>();
                    total_reliability += rel;
                    ++solved;
                    if (optimum[i] && *optimum[i] > 0.0) {
                        double ratio = rel / *optimum[i];
                        min_ratio = min_ratio ? std::min(*min_ratio, ratio) : ratio;
                    }
                } catch (const Error& e) {
                    (e.kind() == ErrorKind::Resource ? guard_trips : errors) += 1;
                }
                total_ms += std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
            }
            std::ostringstream row;
            row << n << '\t' << opt.family.states << '\t' << method << '\t' << instances.size() << '\t'
                << std::fixed << std::setprecision(3) << total_ms / static_cast<double>(instances.size()) << '\t'
                << (solved ? format_double(total_reliability / static_cast<double>(solved)) : "NA") << '\t'
                << (min_ratio ? format_double(*min_ratio) : "NA") << '\t' << guard_trips << '\t' << errors << '\n';
            out << row.str();
        }
    }
    err << "bench: " << opt.sizes.size() * opt.methods.size() << " rows\n";
    return kOk;
}

// ---------------------------------------------------------------------------

inline int cmd_export_dot(const std::string& network_file, std::ostream& out, std::ostream&) {
    out << export_dot(load_network(network_file));
    return kOk;
}

// Runs a command body, translating library errors into exit codes.
template <class Body>
int guarded(Body&& body, std::ostream& err) {
    try {
        return body();
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }
}

}  // namespace mrp::cli
