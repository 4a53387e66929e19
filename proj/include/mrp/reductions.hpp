#pragma once

// Hardness gadgets: 3-SAT -> string templates -> line networks with parallel edges.
//
// A template over {0,1,*} becomes one hidden state. Bit position i is a pair of
// parallel edges between vertices i and i+1: the "1" edge survives under state j
// unless template j demands a 0 there, and symmetrically for the "0" edge. With a
// uniform prior, the path spelling bitstring b therefore survives with probability
// (number of templates matching b) / d.

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mrp/model.hpp"

namespace mrp {

struct TemplateSet {
    std::size_t length = 0;
    std::vector<std::string> templates;
};

inline void check_template_set(const TemplateSet& ts) {
    for (const auto& t : ts.templates) {
        if (t.size() != ts.length) throw input_error("template '" + t + "' does not have width " + std::to_string(ts.length));
        if (t.find_first_not_of("01*") != std::string::npos)
            throw input_error("template '" + t + "' contains symbols other than 0, 1, *");
    }
}

// Literal: +v for v, -v for not v (variables numbered from 1).
struct CnfFormula {
    std::size_t variable_count = 0;
    std::vector<std::array<int, 3>> clauses;
};

inline void check_cnf(const CnfFormula& cnf) {
    for (std::size_t i = 0; i < cnf.clauses.size(); ++i) {
        std::set<int> vars;
        for (int lit : cnf.clauses[i]) {
            int v = std::abs(lit);
            if (lit == 0 || static_cast<std::size_t>(v) > cnf.variable_count)
                throw input_error("clause " + std::to_string(i + 1) + " has literal " + std::to_string(lit) +
                                  " outside 1.." + std::to_string(cnf.variable_count));
            vars.insert(v);
        }
        if (vars.size() != 3)
            throw input_error("clause " + std::to_string(i + 1) + " does not mention three distinct variables");
    }
}

// 3m templates of width p + 2m. Template (i, j) fixes the variable of the j-th
// literal of clause i to its satisfying value and carries the code 00, 01, 10
// (for j = 1, 2, 3) in the clause's two-bit block, so at most one template per
// clause can match any bitstring.
inline TemplateSet templates_from_3sat(const CnfFormula& cnf) {
    check_cnf(cnf);
    const std::size_t p = cnf.variable_count, m = cnf.clauses.size();
    static constexpr const char* kCodes[3] = {"00", "01", "10"};

    TemplateSet ts;
    ts.length = p + 2 * m;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            std::string t(ts.length, '*');
            int lit = cnf.clauses[i][j];
            t[std::abs(lit) - 1] = lit > 0 ? '1' : '0';
            t[p + 2 * i] = kCodes[j][0];
            t[p + 2 * i + 1] = kCodes[j][1];
            ts.templates.push_back(std::move(t));
        }
    }
    return ts;
}

inline bool matches(std::string_view pattern, std::string_view bits) {
    if (pattern.size() != bits.size()) throw input_error("template and bitstring widths differ");
    for (std::size_t i = 0; i < pattern.size(); ++i)
        if (pattern[i] != '*' && pattern[i] != bits[i]) return false;
    return true;
}

inline std::size_t count_matches(const TemplateSet& ts, std::string_view bits) {
    if (bits.size() != ts.length) throw input_error("bitstring width differs from template width");
    return static_cast<std::size_t>(
        std::count_if(ts.templates.begin(), ts.templates.end(), [&](const auto& t) { return matches(t, bits); }));
}

struct BitEdges {
    std::string one;   // taken for bit 1
    std::string zero;  // taken for bit 0
};

struct ReductionArtifact {
    Network network;
    std::vector<BitEdges> bit_to_edges;  // indexed by bit position
    std::size_t template_count = 0;
};

inline ReductionArtifact network_from_templates(const TemplateSet& ts) {
    check_template_set(ts);
    if (ts.templates.empty()) throw input_error("template set is empty");
    if (ts.length == 0) throw input_error("templates have width 0");
    const std::size_t n = ts.length, d = ts.templates.size();

    std::vector<std::string> vertices;
    for (std::size_t i = 1; i <= n + 1; ++i) vertices.push_back("v" + std::to_string(i));

    ReductionArtifact art;
    art.template_count = d;
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) {
        Edge one{"e" + std::to_string(i + 1) + ".1", vertices[i], vertices[i + 1], std::vector<double>(d)};
        Edge zero{"e" + std::to_string(i + 1) + ".0", vertices[i], vertices[i + 1], std::vector<double>(d)};
        for (std::size_t j = 0; j < d; ++j) {
            char symbol = ts.templates[j][i];
            one.reliability[j] = symbol == '0' ? 0.0 : 1.0;
            zero.reliability[j] = symbol == '1' ? 0.0 : 1.0;
        }
        art.bit_to_edges.push_back({one.id, zero.id});
        edges.push_back(std::move(one));
        edges.push_back(std::move(zero));
    }
    const std::string source = vertices.front(), sink = vertices.back();
    art.network = Network(d, std::vector<double>(d, 1.0 / static_cast<double>(d)), std::move(vertices), source, sink,
                          std::move(edges));
    return art;
}

inline std::string path_to_bitstring(const ReductionArtifact& art, const Path& path) {
    resolve_path(art.network, path);
    if (path.size() != art.bit_to_edges.size()) throw input_error("path length differs from template width");
    std::string bits;
    for (std::size_t i = 0; i < path.size(); ++i) {
        const auto& id = path.edge_ids[i];
        if (id == art.bit_to_edges[i].one)
            bits += '1';
        else if (id == art.bit_to_edges[i].zero)
            bits += '0';
        else
            throw input_error("edge '" + id + "' does not belong to bit position " + std::to_string(i + 1));
    }
    return bits;
}

inline Path bitstring_to_path(const ReductionArtifact& art, std::string_view bits) {
    if (bits.size() != art.bit_to_edges.size()) throw input_error("bitstring width differs from template width");
    Path path;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] != '0' && bits[i] != '1') throw input_error("bitstring contains a non-binary symbol");
        path.edge_ids.push_back(bits[i] == '1' ? art.bit_to_edges[i].one : art.bit_to_edges[i].zero);
    }
    return path;
}

// Brute-force satisfiability over all 2^p assignments; bit v-1 of the mask is v.
inline std::optional<std::uint64_t> satisfying_assignment(const CnfFormula& cnf) {
    if (cnf.variable_count >= 63) throw input_error("too many variables for exhaustive search");
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cnf.variable_count); ++mask) {
        bool all = std::all_of(cnf.clauses.begin(), cnf.clauses.end(), [&](const auto& clause) {
            return std::any_of(clause.begin(), clause.end(), [&](int lit) {
                bool value = (mask >> (std::abs(lit) - 1)) & 1;
                return lit > 0 ? value : !value;
            });
        });
        if (all) return mask;
    }
    return std::nullopt;
}

// Bitstring for an assignment: the p variable bits followed, per clause, by the
// code of its first satisfied literal (00 when none is satisfied).
inline std::string canonical_bitstring(const CnfFormula& cnf, std::uint64_t assignment) {
    static constexpr const char* kCodes[3] = {"00", "01", "10"};
    std::string bits;
    for (std::size_t v = 0; v < cnf.variable_count; ++v) bits += ((assignment >> v) & 1) ? '1' : '0';
    for (const auto& clause : cnf.clauses) {
        std::size_t code = 0;
        for (std::size_t j = 0; j < 3; ++j) {
            bool value = (assignment >> (std::abs(clause[j]) - 1)) & 1;
            if (clause[j] > 0 ? value : !value) {
                code = j;
                break;
            }
        }
        bits += kCodes[code];
    }
    return bits;
}

}  // namespace mrp
