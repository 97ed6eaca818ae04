#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "coindex/bitvec.hpp"
#include "coindex/errors.hpp"

namespace coindex {

// One rule per positive object (its excess predicate indices) and one fact
// per excess of the query object. Indices are 0-based internally and
// rendered 1-based.
struct ImplicationSystem {
    std::vector<std::vector<size_t>> rules; // ascending indices per rule
    std::vector<size_t> query_facts;        // ascending indices

    bool operator==(const ImplicationSystem&) const = default;
};

inline std::vector<size_t> set_bits(const IncidenceVector& v) {
    std::vector<size_t> out;
    out.reserve(v.weight());
    for (size_t i = 0; i < v.size(); ++i)
        if (v.test(i)) out.push_back(i);
    return out;
}

inline ImplicationSystem build_system(std::span<const IncidenceVector> positives,
                                      const IncidenceVector& query) {
    ImplicationSystem sys;
    sys.rules.reserve(positives.size());
    for (const auto& p : positives) {
        if (p.size() != query.size())
            throw DataError("incidence vector length mismatch");
        sys.rules.push_back(set_bits(p));
    }
    sys.query_facts = set_bits(query);
    return sys;
}

struct SolveResult {
    bool satisfiable = false;
    size_t witness = 0; // index of the first satisfying rule
};

// Satisfiable iff the query has at least one excess and some rule contains
// every query fact: all excesses of the query must be excesses of the
// witness (not the other way around).
inline SolveResult solve(const ImplicationSystem& sys) {
    if (sys.query_facts.empty())
        return {false, 0};
    for (size_t k = 0; k < sys.rules.size(); ++k) {
        const auto& rule = sys.rules[k];
        if (std::includes(rule.begin(), rule.end(), sys.query_facts.begin(),
                          sys.query_facts.end()))
            return {true, k};
    }
    return {false, 0};
}

// Rules first, then facts for the query object named z, then the goal as a
// comment. Rules with no excesses are not representable (a bodyless clause
// would make everything a defect) and are skipped; they can never witness
// a non-empty query anyway.
inline std::string emit_prolog(const ImplicationSystem& sys) {
    std::string out;
    for (const auto& rule : sys.rules) {
        if (rule.empty()) continue;
        out += "defect(X) :- ";
        for (size_t k = 0; k < rule.size(); ++k) {
            if (k > 0) out += " , ";
            out += "is_high(" + std::to_string(rule[k] + 1) + ", X)";
        }
        out += ".\n";
    }
    out += "\n";
    for (size_t f : sys.query_facts)
        out += "is_high(" + std::to_string(f + 1) + ", z).\n";
    out += "\n% ?- defect(z).\n";
    return out;
}

namespace detail {

inline void skip_spaces(std::string_view& s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
}

inline bool consume(std::string_view& s, std::string_view token) {
    skip_spaces(s);
    if (s.substr(0, token.size()) != token) return false;
    s.remove_prefix(token.size());
    return true;
}

inline bool parse_index(std::string_view& s, size_t& out) {
    skip_spaces(s);
    size_t len = 0;
    while (len < s.size() && s[len] >= '0' && s[len] <= '9') ++len;
    if (len == 0) return false;
    out = 0;
    for (size_t i = 0; i < len; ++i) out = out * 10 + static_cast<size_t>(s[i] - '0');
    s.remove_prefix(len);
    return true;
}

// is_high(N, <var>) with the 1-based N converted back to 0-based
inline bool parse_call(std::string_view& s, std::string_view var, size_t& index) {
    if (!consume(s, "is_high")) return false;
    if (!consume(s, "(")) return false;
    if (!parse_index(s, index)) return false;
    if (index == 0) return false;
    --index;
    if (!consume(s, ",")) return false;
    if (!consume(s, var)) return false;
    if (!consume(s, ")")) return false;
    return true;
}

} // namespace detail

// Reads back exactly the clause/fact shape emit_prolog produces. Comments
// and blank lines are ignored; anything else is a syntax error.
inline ImplicationSystem parse_prolog(const std::string& text) {
    ImplicationSystem sys;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        std::string_view line(text.data() + pos, eol - pos);
        pos = eol + 1;
        detail::skip_spaces(line);
        if (line.empty() || line.front() == '%') continue;
        if (line.substr(0, 6) == "defect") {
            std::string_view s = line;
            if (!detail::consume(s, "defect") || !detail::consume(s, "(") ||
                !detail::consume(s, "X") || !detail::consume(s, ")") ||
                !detail::consume(s, ":-"))
                throw DataError("prolog parse error in rule: " + std::string(line));
            std::vector<size_t> rule;
            while (true) {
                size_t idx = 0;
                if (!detail::parse_call(s, "X", idx))
                    throw DataError("prolog parse error in rule body: " + std::string(line));
                rule.push_back(idx);
                if (detail::consume(s, ",")) continue;
                if (detail::consume(s, ".")) break;
                throw DataError("prolog parse error after call: " + std::string(line));
            }
            detail::skip_spaces(s);
            if (!s.empty())
                throw DataError("prolog parse error: trailing text: " + std::string(line));
            std::sort(rule.begin(), rule.end());
            sys.rules.push_back(std::move(rule));
        } else if (line.substr(0, 7) == "is_high") {
            std::string_view s = line;
            size_t idx = 0;
            if (!detail::parse_call(s, "z", idx) || !detail::consume(s, "."))
                throw DataError("prolog parse error in fact: " + std::string(line));
            detail::skip_spaces(s);
            if (!s.empty())
                throw DataError("prolog parse error: trailing text: " + std::string(line));
            sys.query_facts.push_back(idx);
        } else {
            throw DataError("prolog parse error: unrecognized line: " + std::string(line));
        }
        if (pos > text.size()) break;
    }
    std::sort(sys.query_facts.begin(), sys.query_facts.end());
    return sys;
}

} // namespace coindex
