#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "coindex/errors.hpp"

namespace coindex::csv {

// Shortest representation that round-trips the exact double value.
inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

inline std::optional<double> parse_double(std::string_view s) {
    // trim surrounding blanks; std::from_chars is locale-independent
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

inline std::optional<int64_t> parse_int(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (s.empty()) return std::nullopt;
    int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

inline std::vector<std::string> split(std::string_view line, char delim) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t pos = line.find(delim, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(line.substr(start));
            break;
        }
        out.emplace_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    if (!out.empty() && !out.back().empty() && out.back().back() == '\r')
        out.back().pop_back();
    return out;
}

// Picks the delimiter among {',', ';', '\t'} that splits the first
// non-empty line into the most fields. Ties prefer the comma.
inline char detect_delimiter(const std::string& first_line) {
    const char candidates[] = {',', ';', '\t'};
    char best = ',';
    size_t best_count = 0;
    for (char c : candidates) {
        size_t count = 0;
        for (char ch : first_line)
            if (ch == c) ++count;
        if (count > best_count) {
            best_count = count;
            best = c;
        }
    }
    return best;
}

struct Table {
    std::vector<std::string> header; // empty if the file had none
    std::vector<std::vector<std::string>> rows;
    char delimiter = ',';
    bool has_header = false;
};

// Reads a delimited text file. A header is assumed when the first line
// contains at least one field that does not parse as a number.
inline Table read_table(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open file: " + path);

    Table t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        if (first) {
            t.delimiter = detect_delimiter(line);
            auto fields = split(line, t.delimiter);
            bool all_numeric = true;
            for (const auto& f : fields)
                if (!parse_double(f)) { all_numeric = false; break; }
            if (!all_numeric) {
                t.has_header = true;
                t.header = std::move(fields);
            } else {
                t.rows.push_back(std::move(fields));
            }
            first = false;
            continue;
        }
        t.rows.push_back(split(line, t.delimiter));
    }
    if (first)
        throw DataError("empty file: " + path);
    return t;
}

inline void write_lines(const std::string& path, const std::vector<std::string>& lines) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot write file: " + path);
    for (const auto& l : lines)
        out << l << '\n';
    if (!out)
        throw DataError("write failed: " + path);
}

} // namespace coindex::csv
