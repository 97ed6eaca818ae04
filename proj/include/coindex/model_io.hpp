#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "coindex/csv.hpp"
#include "coindex/errors.hpp"
#include "coindex/pipeline.hpp"

namespace coindex {

namespace detail {

// Nibble k encodes bits 4k..4k+3 (bit 4k is the 1-bit); digits appear in
// increasing bit order.
inline std::string bits_to_hex(const IncidenceVector& v) {
    static const char digits[] = "0123456789abcdef";
    std::string out;
    const size_t nibbles = (v.size() + 3) / 4;
    out.reserve(nibbles);
    for (size_t k = 0; k < nibbles; ++k) {
        unsigned val = 0;
        for (size_t b = 0; b < 4; ++b) {
            const size_t i = 4 * k + b;
            if (i < v.size() && v.test(i)) val |= 1u << b;
        }
        out.push_back(digits[val]);
    }
    return out;
}

inline IncidenceVector hex_to_bits(const std::string& hex, size_t nbits) {
    if (hex.size() != (nbits + 3) / 4)
        throw DataError("model file: bit row length mismatch");
    IncidenceVector v(nbits);
    for (size_t k = 0; k < hex.size(); ++k) {
        const char c = hex[k];
        unsigned val;
        if (c >= '0' && c <= '9') val = static_cast<unsigned>(c - '0');
        else if (c >= 'a' && c <= 'f') val = static_cast<unsigned>(c - 'a' + 10);
        else throw DataError("model file: bad hex digit");
        for (size_t b = 0; b < 4; ++b) {
            const size_t i = 4 * k + b;
            if (i < nbits && (val & (1u << b))) v.set(i);
        }
    }
    return v;
}

} // namespace detail

inline void save_model(const TrainedModel& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot write model file: " + path);
    const size_t n = m.scaling.cols();
    out << "coindex-model 1\n";
    out << "predicate " << to_string(m.predicate.kind) << "\n";
    if (m.predicate.kind != PredicateKind::ref_excess)
        out << "t " << csv::format_double(m.predicate.t) << "\n";
    out << "similarity " << to_string(m.similarity) << "\n";
    out << "aggregator " << to_string(m.aggregator) << "\n";
    out << "cutoff " << csv::format_double(m.cutoff) << "\n";
    out << "inverted " << (m.inverted ? 1 : 0) << "\n";
    out << "av0 " << csv::format_double(m.av0) << "\n";
    out << "av1 " << csv::format_double(m.av1) << "\n";
    out << "columns " << n << "\n";
    for (size_t j = 0; j < n; ++j)
        out << "col " << (j < m.column_names.size() ? m.column_names[j] : "c" + std::to_string(j))
            << "\n";
    for (size_t j = 0; j < n; ++j)
        out << "scale " << csv::format_double(m.scaling.mu[j]) << " "
            << csv::format_double(m.scaling.sigma[j]) << "\n";
    if (m.predicate.kind == PredicateKind::ref_excess)
        for (size_t j = 0; j < n; ++j)
            out << "ref " << csv::format_double(m.predicate.lo[j]) << " "
                << csv::format_double(m.predicate.hi[j]) << "\n";
    out << "train " << m.train_vectors.size() << " " << n << "\n";
    for (size_t k = 0; k < m.train_vectors.size(); ++k)
        out << "vec " << m.train_ids[k] << " " << detail::bits_to_hex(m.train_vectors[k])
            << "\n";
    out << "end\n";
    if (!out)
        throw DataError("write failed: " + path);
}

inline TrainedModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open model file: " + path);
    auto fail = [&path](const std::string& why) -> DataError {
        return DataError("bad model file " + path + ": " + why);
    };
    std::string line;
    if (!std::getline(in, line) || line != "coindex-model 1")
        throw fail("missing or unsupported format header");

    TrainedModel m;
    size_t n = 0, train_count = 0, train_bits = 0;
    std::vector<std::string> cols;
    bool saw_end = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "predicate") {
            std::string v; ls >> v;
            m.predicate.kind = predicate_kind_from_string(v);
        } else if (key == "t") {
            ls >> m.predicate.t;
        } else if (key == "similarity") {
            std::string v; ls >> v;
            m.similarity = similarity_from_string(v);
        } else if (key == "aggregator") {
            std::string v; ls >> v;
            m.aggregator = aggregator_from_string(v);
        } else if (key == "cutoff") {
            ls >> m.cutoff;
        } else if (key == "inverted") {
            int v = 0; ls >> v;
            m.inverted = v != 0;
        } else if (key == "av0") {
            ls >> m.av0;
        } else if (key == "av1") {
            ls >> m.av1;
        } else if (key == "columns") {
            ls >> n;
        } else if (key == "col") {
            std::string rest;
            std::getline(ls, rest);
            if (!rest.empty() && rest.front() == ' ') rest.erase(0, 1);
            cols.push_back(rest);
        } else if (key == "scale") {
            double mu = 0, sigma = 0;
            if (!(ls >> mu >> sigma)) throw fail("bad scale line");
            m.scaling.mu.push_back(mu);
            m.scaling.sigma.push_back(sigma);
        } else if (key == "ref") {
            double lo = 0, hi = 0;
            if (!(ls >> lo >> hi)) throw fail("bad ref line");
            m.predicate.lo.push_back(lo);
            m.predicate.hi.push_back(hi);
        } else if (key == "train") {
            if (!(ls >> train_count >> train_bits)) throw fail("bad train line");
        } else if (key == "vec") {
            int64_t id = 0;
            std::string hex;
            if (!(ls >> id >> hex)) throw fail("bad vec line");
            m.train_ids.push_back(id);
            m.train_vectors.push_back(detail::hex_to_bits(hex, train_bits));
        } else if (key == "end") {
            saw_end = true;
            break;
        } else {
            throw fail("unknown key '" + key + "'");
        }
    }
    if (!saw_end) throw fail("truncated file");
    if (m.scaling.cols() != n) throw fail("scale line count mismatch");
    if (m.train_vectors.size() != train_count) throw fail("vec line count mismatch");
    if (train_bits != n) throw fail("train bit width mismatch");
    if (m.predicate.kind == PredicateKind::ref_excess &&
        (m.predicate.lo.size() != n || m.predicate.hi.size() != n))
        throw fail("ref line count mismatch");
    m.column_names = std::move(cols);
    return m;
}

} // namespace coindex
