#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "coindex/bitvec.hpp"
#include "coindex/dataset.hpp"
#include "coindex/rng.hpp"

namespace testsupport {

inline std::string data_dir() { return COINDEX_DATA_DIR; }

// fresh directory under the system temp root
class TempDir {
public:
    explicit TempDir(const std::string& hint) {
        namespace fs = std::filesystem;
        path_ = fs::temp_directory_path() / ("coindex_" + hint + "_" +
                                             std::to_string(counter_++));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    std::string file(const std::string& name) const { return (path_ / name).string(); }
    std::string str() const { return path_.string(); }

private:
    static inline int counter_ = 0;
    std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

inline coindex::Dataset make_dataset(const std::vector<std::vector<double>>& rows,
                                     const std::vector<uint8_t>& labels) {
    coindex::Dataset d;
    const size_t n = rows.empty() ? 0 : rows[0].size();
    for (size_t j = 0; j < n; ++j) d.column_names.push_back("c" + std::to_string(j));
    for (size_t i = 0; i < rows.size(); ++i) {
        d.ids.push_back(static_cast<int64_t>(i));
        for (double v : rows[i]) d.values.push_back(v);
    }
    d.labels = labels;
    return d;
}

inline coindex::IncidenceVector random_bits(coindex::SplitMix64& rng, size_t nbits,
                                            double density = 0.5) {
    coindex::IncidenceVector v(nbits);
    for (size_t i = 0; i < nbits; ++i)
        if (rng.uniform() < density) v.set(i);
    return v;
}

} // namespace testsupport
