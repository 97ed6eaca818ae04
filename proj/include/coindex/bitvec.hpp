#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "coindex/errors.hpp"

namespace coindex {

// Packed 0/1 vector with a cached Hamming weight. Bits are stored 64 per
// word, bit i at word i/64, position i%64; unused tail bits stay zero.
class IncidenceVector {
public:
    IncidenceVector() = default;

    explicit IncidenceVector(size_t nbits)
        : words_((nbits + 63) / 64, 0), size_(nbits) {}

    static IncidenceVector from_bools(const std::vector<bool>& bits) {
        IncidenceVector v(bits.size());
        for (size_t i = 0; i < bits.size(); ++i)
            if (bits[i]) v.set(i);
        return v;
    }

    size_t size() const { return size_; }
    size_t weight() const { return weight_; }

    bool test(size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }

    // set only; weight stays consistent without a recount
    void set(size_t i) {
        uint64_t& w = words_[i >> 6];
        const uint64_t mask = uint64_t(1) << (i & 63);
        if (!(w & mask)) {
            w |= mask;
            ++weight_;
        }
    }

    IncidenceVector complement() const {
        IncidenceVector out(size_);
        for (size_t k = 0; k < words_.size(); ++k) out.words_[k] = ~words_[k];
        if (size_ & 63)
            out.words_.back() &= (uint64_t(1) << (size_ & 63)) - 1;
        out.weight_ = size_ - weight_;
        return out;
    }

    bool operator==(const IncidenceVector& o) const {
        return size_ == o.size_ && words_ == o.words_;
    }

    const std::vector<uint64_t>& words() const { return words_; }

    friend size_t and_weight(const IncidenceVector& a, const IncidenceVector& b) {
        check_same_size(a, b);
        size_t c = 0;
        for (size_t k = 0; k < a.words_.size(); ++k)
            c += static_cast<size_t>(std::popcount(a.words_[k] & b.words_[k]));
        return c;
    }

    friend size_t or_weight(const IncidenceVector& a, const IncidenceVector& b) {
        check_same_size(a, b);
        size_t c = 0;
        for (size_t k = 0; k < a.words_.size(); ++k)
            c += static_cast<size_t>(std::popcount(a.words_[k] | b.words_[k]));
        return c;
    }

    friend size_t xor_weight(const IncidenceVector& a, const IncidenceVector& b) {
        check_same_size(a, b);
        size_t c = 0;
        for (size_t k = 0; k < a.words_.size(); ++k)
            c += static_cast<size_t>(std::popcount(a.words_[k] ^ b.words_[k]));
        return c;
    }

    // every set bit of a is set in b
    friend bool is_subset(const IncidenceVector& a, const IncidenceVector& b) {
        check_same_size(a, b);
        for (size_t k = 0; k < a.words_.size(); ++k)
            if (a.words_[k] & ~b.words_[k]) return false;
        return true;
    }

private:
    static void check_same_size(const IncidenceVector& a, const IncidenceVector& b) {
        if (a.size_ != b.size_)
            throw DataError("incidence vector length mismatch");
    }

    std::vector<uint64_t> words_;
    size_t size_ = 0;
    size_t weight_ = 0;
};

} // namespace coindex
