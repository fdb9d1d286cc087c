#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "ppbf/errors.hpp"

namespace ppbf {

// Fixed-length vector over GF(2). Length is set at construction; XOR and
// dot-mod-2 require equal lengths.
class BitVector {
public:
    BitVector() = default;

    explicit BitVector(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

    static BitVector from_indices(std::size_t n, std::initializer_list<std::size_t> idx) {
        BitVector b(n);
        for (std::size_t i : idx) b.set(i, true);
        return b;
    }

    static BitVector from_indices(std::size_t n, const std::vector<std::size_t>& idx) {
        BitVector b(n);
        for (std::size_t i : idx) b.set(i, true);
        return b;
    }

    std::size_t size() const { return n_; }

    bool get(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }

    void set(std::size_t i, bool v) {
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (v)
            w_[i >> 6] |= mask;
        else
            w_[i >> 6] &= ~mask;
    }

    void flip(std::size_t i) { w_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    BitVector& operator^=(const BitVector& o) {
        check_same_length(o);
        for (std::size_t k = 0; k < w_.size(); ++k) w_[k] ^= o.w_[k];
        return *this;
    }

    friend BitVector operator^(BitVector a, const BitVector& b) {
        a ^= b;
        return a;
    }

    // Inner product mod 2.
    bool dot(const BitVector& o) const {
        check_same_length(o);
        std::uint64_t acc = 0;
        for (std::size_t k = 0; k < w_.size(); ++k) acc ^= w_[k] & o.w_[k];
        return std::popcount(acc) & 1;
    }

    std::size_t weight() const {
        std::size_t c = 0;
        for (std::uint64_t w : w_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    bool is_zero() const {
        for (std::uint64_t w : w_)
            if (w) return false;
        return true;
    }

    bool operator==(const BitVector& o) const { return n_ == o.n_ && w_ == o.w_; }
    bool operator!=(const BitVector& o) const { return !(*this == o); }

    std::vector<std::size_t> ones() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < n_; ++i)
            if (get(i)) out.push_back(i);
        return out;
    }

    std::string to_string01() const {
        std::string s(n_, '0');
        for (std::size_t i = 0; i < n_; ++i)
            if (get(i)) s[i] = '1';
        return s;
    }

private:
    void check_same_length(const BitVector& o) const {
        if (n_ != o.n_) throw invalid_parameter("BitVector length mismatch");
    }

    std::size_t n_ = 0;
    std::vector<std::uint64_t> w_;
};

} // namespace ppbf
