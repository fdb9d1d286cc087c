#pragma once

#include <cstdint>

namespace ppbf {

namespace detail {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// SplitMix64 finalizer. Bijective on 64-bit values.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}
} // namespace detail

// Counter-based generator: draw i of stream `key` is mix64(key + (i+1)*golden).
// The same (key, counter) pair yields the same value on every platform, and
// streams can be derived hierarchically without sharing state.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key) : key_(key) {}

    std::uint64_t next() { return detail::mix64(key_ + (++ctr_) * detail::kGolden); }

    // Bernoulli(p) as a threshold test on one 64-bit draw.
    bool bernoulli(std::uint64_t threshold) { return next() < threshold; }

    std::uint64_t key() const { return key_; }

private:
    std::uint64_t key_;
    std::uint64_t ctr_ = 0;
};

// p in [0,1] mapped to a 64-bit acceptance threshold.
inline std::uint64_t bernoulli_threshold(double p) {
    if (p <= 0.0) return 0;
    if (p >= 1.0) return ~std::uint64_t{0};
    return static_cast<std::uint64_t>(p * 18446744073709551616.0);
}

// Stream derivation: child key of (base, index).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    return detail::mix64(base + (index + 1) * detail::kGolden);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
    return derive_seed(derive_seed(base, a), b);
}

} // namespace ppbf
