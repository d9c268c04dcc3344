// Deterministic seeded randomness. All draws go through this wrapper so that
// results are identical across platforms and thread counts; never use
// std::uniform_int_distribution (its output sequence is implementation
// defined).
#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace klab {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, n) by rejection.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) return 0;
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return x % n;
    }

    // Derive an independent stream; used to give sub-tasks their own
    // deterministic randomness without coupling draw orders.
    Rng fork() { return Rng(next_u64() ^ 0x9e3779b97f4a7c15ULL); }

    // Seeded Fisher-Yates shuffle of 0..n-1.
    std::vector<std::uint64_t> permutation(std::uint64_t n) {
        std::vector<std::uint64_t> v(n);
        for (std::uint64_t i = 0; i < n; ++i) v[i] = i;
        for (std::uint64_t i = n; i > 1; --i) {
            std::uint64_t j = below(i);
            std::swap(v[i - 1], v[j]);
        }
        return v;
    }

private:
    std::mt19937_64 gen_;
};

} // namespace klab
