// SPDX-License-Identifier: MIT

#ifndef OSGP_RNG_HPP
#define OSGP_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace osgp {

// Deterministic random source. All distribution helpers are implemented
// on top of the raw 64-bit stream so that results are reproducible across
// standard library implementations (std::uniform_*_distribution makes no
// such guarantee).
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    uint64_t next() { return gen_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double real() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double real(double lo, double hi) { return lo + (hi - lo) * real(); }

    // Uniform in [0, n). n must be > 0.
    uint64_t below(uint64_t n) {
        return static_cast<uint64_t>((static_cast<__uint128_t>(next()) * n) >> 64);
    }

    // Uniform integer in [lo, hi], inclusive.
    int64_t integer(int64_t lo, int64_t hi) {
        return lo + static_cast<int64_t>(below(static_cast<uint64_t>(hi - lo) + 1));
    }

    bool bernoulli(double p) { return real() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 gen_;
};

} // namespace osgp

#endif
