#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace pwband {

/// Purpose tags for independent random streams. Data streams and the
/// auxiliary randomization streams (u-draws, permutations) never share state.
enum class Stream : std::uint64_t {
    truth = 1,
    inputs = 2,
    noise = 3,
    norm_u = 4,
    subsample = 5,
    voting_perm = 6,
    voting_u = 7,
    query = 8,
    provider = 9,
    search = 10,
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed for (master, trial, stream); distinct triples give unrelated seeds.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial, Stream stream) noexcept {
    return mix64(mix64(mix64(master) ^ trial) ^ static_cast<std::uint64_t>(stream));
}

/// Seeded 64-bit Mersenne Twister with explicitly specified variate transforms,
/// so that draws are identical across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    Rng(std::uint64_t master, std::uint64_t trial, Stream stream)
        : engine_(derive_seed(master, trial, stream)) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1].
    double uniform_open_closed() { return 1.0 - uniform(); }

    /// Uniform on (0, 1); rejects the single value 0.
    double uniform_open() {
        double u = uniform();
        while (u == 0.0) { u = uniform(); }
        return u;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Laplace(mu, scale) via inverse CDF.
    double laplace(double mu, double scale) {
        const double v = uniform_open() - 0.5;
        return v < 0.0 ? mu + scale * std::log(1.0 + 2.0 * v) : mu - scale * std::log(1.0 - 2.0 * v);
    }

    /// Exponential with the given mean.
    double exponential_mean(double mean) { return -mean * std::log(uniform_open_closed()); }

    /// Standard normal by Box-Muller (one variate per call).
    double normal() {
        const double u1 = uniform_open();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    /// Uniform integer in [0, n).
    std::size_t index(std::size_t n) {
        // Modulo with rejection of the biased tail.
        const std::uint64_t bound = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t r = engine_();
        while (r >= limit) { r = engine_(); }
        return static_cast<std::size_t>(r % bound);
    }

    /// Uniformly random permutation of 0..n-1 (Fisher-Yates).
    std::vector<std::size_t> permutation(std::size_t n) {
        std::vector<std::size_t> p(n);
        for (std::size_t i = 0; i < n; ++i) { p[i] = i; }
        for (std::size_t i = n; i > 1; --i) { std::swap(p[i - 1], p[index(i)]); }
        return p;
    }

    std::mt19937_64 &engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

}  // namespace pwband
