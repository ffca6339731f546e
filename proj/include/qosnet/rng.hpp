#pragma once

#include <cstdint>
#include <random>

namespace qosnet {

// Seeded generator with a fixed draw order. Every stochastic component takes
// one of these explicitly, so a run replays bit-identically from its seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Uniform on [0, 1).
    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(gen_); }

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(gen_);
    }

    // Uniform over {0, ..., n-1}; n >= 1.
    int uniform_int(int n) { return std::uniform_int_distribution<int>(0, n - 1)(gen_); }

    // Exponential with the given rate (mean 1/rate); rate > 0.
    double exponential(double rate) {
        return std::exponential_distribution<double>(rate)(gen_);
    }

    // Poisson with the given mean; a zero or negative mean draws nothing.
    long long poisson(double mean) {
        if (mean <= 0.0) return 0;
        return std::poisson_distribution<long long>(mean)(gen_);
    }

    std::mt19937_64& engine() { return gen_; }

private:
    std::mt19937_64 gen_;
};

} // namespace qosnet
