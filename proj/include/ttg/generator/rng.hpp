#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace ttg {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent stream per (seed, index), so sample i never depends on sample i-1.
inline Rng stream_for(std::uint64_t seed, std::uint64_t index) {
    return Rng(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
}

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline double uniform_real(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
inline bool bernoulli(Rng& rng, double p) { return p >= 1.0 || (p > 0.0 && std::bernoulli_distribution(p)(rng)); }

inline double lognormal(Rng& rng, double mu, double sigma) {
    if (sigma <= 0.0) return std::exp(mu);
    return std::lognormal_distribution<double>(mu, sigma)(rng);
}

/// Index drawn with probability proportional to `weights` (all zero -> -1).
inline int weighted_index(Rng& rng, const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += std::max(0.0, w);
    if (total <= 0.0) return -1;
    double u = uniform_real(rng, 0.0, total);
    for (std::size_t i = 0; i < weights.size(); ++i) {
        u -= std::max(0.0, weights[i]);
        if (u < 0.0) return static_cast<int>(i);
    }
    for (std::size_t i = weights.size(); i-- > 0;)
        if (weights[i] > 0.0) return static_cast<int>(i);
    return -1;
}

/// k distinct indices, each round drawn proportionally to the remaining weights.
inline std::vector<int> weighted_sample_without_replacement(Rng& rng, std::vector<double> weights, int k) {
    std::vector<int> out;
    while (static_cast<int>(out.size()) < k) {
        int i = weighted_index(rng, weights);
        if (i < 0) break;
        out.push_back(i);
        weights[static_cast<std::size_t>(i)] = 0.0;
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Rounds cents to whole dollars.
inline std::int64_t round_dollars(double cents) { return static_cast<std::int64_t>(std::llround(cents / 100.0)) * 100; }

}  // namespace ttg
