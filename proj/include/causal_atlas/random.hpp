#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

namespace causal_atlas {

using Rng = std::mt19937_64;

/// Seeds a generator from a master seed and a stream counter, so that
/// replicate k of a run never shares a stream with replicate k+1.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return Rng(seq);
}

inline double uniform01(Rng& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

/// Magnitude in [lo, hi] with a random sign.
inline double signed_uniform(Rng& rng, double lo, double hi) {
    double magnitude = std::uniform_real_distribution<double>(lo, hi)(rng);
    return std::bernoulli_distribution(0.5)(rng) ? magnitude : -magnitude;
}

/// Picks `count` distinct indices from [0, n) in random order.
inline std::vector<int> sample_without_replacement(int n, int count, Rng& rng) {
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(std::max(0, std::min(count, n)));
    return idx;
}

}  // namespace causal_atlas
