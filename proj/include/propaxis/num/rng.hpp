#pragma once

#include <cstdint>

#include "propaxis/num/matrix.hpp"

namespace propaxis::num {

/// Counter-based generator (splitmix64). The state advances by a fixed Weyl
/// increment and each output is a bijective mix of the state, so identical
/// seeds give identical streams on every platform.
///
/// Gaussian draws use Box-Muller with a fixed pairing: each call to
/// next_gaussian() consumes exactly two uniforms u1, u2 (in that order) and
/// returns sqrt(-2 ln(1-u1)) * cos(2 pi u2). The sine companion is discarded,
/// so the mapping from the uniform stream to the Gaussian stream is
/// stateless.
class RngState {
public:
    explicit RngState(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

    double next_gaussian();

    bool next_bernoulli(double p) { return next_double() < p; }

private:
    std::uint64_t state_;
};

/// Stable per-pair seed: mixes (global, a, b) so the stream is independent of
/// scheduling order. Symmetric callers canonicalize (a, b) first.
std::uint64_t derive_seed(std::uint64_t global, std::uint64_t a, std::uint64_t b);

/// Glorot-uniform init, U(-limit, limit) with limit = sqrt(6 / (fan_in + fan_out)),
/// filled in row-major draw order.
Matrix glorot_uniform(std::size_t rows, std::size_t cols, RngState& rng);

Matrix gaussian_matrix(std::size_t rows, std::size_t cols, RngState& rng);

} // namespace propaxis::num
