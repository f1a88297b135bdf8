#include "propaxis/num/rng.hpp"

#include <cmath>
#include <numbers>

namespace propaxis::num {

double RngState::next_gaussian() {
    const double u1 = next_double();
    const double u2 = next_double();
    // 1-u1 is in (0, 1], so the log is finite.
    return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t derive_seed(std::uint64_t global, std::uint64_t a, std::uint64_t b) {
    RngState mixer(global);
    std::uint64_t s = mixer.next_u64();
    s ^= RngState(a ^ 0x517CC1B727220A95ULL).next_u64();
    s = s * 0x2545F4914F6CDD1DULL + b;
    return RngState(s).next_u64();
}

Matrix glorot_uniform(std::size_t rows, std::size_t cols, RngState& rng) {
    const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
    Matrix m(rows, cols);
    for (double& v : m.data) v = (2.0 * rng.next_double() - 1.0) * limit;
    return m;
}

Matrix gaussian_matrix(std::size_t rows, std::size_t cols, RngState& rng) {
    Matrix m(rows, cols);
    for (double& v : m.data) v = rng.next_gaussian();
    return m;
}

} // namespace propaxis::num
