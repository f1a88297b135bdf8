#include "propaxis/num/kernels.hpp"

#include <cmath>
#include <cstdint>

namespace propaxis::num::kernels {

namespace {
// Below this many multiply-adds the OpenMP fork/join overhead dominates.
constexpr std::size_t kParallelThreshold = 1 << 15;
} // namespace

void matmul_serial(const Matrix& a, const Matrix& b, Matrix& out) {
    out = Matrix(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t j = 0; j < b.cols; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < a.cols; ++k)
                acc += a.data[i * a.cols + k] * b.data[k * b.cols + j];
            out.data[i * b.cols + j] = acc;
        }
    }
}

void matmul_omp(const Matrix& a, const Matrix& b, Matrix& out) {
    out = Matrix(a.rows, b.cols);
    const std::int64_t rows = static_cast<std::int64_t>(a.rows);
    const std::size_t inner = a.cols, ocols = b.cols;
    double* o = out.data.data();
    const double* ad = a.data.data();
    const double* bd = b.data.data();
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < rows; ++i) {
        double* orow = o + static_cast<std::size_t>(i) * ocols;
        for (std::size_t k = 0; k < inner; ++k) {
            const double aik = ad[static_cast<std::size_t>(i) * inner + k];
            const double* brow = bd + k * ocols;
            for (std::size_t j = 0; j < ocols; ++j)
                orow[j] += aik * brow[j];
        }
    }
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows)
        raise(ErrorKind::Shape,
              "matmul: inner dimensions differ, " + a.shape_str() + " * " + b.shape_str());
    Matrix out;
    if (a.rows * a.cols * b.cols >= kParallelThreshold)
        matmul_omp(a, b, out);
    else
        matmul_serial(a, b, out);
    return out;
}

Matrix transpose(const Matrix& a) {
    Matrix out(a.cols, a.rows);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j)
            out.data[j * a.rows + i] = a.data[i * a.cols + j];
    return out;
}

double sum_all_serial(const Matrix& a) {
    double total = 0.0;
    for (std::size_t i = 0; i < a.rows; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < a.cols; ++j) row += a.data[i * a.cols + j];
        total += row;
    }
    return total;
}

double sum_all_omp(const Matrix& a) {
    const std::int64_t rows = static_cast<std::int64_t>(a.rows);
    std::vector<double> partial(a.rows, 0.0);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < rows; ++i) {
        double row = 0.0;
        const double* r = a.data.data() + static_cast<std::size_t>(i) * a.cols;
        for (std::size_t j = 0; j < a.cols; ++j) row += r[j];
        partial[static_cast<std::size_t>(i)] = row;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

double sum_all(const Matrix& a) {
    return a.size() >= kParallelThreshold ? sum_all_omp(a) : sum_all_serial(a);
}

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double stable_bce(double logit, double target, double weight) {
    const double x = logit;
    return weight * (std::max(x, 0.0) - x * target + std::log1p(std::exp(-std::fabs(x))));
}

namespace {
inline double bce_row(const double* x, const double* t, const double* w, std::size_t n) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += stable_bce(x[j], t[j], w[j]);
    return acc;
}
} // namespace

double bce_mean_serial(const Matrix& logits, const Matrix& targets, const Matrix& weights) {
    require_same_shape(logits, targets, "bce_mean");
    require_same_shape(logits, weights, "bce_mean");
    double total = 0.0;
    for (std::size_t i = 0; i < logits.rows; ++i)
        total += bce_row(logits.data.data() + i * logits.cols,
                         targets.data.data() + i * logits.cols,
                         weights.data.data() + i * logits.cols, logits.cols);
    return total / static_cast<double>(logits.size());
}

double bce_mean_omp(const Matrix& logits, const Matrix& targets, const Matrix& weights) {
    require_same_shape(logits, targets, "bce_mean");
    require_same_shape(logits, weights, "bce_mean");
    const std::int64_t rows = static_cast<std::int64_t>(logits.rows);
    std::vector<double> partial(logits.rows, 0.0);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < rows; ++i) {
        const std::size_t off = static_cast<std::size_t>(i) * logits.cols;
        partial[static_cast<std::size_t>(i)] =
            bce_row(logits.data.data() + off, targets.data.data() + off,
                    weights.data.data() + off, logits.cols);
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total / static_cast<double>(logits.size());
}

double bce_mean(const Matrix& logits, const Matrix& targets, const Matrix& weights) {
    return logits.size() >= kParallelThreshold ? bce_mean_omp(logits, targets, weights)
                                               : bce_mean_serial(logits, targets, weights);
}

void bce_mean_backward(const Matrix& logits, const Matrix& targets, const Matrix& weights,
                       double upstream, Matrix& dlogits) {
    require_same_shape(logits, dlogits, "bce_mean_backward");
    const double scale = upstream / static_cast<double>(logits.size());
    const std::int64_t n = static_cast<std::int64_t>(logits.size());
#pragma omp parallel for schedule(static) if (n >= static_cast<std::int64_t>(kParallelThreshold))
    for (std::int64_t idx = 0; idx < n; ++idx) {
        const std::size_t u = static_cast<std::size_t>(idx);
        dlogits.data[u] += scale * weights.data[u] * (sigmoid(logits.data[u]) - targets.data[u]);
    }
}

} // namespace propaxis::num::kernels
