#pragma once

#include "propaxis/num/matrix.hpp"

namespace propaxis::num::kernels {

// Deterministic reduction order
// -----------------------------
// Every reduction in this module is defined element-wise or row-wise:
//   * matmul: out(i,j) accumulates a(i,k)*b(k,j) for k = 0..K-1 in ascending
//     k order into a single accumulator. The OpenMP kernel parallelizes over
//     output rows only, so the per-element order is unchanged and the result
//     is bit-identical to the serial reference for any thread count.
//   * sums (sum_all, bce_mean, dot): each row is accumulated sequentially
//     left-to-right, then the row partials are combined in ascending row
//     order. Row partials may be produced in parallel; the combination is
//     always sequential.
// Tests assert bit-equality between the serial and OpenMP kernels.

/// Serial reference: naive i-j-k product.
void matmul_serial(const Matrix& a, const Matrix& b, Matrix& out);

/// OpenMP kernel: i-k-j loop nest parallelized over rows of `a`.
/// Bit-identical to matmul_serial.
void matmul_omp(const Matrix& a, const Matrix& b, Matrix& out);

/// Dispatching entry point (OpenMP above a size threshold).
/// Errors with both shapes on a.cols != b.rows.
Matrix matmul(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& a);

double sum_all_serial(const Matrix& a);
double sum_all_omp(const Matrix& a);
double sum_all(const Matrix& a);

/// Stable binary cross-entropy on a single logit:
///   weight * (max(x,0) - x*target + ln(1 + e^{-|x|}))
/// Total on finite inputs; never returns NaN/Inf for |logit| <= 1e3.
double stable_bce(double logit, double target, double weight);

/// Mean over all rows*cols entries of stable_bce(logits, targets, weights).
/// Row-partial reduction order as documented above.
double bce_mean_serial(const Matrix& logits, const Matrix& targets, const Matrix& weights);
double bce_mean_omp(const Matrix& logits, const Matrix& targets, const Matrix& weights);
double bce_mean(const Matrix& logits, const Matrix& targets, const Matrix& weights);

/// d(bce_mean)/d(logits) scaled by `upstream`, accumulated into dlogits.
void bce_mean_backward(const Matrix& logits, const Matrix& targets, const Matrix& weights,
                       double upstream, Matrix& dlogits);

double sigmoid(double x);

} // namespace propaxis::num::kernels
