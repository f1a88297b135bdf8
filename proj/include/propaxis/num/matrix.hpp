#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "propaxis/common/error.hpp"

namespace propaxis::num {

/// Dense row-major matrix of 64-bit floats. Matrices are plain values:
/// copyable, movable, immutable by convention once an operation returns one.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    std::size_t size() const { return rows * cols; }
    bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }

    std::string shape_str() const {
        return std::to_string(rows) + "x" + std::to_string(cols);
    }
};

inline void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
    if (!a.same_shape(b))
        raise(ErrorKind::Shape, std::string(op) + ": shape mismatch " + a.shape_str() +
                                    " vs " + b.shape_str());
}

} // namespace propaxis::num
