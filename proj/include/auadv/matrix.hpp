#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace auadv {

// Thrown when operand shapes do not conform.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Thrown when a computation produces or receives a non-finite value.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dense row-major matrix of doubles; the carrier for features, labels,
/// activations, parameters and gradients.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    std::size_t size() const { return data.size(); }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    Matrix row(std::size_t i) const {
        Matrix r(1, cols);
        for (std::size_t j = 0; j < cols; ++j) r(0, j) = (*this)(i, j);
        return r;
    }

    bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }
};

std::string shape_str(const Matrix& m);

/// Standard matrix product; throws DimensionError naming both shapes.
Matrix matmul(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& m);

/// Throws NumericError if any entry is NaN or infinite.
void check_finite(const Matrix& m, const std::string& what);
void check_finite(const std::vector<double>& v, const std::string& what);

}  // namespace auadv
