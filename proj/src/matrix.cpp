#include "auadv/matrix.hpp"

#include <cmath>

namespace auadv {

std::string shape_str(const Matrix& m) {
    return "(" + std::to_string(m.rows) + "x" + std::to_string(m.cols) + ")";
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) {
        throw DimensionError("matmul: inner dimensions differ, " + shape_str(a) +
                             " x " + shape_str(b));
    }
    Matrix out(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols; ++j) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

Matrix transpose(const Matrix& m) {
    Matrix t(m.cols, m.rows);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
    return t;
}

void check_finite(const Matrix& m, const std::string& what) {
    for (double v : m.data) {
        if (!std::isfinite(v)) throw NumericError(what + ": non-finite entry");
    }
}

void check_finite(const std::vector<double>& v, const std::string& what) {
    for (double x : v) {
        if (!std::isfinite(x)) throw NumericError(what + ": non-finite entry");
    }
}

}  // namespace auadv
