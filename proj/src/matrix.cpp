#include "imgqa/matrix.hpp"

#include <cmath>

#include "imgqa/error.hpp"

namespace imgqa {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) {
        throw ShapeError("matmul: inner dimensions disagree: " + a.shape_string() +
                         " vs " + b.shape_string());
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
    Matrix out(m.cols, m.rows);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) out(j, i) = m(i, j);
    return out;
}

void matvec_accumulate(const Matrix& a, const std::vector<double>& x, std::vector<double>& y) {
    if (a.cols != x.size() || a.rows != y.size()) {
        throw ShapeError("matvec: " + a.shape_string() + " against vectors of length " +
                         std::to_string(x.size()) + " and " + std::to_string(y.size()));
    }
    const double* row = a.data.data();
    for (std::size_t r = 0; r < a.rows; ++r, row += a.cols) {
        double acc = 0.0;
        for (std::size_t c = 0; c < a.cols; ++c) acc += row[c] * x[c];
        y[r] += acc;
    }
}

void matvec_transpose_accumulate(const Matrix& a, const std::vector<double>& y,
                                 std::vector<double>& x) {
    if (a.cols != x.size() || a.rows != y.size()) {
        throw ShapeError("matvec_transpose: " + a.shape_string() +
                         " against vectors of length " + std::to_string(y.size()) + " and " +
                         std::to_string(x.size()));
    }
    const double* row = a.data.data();
    for (std::size_t r = 0; r < a.rows; ++r, row += a.cols) {
        const double yr = y[r];
        if (yr == 0.0) continue;
        for (std::size_t c = 0; c < a.cols; ++c) x[c] += row[c] * yr;
    }
}

void add_outer(Matrix& a, const std::vector<double>& y, const std::vector<double>& x) {
    if (a.rows != y.size() || a.cols != x.size()) {
        throw ShapeError("add_outer: " + a.shape_string() + " against vectors of length " +
                         std::to_string(y.size()) + " and " + std::to_string(x.size()));
    }
    double* row = a.data.data();
    for (std::size_t r = 0; r < a.rows; ++r, row += a.cols) {
        const double yr = y[r];
        if (yr == 0.0) continue;
        for (std::size_t c = 0; c < a.cols; ++c) row[c] += yr * x[c];
    }
}

bool all_finite(const Matrix& m) { return all_finite(m.data); }

bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace imgqa
