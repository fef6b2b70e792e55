#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace imgqa {

/// Dense row-major matrix of doubles. Vectors are stored as n x 1.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    std::size_t size() const { return data.size(); }
    bool same_shape(const Matrix& other) const {
        return rows == other.rows && cols == other.cols;
    }

    std::string shape_string() const {
        return std::to_string(rows) + "x" + std::to_string(cols);
    }

    static Matrix identity(std::size_t n);
};

/// Standard product of an m x k and a k x n matrix.
/// Throws ShapeError naming both shapes when the inner dimensions disagree.
Matrix matmul(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& m);

/// y[r] = sum_c A(r,c) * x[c], accumulated on top of y's current contents.
void matvec_accumulate(const Matrix& a, const std::vector<double>& x, std::vector<double>& y);

/// x[c] += sum_r A(r,c) * y[r] (transposed accumulate, used by backprop).
void matvec_transpose_accumulate(const Matrix& a, const std::vector<double>& y,
                                 std::vector<double>& x);

/// A(r,c) += y[r] * x[c] for all r, c (rank-one update).
void add_outer(Matrix& a, const std::vector<double>& y, const std::vector<double>& x);

bool all_finite(const Matrix& m);
bool all_finite(const std::vector<double>& v);

}  // namespace imgqa
