#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace aoa {

// Real width is fixed at build time. Gradient checking and training both
// run in 64-bit; a 32-bit build (-DAOA_REAL_FLOAT) exists for size
// experiments but is not suitable for finite-difference verification.
#ifdef AOA_REAL_FLOAT
using Real = float;
#else
using Real = double;
#endif

// Dense row-major matrix. The single numeric carrier for hidden states,
// weights and attention tables.
struct Matrix {
    std::size_t rows{0};
    std::size_t cols{0};
    std::vector<Real> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, Real fill = Real(0))
        : rows(r), cols(c), data(r * c, fill) {}

    Real& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    Real operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    Real* row(std::size_t r) { return data.data() + r * cols; }
    const Real* row(std::size_t r) const { return data.data() + r * cols; }

    std::size_t size() const { return data.size(); }
    std::string shape_str() const;

    bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }
    bool operator==(const Matrix& o) const = default;
};

enum class Nonlinearity { Sigmoid, Tanh };

Real sigmoid(Real x);

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& m);

// Column-wise softmax: each column becomes a distribution (max-subtracted).
Matrix softmax_cols(const Matrix& m);
// Row-wise softmax: each row becomes a distribution (max-subtracted).
Matrix softmax_rows(const Matrix& m);

Matrix elementwise(const Matrix& m, Nonlinearity fn);

void add_inplace(Matrix& a, const Matrix& b);
void scale_inplace(Matrix& m, Real s);

// y = M x
std::vector<Real> matvec(const Matrix& m, const std::vector<Real>& x);
// y = M^T x
std::vector<Real> matvec_t(const Matrix& m, const std::vector<Real>& x);
// A += u v^T
void outer_accum(Matrix& a, const std::vector<Real>& u, const std::vector<Real>& v);

Real dot(const std::vector<Real>& a, const std::vector<Real>& b);

}  // namespace aoa
