#include "aoa/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace aoa {

std::string Matrix::shape_str() const {
    return std::to_string(rows) + "x" + std::to_string(cols);
}

Real sigmoid(Real x) {
    // Branch form avoids overflow of exp for large |x|.
    if (x >= 0) {
        return Real(1) / (Real(1) + std::exp(-x));
    }
    const Real e = std::exp(x);
    return e / (Real(1) + e);
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) {
        throw std::invalid_argument("matmul: incompatible shapes " + a.shape_str() +
                                    " and " + b.shape_str());
    }
    Matrix c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        const Real* ar = a.row(i);
        Real* cr = c.row(i);
        for (std::size_t k = 0; k < a.cols; ++k) {
            const Real av = ar[k];
            const Real* br = b.row(k);
            for (std::size_t j = 0; j < b.cols; ++j) {
                cr[j] += av * br[j];
            }
        }
    }
    return c;
}

Matrix transpose(const Matrix& m) {
    Matrix t(m.cols, m.rows);
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) {
            t(j, i) = m(i, j);
        }
    }
    return t;
}

Matrix softmax_cols(const Matrix& m) {
    Matrix out(m.rows, m.cols);
    for (std::size_t j = 0; j < m.cols; ++j) {
        Real mx = -std::numeric_limits<Real>::infinity();
        for (std::size_t i = 0; i < m.rows; ++i) mx = std::max(mx, m(i, j));
        Real sum = 0;
        for (std::size_t i = 0; i < m.rows; ++i) {
            out(i, j) = std::exp(m(i, j) - mx);
            sum += out(i, j);
        }
        for (std::size_t i = 0; i < m.rows; ++i) out(i, j) /= sum;
    }
    return out;
}

Matrix softmax_rows(const Matrix& m) {
    Matrix out(m.rows, m.cols);
    for (std::size_t i = 0; i < m.rows; ++i) {
        const Real* in = m.row(i);
        Real* o = out.row(i);
        const Real mx = *std::max_element(in, in + m.cols);
        Real sum = 0;
        for (std::size_t j = 0; j < m.cols; ++j) {
            o[j] = std::exp(in[j] - mx);
            sum += o[j];
        }
        for (std::size_t j = 0; j < m.cols; ++j) o[j] /= sum;
    }
    return out;
}

Matrix elementwise(const Matrix& m, Nonlinearity fn) {
    Matrix out(m.rows, m.cols);
    for (std::size_t i = 0; i < m.data.size(); ++i) {
        out.data[i] = fn == Nonlinearity::Sigmoid ? sigmoid(m.data[i]) : std::tanh(m.data[i]);
    }
    return out;
}

void add_inplace(Matrix& a, const Matrix& b) {
    if (!a.same_shape(b)) {
        throw std::invalid_argument("add_inplace: shape mismatch " + a.shape_str() +
                                    " vs " + b.shape_str());
    }
    for (std::size_t i = 0; i < a.data.size(); ++i) a.data[i] += b.data[i];
}

void scale_inplace(Matrix& m, Real s) {
    for (Real& v : m.data) v *= s;
}

std::vector<Real> matvec(const Matrix& m, const std::vector<Real>& x) {
    if (m.cols != x.size()) {
        throw std::invalid_argument("matvec: " + m.shape_str() + " vs vector of length " +
                                    std::to_string(x.size()));
    }
    std::vector<Real> y(m.rows, Real(0));
    for (std::size_t i = 0; i < m.rows; ++i) {
        const Real* r = m.row(i);
        Real acc = 0;
        for (std::size_t j = 0; j < m.cols; ++j) acc += r[j] * x[j];
        y[i] = acc;
    }
    return y;
}

std::vector<Real> matvec_t(const Matrix& m, const std::vector<Real>& x) {
    if (m.rows != x.size()) {
        throw std::invalid_argument("matvec_t: " + m.shape_str() + " vs vector of length " +
                                    std::to_string(x.size()));
    }
    std::vector<Real> y(m.cols, Real(0));
    for (std::size_t i = 0; i < m.rows; ++i) {
        const Real* r = m.row(i);
        const Real xv = x[i];
        for (std::size_t j = 0; j < m.cols; ++j) y[j] += r[j] * xv;
    }
    return y;
}

void outer_accum(Matrix& a, const std::vector<Real>& u, const std::vector<Real>& v) {
    if (a.rows != u.size() || a.cols != v.size()) {
        throw std::invalid_argument("outer_accum: " + a.shape_str() + " vs " +
                                    std::to_string(u.size()) + "x" + std::to_string(v.size()));
    }
    for (std::size_t i = 0; i < u.size(); ++i) {
        Real* r = a.row(i);
        const Real uv = u[i];
        for (std::size_t j = 0; j < v.size(); ++j) r[j] += uv * v[j];
    }
}

Real dot(const std::vector<Real>& a, const std::vector<Real>& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("dot: length mismatch " + std::to_string(a.size()) +
                                    " vs " + std::to_string(b.size()));
    }
    Real acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

}  // namespace aoa
