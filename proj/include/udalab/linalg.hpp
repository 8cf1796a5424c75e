// Copyright 2026 The udalab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Dense complex linear algebra for small (d <= ~64) operators: the matrix
// type, a cyclic Jacobi eigensolver for Hermitian input, rank by row
// reduction, null spaces and Gram-Schmidt over real and complex inner
// products.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "udalab/error.hpp"

namespace udalab {

using cd = std::complex<double>;
using RealVector = std::vector<double>;
using ComplexVector = std::vector<cd>;

inline constexpr cd kI{0.0, 1.0};

class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cd> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        require(data_.size() == rows_ * cols_, ErrorCode::DimensionMismatch,
                "entry count does not equal rows*cols");
    }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix diagonal(std::span<const double> values) {
        ComplexMatrix m(values.size(), values.size());
        for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
        return m;
    }

    /// |v><w|
    static ComplexMatrix outer(std::span<const cd> v, std::span<const cd> w) {
        ComplexMatrix m(v.size(), w.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            for (std::size_t j = 0; j < w.size(); ++j) m(i, j) = v[i] * std::conj(w[j]);
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    cd& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cd& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<cd> data() noexcept { return data_; }
    std::span<const cd> data() const noexcept { return data_; }

    ComplexVector column(std::size_t j) const {
        ComplexVector v(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }
    void set_column(std::size_t j, std::span<const cd> v) {
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
        return r;
    }
    ComplexMatrix transpose() const {
        ComplexMatrix r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }
    ComplexMatrix conjugate() const {
        ComplexMatrix r = *this;
        for (auto& z : r.data_) z = std::conj(z);
        return r;
    }

    cd trace() const {
        cd t = 0.0;
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& z : data_) s += std::norm(z);
        return std::sqrt(s);
    }
    double max_abs() const {
        double m = 0.0;
        for (const auto& z : data_) m = std::max(m, std::abs(z));
        return m;
    }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        check_same_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }
    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        check_same_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }
    ComplexMatrix& operator*=(cd s) {
        for (auto& z : data_) z *= s;
        return *this;
    }
    /// this += s * o
    void axpy(cd s, const ComplexMatrix& o) {
        check_same_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += s * o.data_[k];
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, cd s) { return a *= s; }
    friend ComplexMatrix operator*(cd s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(ComplexMatrix a, double s) { return a *= cd(s); }
    friend ComplexMatrix operator*(double s, ComplexMatrix a) { return a *= cd(s); }

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
        require(a.cols_ == b.rows_, ErrorCode::DimensionMismatch, "matrix product shape mismatch");
        ComplexMatrix r(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const cd aik = a(i, k);
                if (aik == cd(0.0)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
            }
        return r;
    }

    friend ComplexVector operator*(const ComplexMatrix& a, std::span<const cd> v) {
        require(a.cols_ == v.size(), ErrorCode::DimensionMismatch, "matrix-vector shape mismatch");
        ComplexVector r(a.rows_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            cd s = 0.0;
            for (std::size_t j = 0; j < a.cols_; ++j) s += a(i, j) * v[j];
            r[i] = s;
        }
        return r;
    }

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    void check_same_shape(const ComplexMatrix& o) const {
        require(rows_ == o.rows_ && cols_ == o.cols_, ErrorCode::DimensionMismatch,
                "matrix shapes differ");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cd> data_;
};

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    r(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return r;
}

/// tr(A^dagger B)
inline cd hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorCode::DimensionMismatch,
            "inner product shape mismatch");
    cd s = 0.0;
    auto da = a.data();
    auto db = b.data();
    for (std::size_t k = 0; k < da.size(); ++k) s += std::conj(da[k]) * db[k];
    return s;
}

/// tr(A B) for Hermitian arguments; the real inner product on observables.
inline double hs_real(const ComplexMatrix& a, const ComplexMatrix& b) { return hs_inner(a, b).real(); }

inline double hermiticity_defect(const ComplexMatrix& m) {
    if (!m.square()) return INFINITY;
    double defect = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i; j < m.cols(); ++j)
            defect = std::max(defect, std::abs(m(i, j) - std::conj(m(j, i))));
    return defect;
}

inline ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

inline cd vdot(std::span<const cd> a, std::span<const cd> b) {
    cd s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}
inline double vnorm(std::span<const cd> a) { return std::sqrt(std::max(0.0, vdot(a, a).real())); }

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}
inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition (cyclic Jacobi)

struct EigenSystem {
    RealVector values;      ///< ascending
    ComplexMatrix vectors;  ///< column k pairs with values[k]
};

namespace detail {

// Cyclic complex Jacobi. `a` is overwritten with a (numerically) diagonal
// matrix; `v` accumulates the rotations.
inline void jacobi_diagonalize(ComplexMatrix& a, ComplexMatrix& v, int max_sweeps = 100) {
    const std::size_t n = a.rows();
    double total = 0.0;
    for (const auto& z : a.data()) total += std::norm(z);
    if (total == 0.0) return;
    const double stop = 1e-32 * total;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
        if (off <= stop) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cd apq = a(p, q);
                const double r = std::abs(apq);
                if (r <= 1e-300) continue;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                // Skip rotations that cannot change the diagonal in double precision.
                if (sweep > 3 && r < 1e-18 * (std::abs(app) + std::abs(aqq))) {
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    continue;
                }
                const cd phase = apq / r;
                const double tau = (aqq - app) / (2.0 * r);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cd sp = s * phase;             // s e^{i phi}
                const cd sm = s * std::conj(phase);  // s e^{-i phi}

                for (std::size_t k = 0; k < n; ++k) {
                    const cd akp = a(k, p);
                    const cd akq = a(k, q);
                    a(k, p) = c * akp - sm * akq;
                    a(k, q) = sp * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cd apk = a(p, k);
                    const cd aqk = a(q, k);
                    a(p, k) = c * apk - sp * aqk;
                    a(q, k) = sm * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cd vkp = v(k, p);
                    const cd vkq = v(k, q);
                    v(k, p) = c * vkp - sm * vkq;
                    v(k, q) = sp * vkp + c * vkq;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
    }
}

}  // namespace detail

/// Eigendecomposition of a Hermitian matrix, ascending eigenvalues. The
/// input is symmetrized before rotation; callers validate hermiticity.
inline EigenSystem eigh(const ComplexMatrix& h) {
    require(h.square(), ErrorCode::DimensionMismatch, "eigh needs a square matrix");
    const std::size_t n = h.rows();
    ComplexMatrix a = hermitian_part(h);
    ComplexMatrix v = ComplexMatrix::identity(n);
    detail::jacobi_diagonalize(a, v);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });
    EigenSystem out{RealVector(n), ComplexMatrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

inline RealVector eigvalsh(const ComplexMatrix& h) { return eigh(h).values; }

/// Largest |eigenvalue| of a Hermitian matrix.
inline double spectral_norm_hermitian(const ComplexMatrix& h) {
    const auto w = eigvalsh(h);
    return w.empty() ? 0.0 : std::max(std::abs(w.front()), std::abs(w.back()));
}

inline RealVector singular_values(const ComplexMatrix& m) {
    auto w = eigvalsh(m.adjoint() * m);
    for (auto& x : w) x = std::sqrt(std::max(0.0, x));
    std::sort(w.begin(), w.end(), std::greater<>());
    return w;
}

inline std::size_t numerical_rank_svd(const ComplexMatrix& m, double tol) {
    std::size_t r = 0;
    for (double s : singular_values(m))
        if (s > tol) ++r;
    return r;
}

/// Rank by Gaussian elimination with complete pivoting on the
/// column-normalized matrix. A pivot counts when its magnitude exceeds
/// `rel_tol` times the largest normalized entry.
inline std::size_t rank_row_reduce(ComplexMatrix m, double rel_tol = 1e-10) {
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    for (std::size_t j = 0; j < cols; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < rows; ++i) s += std::norm(m(i, j));
        s = std::sqrt(s);
        if (s == 0.0) continue;
        for (std::size_t i = 0; i < rows; ++i) m(i, j) /= s;
    }
    const double scale = m.max_abs();
    if (scale == 0.0) return 0;
    const double threshold = rel_tol * scale;

    std::vector<std::size_t> col_of(cols);
    std::iota(col_of.begin(), col_of.end(), 0);
    std::size_t rank = 0;
    for (; rank < std::min(rows, cols); ++rank) {
        double best = -1.0;
        std::size_t bi = rank, bj = rank;
        for (std::size_t i = rank; i < rows; ++i)
            for (std::size_t j = rank; j < cols; ++j) {
                const double x = std::abs(m(i, col_of[j]));
                if (x > best) {
                    best = x;
                    bi = i;
                    bj = j;
                }
            }
        if (best <= threshold) break;
        if (bi != rank)
            for (std::size_t j = 0; j < cols; ++j) std::swap(m(rank, j), m(bi, j));
        std::swap(col_of[rank], col_of[bj]);
        const cd pivot = m(rank, col_of[rank]);
        for (std::size_t i = rank + 1; i < rows; ++i) {
            const cd f = m(i, col_of[rank]) / pivot;
            if (f == cd(0.0)) continue;
            for (std::size_t j = rank; j < cols; ++j) m(i, col_of[j]) -= f * m(rank, col_of[j]);
        }
    }
    return rank;
}

/// Orthonormal basis (columns) of the null space of `m`: right singular
/// vectors with singular value below rel_tol times the largest, taken from
/// the eigenvectors of m^dagger m. Squaring limits rel_tol to about 1e-7.
inline ComplexMatrix null_space(const ComplexMatrix& m, double rel_tol = 1e-7) {
    const auto es = eigh(m.adjoint() * m);
    const std::size_t n = m.cols();
    const double top = es.values.empty() ? 0.0 : std::max(0.0, es.values.back());
    const double cut = std::max(rel_tol * rel_tol * top, 1e-300);
    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < n; ++k)
        if (es.values[k] <= cut) keep.push_back(k);
    ComplexMatrix out(n, keep.size());
    for (std::size_t c = 0; c < keep.size(); ++c)
        for (std::size_t i = 0; i < n; ++i) out(i, c) = es.vectors(i, keep[c]);
    return out;
}

/// Solve the square system a x = b by partial-pivot Gaussian elimination.
inline RealVector solve_linear(std::vector<RealVector> a, RealVector b) {
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
        require(std::abs(a[piv][k]) > 1e-300, ErrorCode::Precondition, "singular linear system");
        std::swap(a[k], a[piv]);
        std::swap(b[k], b[piv]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
            b[i] -= f * b[k];
        }
    }
    RealVector x(n);
    for (std::size_t k = n; k-- > 0;) {
        double s = b[k];
        for (std::size_t j = k + 1; j < n; ++j) s -= a[k][j] * x[j];
        x[k] = s / a[k][k];
    }
    return x;
}

// ---------------------------------------------------------------------------
// Gram-Schmidt

/// Modified Gram-Schmidt with one re-orthogonalization pass over real
/// vectors. Vectors whose residual norm falls below `drop_tol` (relative to
/// their input norm) are discarded. Appends to `basis`, which must already
/// be orthonormal.
inline void gram_schmidt_append(std::vector<RealVector>& basis, std::span<const RealVector> candidates,
                                double drop_tol = 1e-12) {
    for (const auto& c : candidates) {
        RealVector v = c;
        const double n0 = norm2(v);
        if (n0 == 0.0) continue;
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : basis) {
                const double proj = dot(b, v);
                for (std::size_t i = 0; i < v.size(); ++i) v[i] -= proj * b[i];
            }
        const double n1 = norm2(v);
        if (n1 <= drop_tol * n0 || n1 <= 1e-300) continue;
        for (auto& x : v) x /= n1;
        basis.push_back(std::move(v));
    }
}

/// Same as above under the complex inner product tr(X^dagger Y) on matrices.
inline void gram_schmidt_append(std::vector<ComplexMatrix>& basis, std::span<const ComplexMatrix> candidates,
                                double drop_tol = 1e-12) {
    for (const auto& c : candidates) {
        ComplexMatrix v = c;
        const double n0 = v.frobenius_norm();
        if (n0 == 0.0) continue;
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : basis) v.axpy(-hs_inner(b, v), b);
        const double n1 = v.frobenius_norm();
        if (n1 <= drop_tol * n0 || n1 <= 1e-300) continue;
        v *= cd(1.0 / n1);
        basis.push_back(std::move(v));
    }
}

}  // namespace udalab
