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

// Observables, states and Bloch geometry.
//
// Conventions: indices run from 0; the generalized Gell-Mann basis is
// scaled so that tr(l_i l_j) = d(d-1) delta_ij with l_0 = sqrt(d-1) I, and
// every density operator reads rho = (I + r.l)/d.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "udalab/error.hpp"
#include "udalab/linalg.hpp"

namespace udalab {

using Rng = std::mt19937_64;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kDefaultSignatureTol = 1e-9;

class HermitianMatrix {
public:
    HermitianMatrix() = default;

    /// Validates squareness and ||H - H^dagger||_max <= 1e-12 max(1, ||H||_max).
    explicit HermitianMatrix(ComplexMatrix m) : m_(std::move(m)) {
        require(m_.square() && m_.rows() > 0, ErrorCode::DimensionMismatch, "Hermitian matrix must be square");
        const double defect = hermiticity_defect(m_);
        require(defect <= kHermitianTol * std::max(1.0, m_.max_abs()), ErrorCode::NotHermitian,
                "matrix is not Hermitian (defect " + std::to_string(defect) + ")");
    }

    /// (M + M^dagger)/2, for results of floating-point arithmetic.
    static HermitianMatrix symmetrize(const ComplexMatrix& m) { return HermitianMatrix(hermitian_part(m)); }

    static HermitianMatrix zero(std::size_t d) { return HermitianMatrix(ComplexMatrix(d, d)); }
    static HermitianMatrix identity(std::size_t d) { return HermitianMatrix(ComplexMatrix::identity(d)); }
    static HermitianMatrix diagonal(std::span<const double> v) { return HermitianMatrix(ComplexMatrix::diagonal(v)); }

    std::size_t dim() const noexcept { return m_.rows(); }
    const ComplexMatrix& matrix() const noexcept { return m_; }
    cd operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

    double trace() const { return m_.trace().real(); }

    friend HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
        return HermitianMatrix::symmetrize(a.m_ + b.m_);
    }
    friend HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
        return HermitianMatrix::symmetrize(a.m_ - b.m_);
    }
    friend HermitianMatrix operator*(double s, const HermitianMatrix& a) { return HermitianMatrix::symmetrize(s * a.m_); }

private:
    ComplexMatrix m_;
};

/// tr(A B) on observables.
inline double hs(const HermitianMatrix& a, const HermitianMatrix& b) { return hs_real(a.matrix(), b.matrix()); }

class PureState {
public:
    PureState() = default;

    /// Validates | ||psi|| - 1 | <= 1e-12.
    explicit PureState(ComplexVector amplitudes) : amp_(std::move(amplitudes)) {
        require(!amp_.empty(), ErrorCode::InvalidDimension, "empty state vector");
        const double n = vnorm(amp_);
        require(std::abs(n - 1.0) <= 1e-12, ErrorCode::NotNormalized,
                "state vector norm " + std::to_string(n) + " differs from 1");
    }

    static PureState normalized(ComplexVector v) {
        const double n = vnorm(v);
        require(n > 0.0, ErrorCode::NotNormalized, "cannot normalize the zero vector");
        for (auto& z : v) z /= n;
        return PureState(std::move(v));
    }

    static PureState basis(std::size_t d, std::size_t k) {
        require(k < d, ErrorCode::OutOfRange, "basis index out of range");
        ComplexVector v(d);
        v[k] = 1.0;
        return PureState(std::move(v));
    }

    std::size_t dim() const noexcept { return amp_.size(); }
    std::span<const cd> amplitudes() const noexcept { return amp_; }
    cd operator[](std::size_t i) const { return amp_[i]; }

    ComplexMatrix projector() const { return ComplexMatrix::outer(amp_, amp_); }

    /// |<this|other>|^2
    double fidelity(const PureState& other) const { return std::norm(vdot(amp_, other.amp_)); }

private:
    ComplexVector amp_;
};

class DensityMatrix {
public:
    DensityMatrix() = default;

    /// Validates min eigenvalue >= -1e-10 and |tr - 1| <= 1e-12.
    explicit DensityMatrix(HermitianMatrix h) : h_(std::move(h)) {
        const double tr = h_.trace();
        require(std::abs(tr - 1.0) <= 1e-12, ErrorCode::NotNormalized,
                "density matrix trace " + std::to_string(tr) + " differs from 1");
        const double lo = eigvalsh(h_.matrix()).front();
        require(lo >= -1e-10, ErrorCode::NotPositive,
                "density matrix has eigenvalue " + std::to_string(lo));
    }

    static DensityMatrix from_pure(const PureState& psi) { return DensityMatrix(HermitianMatrix::symmetrize(psi.projector())); }

    /// Hermitian part, rescaled to unit trace.
    static DensityMatrix normalized(const ComplexMatrix& m) {
        ComplexMatrix h = hermitian_part(m);
        const double tr = h.trace().real();
        require(tr > 0.0, ErrorCode::NotNormalized, "non-positive trace");
        h *= cd(1.0 / tr);
        return DensityMatrix(HermitianMatrix(std::move(h)));
    }

    static DensityMatrix maximally_mixed(std::size_t d) {
        return DensityMatrix(HermitianMatrix(ComplexMatrix::identity(d) * (1.0 / static_cast<double>(d))));
    }

    std::size_t dim() const noexcept { return h_.dim(); }
    const HermitianMatrix& hermitian() const noexcept { return h_; }
    const ComplexMatrix& matrix() const noexcept { return h_.matrix(); }

private:
    HermitianMatrix h_;
};

struct HermitianBasis {
    std::size_t d = 0;
    std::vector<HermitianMatrix> elements;  ///< l_0 .. l_{d^2-1}
};

struct BlochVector {
    std::size_t d = 0;
    RealVector r;  ///< length d^2 - 1
};

// ---------------------------------------------------------------------------

/// Generalized Gell-Mann basis in the interleaved order of the standard
/// qutrit listing: for each column k = 1..d-1, the symmetric and
/// antisymmetric pairs (j,k) for j < k, followed by the k-th diagonal
/// element. d = 2 gives (X, Y, Z).
inline HermitianBasis gellmann_basis(std::size_t d) {
    require(d >= 2, ErrorCode::InvalidDimension, "Gell-Mann basis needs d >= 2");
    const double dd = static_cast<double>(d);
    const double scale = std::sqrt(dd * (dd - 1.0) / 2.0);
    HermitianBasis basis{d, {}};
    basis.elements.reserve(d * d);
    basis.elements.emplace_back(ComplexMatrix::identity(d) * std::sqrt(dd - 1.0));
    for (std::size_t k = 1; k < d; ++k) {
        for (std::size_t j = 0; j < k; ++j) {
            ComplexMatrix sym(d, d);
            sym(j, k) = scale;
            sym(k, j) = scale;
            basis.elements.emplace_back(std::move(sym));
            ComplexMatrix anti(d, d);
            anti(j, k) = -kI * scale;
            anti(k, j) = kI * scale;
            basis.elements.emplace_back(std::move(anti));
        }
        const double kk = static_cast<double>(k);
        const double norm = scale * std::sqrt(2.0 / (kk * (kk + 1.0)));
        ComplexMatrix diag(d, d);
        for (std::size_t j = 0; j < k; ++j) diag(j, j) = norm;
        diag(k, k) = -kk * norm;
        basis.elements.emplace_back(std::move(diag));
    }
    return basis;
}

/// M_1 .. M_{d^2-1} with tr(M_i M_j) = 2 delta_ij, same order as
/// gellmann_basis.
inline std::vector<HermitianMatrix> gellmann_matrices(std::size_t d) {
    const auto basis = gellmann_basis(d);
    const double dd = static_cast<double>(d);
    const double inv = 1.0 / std::sqrt(dd * (dd - 1.0) / 2.0);
    std::vector<HermitianMatrix> out;
    for (std::size_t i = 1; i < basis.elements.size(); ++i) out.push_back(inv * basis.elements[i]);
    return out;
}

inline BlochVector bloch_decompose(const DensityMatrix& rho, const HermitianBasis& basis) {
    require(rho.dim() == basis.d, ErrorCode::DimensionMismatch, "basis and state dimensions differ");
    const double dm1 = static_cast<double>(basis.d) - 1.0;
    BlochVector out{basis.d, RealVector(basis.elements.size() - 1)};
    for (std::size_t i = 1; i < basis.elements.size(); ++i)
        out.r[i - 1] = hs_real(rho.matrix(), basis.elements[i].matrix()) / dm1;
    return out;
}

/// (I + r.l)/d. Hermitian with unit trace; positivity is the caller's concern.
inline HermitianMatrix bloch_compose(const BlochVector& r, const HermitianBasis& basis) {
    require(r.d == basis.d && r.r.size() + 1 == basis.elements.size(), ErrorCode::DimensionMismatch,
            "Bloch vector length must be d^2 - 1");
    ComplexMatrix m = ComplexMatrix::identity(basis.d);
    for (std::size_t i = 0; i < r.r.size(); ++i) m.axpy(r.r[i], basis.elements[i + 1].matrix());
    m *= cd(1.0 / static_cast<double>(basis.d));
    return HermitianMatrix::symmetrize(m);
}

/// Coefficients a_j of a traceless observable, A = sum_j a_j l_j.
inline RealVector bloch_coefficients(const HermitianMatrix& a, const HermitianBasis& basis) {
    require(a.dim() == basis.d, ErrorCode::DimensionMismatch, "basis and observable dimensions differ");
    const double dd = static_cast<double>(basis.d);
    RealVector alpha(basis.elements.size() - 1);
    for (std::size_t i = 1; i < basis.elements.size(); ++i)
        alpha[i - 1] = hs(a, basis.elements[i]) / (dd * (dd - 1.0));
    return alpha;
}

/// tr(rho A)
inline double expectation(const HermitianMatrix& a, const DensityMatrix& rho) {
    require(a.dim() == rho.dim(), ErrorCode::DimensionMismatch, "observable and state dimensions differ");
    return hs_real(a.matrix(), rho.matrix());
}

/// <psi|A|psi>
inline double expectation(const HermitianMatrix& a, const PureState& psi) {
    require(a.dim() == psi.dim(), ErrorCode::DimensionMismatch, "observable and state dimensions differ");
    const auto av = a.matrix() * psi.amplitudes();
    return vdot(psi.amplitudes(), av).real();
}

inline EigenSystem eig_hermitian(const HermitianMatrix& h) { return eigh(h.matrix()); }

struct Signature {
    std::size_t n_plus = 0;
    std::size_t n_minus = 0;
    std::size_t n_zero = 0;
    friend bool operator==(const Signature&, const Signature&) = default;
};

/// Counts eigenvalues above tol*s, below -tol*s and in between, with
/// s = max(1, spectral norm).
inline Signature signature_of_values(std::span<const double> values, double tol) {
    double s = 1.0;
    for (double v : values) s = std::max(s, std::abs(v));
    Signature sig;
    for (double v : values) {
        if (v > tol * s) ++sig.n_plus;
        else if (v < -tol * s) ++sig.n_minus;
        else ++sig.n_zero;
    }
    return sig;
}

inline Signature signature(const HermitianMatrix& h, double tol = kDefaultSignatureTol) {
    require(tol > 0.0, ErrorCode::Precondition, "signature tolerance must be positive");
    const auto w = eigvalsh(h.matrix());
    return signature_of_values(w, tol);
}

// ---------------------------------------------------------------------------
// Partial trace

/// Reduced operator on the subsystems listed in `keep` (any order; output
/// factors follow ascending subsystem index).
inline ComplexMatrix partial_trace(const ComplexMatrix& rho, std::span<const std::size_t> dims,
                                   std::span<const std::size_t> keep) {
    require(!keep.empty(), ErrorCode::EmptySubset, "partial trace needs a non-empty keep set");
    std::size_t total = 1;
    for (auto d : dims) {
        require(d >= 1, ErrorCode::InvalidDimension, "subsystem dimension must be positive");
        total *= d;
    }
    require(rho.square() && rho.rows() == total, ErrorCode::DimensionMismatch,
            "product of subsystem dimensions must equal the operator dimension");
    std::vector<bool> kept(dims.size(), false);
    for (auto k : keep) {
        require(k < dims.size(), ErrorCode::OutOfRange, "keep index out of range");
        kept[k] = true;
    }

    const std::size_t n = dims.size();
    std::vector<std::size_t> stride(n, 1);
    for (std::size_t s = n - 1; s-- > 0;) stride[s] = stride[s + 1] * dims[s + 1];

    std::size_t out_dim = 1;
    for (std::size_t s = 0; s < n; ++s)
        if (kept[s]) out_dim *= dims[s];

    // kept index and traced index of every full index
    std::vector<std::size_t> kidx(total), tidx(total);
    for (std::size_t i = 0; i < total; ++i) {
        std::size_t k = 0, t = 0;
        for (std::size_t s = 0; s < n; ++s) {
            const std::size_t digit = (i / stride[s]) % dims[s];
            if (kept[s]) k = k * dims[s] + digit;
            else t = t * dims[s] + digit;
        }
        kidx[i] = k;
        tidx[i] = t;
    }
    ComplexMatrix out(out_dim, out_dim);
    for (std::size_t i = 0; i < total; ++i)
        for (std::size_t j = 0; j < total; ++j)
            if (tidx[i] == tidx[j]) out(kidx[i], kidx[j]) += rho(i, j);
    return out;
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> dims,
                                   std::span<const std::size_t> keep) {
    return DensityMatrix(HermitianMatrix::symmetrize(partial_trace(rho.matrix(), dims, keep)));
}

// ---------------------------------------------------------------------------
// Sampling

inline ComplexVector gaussian_vector(std::size_t n, Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexVector v(n);
    for (auto& z : v) {
        const double re = g(rng);
        const double im = g(rng);
        z = cd(re, im);
    }
    return v;
}

inline PureState random_pure(std::size_t d, Rng& rng) {
    require(d >= 1, ErrorCode::InvalidDimension, "dimension must be positive");
    return PureState::normalized(gaussian_vector(d, rng));
}

inline PureState random_pure(std::size_t d, std::uint64_t seed) {
    Rng rng(seed);
    return random_pure(d, rng);
}

/// G G^dagger / tr(G G^dagger) with G a d x rank Ginibre matrix.
inline DensityMatrix random_density(std::size_t d, std::size_t rank, Rng& rng) {
    require(d >= 1, ErrorCode::InvalidDimension, "dimension must be positive");
    require(rank >= 1 && rank <= d, ErrorCode::InvalidRank, "rank must lie in [1, d]");
    ComplexMatrix g(d, rank);
    const auto entries = gaussian_vector(d * rank, rng);
    std::copy(entries.begin(), entries.end(), g.data().begin());
    return DensityMatrix::normalized(g * g.adjoint());
}

inline DensityMatrix random_density(std::size_t d, std::size_t rank, std::uint64_t seed) {
    Rng rng(seed);
    return random_density(d, rank, rng);
}

/// GUE-like Hermitian matrix with unit-variance entries.
inline HermitianMatrix random_hermitian(std::size_t d, Rng& rng) {
    ComplexMatrix g(d, d);
    const auto entries = gaussian_vector(d * d, rng);
    std::copy(entries.begin(), entries.end(), g.data().begin());
    return HermitianMatrix::symmetrize(g);
}

inline HermitianMatrix random_traceless_hermitian(std::size_t d, Rng& rng) {
    ComplexMatrix h = random_hermitian(d, rng).matrix();
    const cd shift = h.trace() / static_cast<double>(d);
    for (std::size_t i = 0; i < d; ++i) h(i, i) -= shift;
    return HermitianMatrix::symmetrize(h);
}

/// Haar-distributed unitary (Gram-Schmidt of a Ginibre matrix).
inline ComplexMatrix random_unitary(std::size_t d, Rng& rng) {
    std::vector<ComplexMatrix> cols;
    while (cols.size() < d) {
        ComplexMatrix c(d, 1);
        const auto v = gaussian_vector(d, rng);
        std::copy(v.begin(), v.end(), c.data().begin());
        std::vector<ComplexMatrix> cand{c};
        gram_schmidt_append(cols, cand, 1e-8);
    }
    ComplexMatrix u(d, d);
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < d; ++i) u(i, j) = cols[j](i, 0);
    return u;
}

// ---------------------------------------------------------------------------

inline HermitianMatrix principal_submatrix(const HermitianMatrix& h, std::span<const std::size_t> rows) {
    ComplexMatrix s(rows.size(), rows.size());
    for (std::size_t a = 0; a < rows.size(); ++a)
        for (std::size_t b = 0; b < rows.size(); ++b) s(a, b) = h(rows[a], rows[b]);
    return HermitianMatrix(std::move(s));
}

/// Eigenvalue interlacing of a principal submatrix:
/// l_k(H) <= l_k(H_r) <= l_{k+d-r}(H) for 1 <= k <= r.
inline bool interlacing_check(const HermitianMatrix& h, std::span<const std::size_t> rows) {
    require(!rows.empty(), ErrorCode::EmptySubset, "interlacing needs a non-empty row subset");
    std::vector<std::size_t> sorted(rows.begin(), rows.end());
    std::sort(sorted.begin(), sorted.end());
    require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), ErrorCode::Precondition,
            "row subset has repeated indices");
    require(sorted.back() < h.dim(), ErrorCode::OutOfRange, "row index out of range");

    const auto full = eigvalsh(h.matrix());
    const auto sub = eigvalsh(principal_submatrix(h, sorted).matrix());
    const std::size_t d = h.dim();
    const std::size_t r = sorted.size();
    double scale = 1.0;
    for (double v : full) scale = std::max(scale, std::abs(v));
    const double slack = 1e-9 * scale;
    for (std::size_t k = 0; k < r; ++k) {
        if (full[k] > sub[k] + slack) return false;
        if (sub[k] > full[k + d - r] + slack) return false;
    }
    return true;
}

inline std::vector<HermitianMatrix> pauli_matrices() {
    ComplexMatrix x(2, 2), y(2, 2), z(2, 2);
    x(0, 1) = 1.0;
    x(1, 0) = 1.0;
    y(0, 1) = -kI;
    y(1, 0) = kI;
    z(0, 0) = 1.0;
    z(1, 1) = -1.0;
    return {HermitianMatrix(x), HermitianMatrix(y), HermitianMatrix(z)};
}

}  // namespace udalab
