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

// Antidiagonal line-matrix families and the observable sets that are their
// traceless orthocomplements.
//
// A matrix H has zero diagonal; its k-th line is the set of entries H_{jj'}
// with j < j' and j + j' = k, for k = 1 .. 2d-3. A real k-th line matrix
// carries a real vector on that line mirrored symmetrically below the
// diagonal; an imaginary one carries i times the vector with the Hermitian
// mirror. Vectors for line k are the first L_k - q columns of an
// L_k x L_k totally nonsingular matrix, so every nonzero real combination
// has at least q + 1 nonzero entries. Every nonzero real combination of the
// whole family then has at least q + 1 positive and q + 1 negative
// eigenvalues.

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "udalab/core.hpp"
#include "udalab/subspace.hpp"

namespace udalab {

enum class ObservableOrigin { Explicit, UdaConstruction };

/// Ordered observables A_1..A_m on a d-dimensional space.
struct ObservableSet {
    std::size_t d = 0;
    std::vector<HermitianMatrix> observables;
    ObservableOrigin origin = ObservableOrigin::Explicit;

    ObservableSet() = default;
    ObservableSet(std::size_t dim, std::vector<HermitianMatrix> obs, ObservableOrigin o = ObservableOrigin::Explicit)
        : d(dim), observables(std::move(obs)), origin(o) {
        for (const auto& a : observables)
            require(a.dim() == d, ErrorCode::DimensionMismatch, "observable dimension mismatch");
    }

    std::size_t size() const noexcept { return observables.size(); }

    /// Real span of the traceless parts A_i - tr(A_i)/d I.
    OperatorSubspace traceless_span() const {
        std::vector<HermitianMatrix> parts;
        for (const auto& a : observables) {
            ComplexMatrix m = a.matrix();
            const double shift = a.trace() / static_cast<double>(d);
            for (std::size_t i = 0; i < d; ++i) m(i, i) -= shift;
            parts.push_back(HermitianMatrix::symmetrize(m));
        }
        return OperatorSubspace::span_of(d, parts, 1e-10);
    }

    /// Real span of the observables themselves.
    OperatorSubspace span() const { return OperatorSubspace::span_of(d, observables, 1e-10); }

    bool linearly_independent() const { return span().dim() == observables.size(); }
};

struct LineTag {
    std::size_t k = 0;       ///< antidiagonal index j + j'
    bool imaginary = false;  ///< real vs imaginary line matrix
    std::size_t column = 0;  ///< which column of the totally nonsingular matrix
};

struct LineMatrixFamily {
    std::size_t d = 0;
    std::size_t q = 1;
    std::vector<HermitianMatrix> matrices;
    std::vector<LineTag> lines;  ///< parallel to `matrices`

    std::size_t size() const noexcept { return matrices.size(); }
};

/// Number of entries on the k-th line above the diagonal.
inline std::size_t line_length(std::size_t d, std::size_t k) {
    require(d >= 2 && k >= 1 && k + 3 <= 2 * d, ErrorCode::OutOfRange, "line index must satisfy 1 <= k <= 2d-3");
    return k <= d - 1 ? (k + 1) / 2 : (2 * d - 1 - k) / 2;
}

/// n x n Vandermonde matrix on nodes 1..n, entry (i, j) = (i+1)^j. Totally
/// positive, hence every square submatrix is nonsingular.
inline std::vector<RealVector> totally_nonsingular_matrix(std::size_t n) {
    require(n >= 1, ErrorCode::InvalidDimension, "size must be positive");
    std::vector<RealVector> m(n, RealVector(n));
    for (std::size_t i = 0; i < n; ++i) {
        double p = 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            m[i][j] = p;
            p *= static_cast<double>(i + 1);
        }
    }
    return m;
}

/// Closed-form family size d^2 - (4q+1)d + (4q^2+2q), valid for d >= 2q+1.
inline long long complement_family_count(long long d, long long q) { return d * d - (4 * q + 1) * d + (4 * q * q + 2 * q); }

/// (4q+1)d - (4q^2+2q+1); 5d-7 at q = 1.
inline long long uda_observable_count(long long d, long long q) { return (4 * q + 1) * d - (4 * q * q + 2 * q + 1); }

/// Line-matrix family for rank parameter q. Lines 2q+1 .. 2d-2q-3 each
/// contribute L_k - q real and L_k - q imaginary matrices, in that order.
inline LineMatrixFamily complement_family(std::size_t d, std::size_t q) {
    require(q >= 1, ErrorCode::Precondition, "rank parameter q must be at least 1");
    require(d >= 2 * q + 1, ErrorCode::InvalidDimension, "complement family needs d >= 2q + 1");
    LineMatrixFamily fam{d, q, {}, {}};
    if (2 * d < 4 * q + 3) return fam;
    const std::size_t k_lo = 2 * q + 1;
    const std::size_t k_hi = 2 * d - 2 * q - 3;
    for (std::size_t k = k_lo; k <= k_hi; ++k) {
        const std::size_t len = line_length(d, k);
        if (len <= q) continue;
        const auto tn = totally_nonsingular_matrix(len);
        const std::size_t j_min = k >= d - 1 ? k - (d - 1) : 0;
        for (int part = 0; part < 2; ++part) {
            const bool imag = part == 1;
            for (std::size_t c = 0; c < len - q; ++c) {
                ComplexMatrix h(d, d);
                for (std::size_t t = 0; t < len; ++t) {
                    const std::size_t row = j_min + t;
                    const std::size_t col = k - row;
                    const cd value = imag ? kI * tn[t][c] : cd(tn[t][c]);
                    h(row, col) = value;
                    h(col, row) = std::conj(value);
                }
                fam.matrices.emplace_back(std::move(h));
                fam.lines.push_back({k, imag, c});
            }
        }
    }
    return fam;
}

struct SignatureSamplingReport {
    std::size_t samples = 0;
    std::size_t min_n_plus = 0;
    std::size_t min_n_minus = 0;
    /// Smallest observed (q+1)-th eigenvalue magnitude from either end,
    /// relative to the spectral norm of the combination.
    double worst_margin = INFINITY;
    std::size_t violations = 0;
    std::optional<RealVector> counterexample;

    bool passed() const noexcept { return violations == 0; }
};

inline HermitianMatrix real_combination(const LineMatrixFamily& fam, std::span<const double> coeffs) {
    ComplexMatrix h(fam.d, fam.d);
    for (std::size_t j = 0; j < fam.size(); ++j) h.axpy(coeffs[j], fam.matrices[j].matrix());
    return HermitianMatrix::symmetrize(h);
}

/// Samples unit real coefficient vectors and checks that each combination
/// has at least q+1 eigenvalues above tol*||H|| and q+1 below -tol*||H||.
inline SignatureSamplingReport family_signature_check(const LineMatrixFamily& fam, std::size_t samples,
                                                      std::uint64_t seed, double tol = kDefaultSignatureTol) {
    require(fam.size() > 0, ErrorCode::Precondition, "family is empty");
    Rng rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    SignatureSamplingReport rep;
    rep.samples = samples;
    rep.min_n_plus = fam.d;
    rep.min_n_minus = fam.d;
    const std::size_t need = fam.q + 1;
    for (std::size_t s = 0; s < samples; ++s) {
        RealVector r(fam.size());
        for (auto& x : r) x = g(rng);
        const double n = norm2(r);
        for (auto& x : r) x /= n;
        const auto w = eigvalsh(real_combination(fam, r).matrix());
        const double norm = std::max(std::abs(w.front()), std::abs(w.back()));
        std::size_t plus = 0, minus = 0;
        for (double v : w) {
            if (v > tol * norm) ++plus;
            if (v < -tol * norm) ++minus;
        }
        rep.min_n_plus = std::min(rep.min_n_plus, plus);
        rep.min_n_minus = std::min(rep.min_n_minus, minus);
        const double margin = std::min(w[fam.d - need], -w[need - 1]) / norm;
        rep.worst_margin = std::min(rep.worst_margin, margin);
        if (plus < need || minus < need) {
            ++rep.violations;
            if (!rep.counterexample) rep.counterexample = r;
        }
    }
    return rep;
}

struct ComplexSpanRank {
    ComplexMatrix combination;  ///< H_1 + i H_2
    std::size_t rank = 0;
};

/// For the d = 4, q = 1 family: H_1 + i H_2 and its rank (singular values
/// above 1e-9).
inline ComplexSpanRank complex_span_rank_demo(const LineMatrixFamily& fam) {
    require(fam.d == 4 && fam.q == 1 && fam.size() == 2, ErrorCode::Precondition,
            "complex span demo expects the two-matrix d = 4, q = 1 family");
    ComplexSpanRank out;
    out.combination = fam.matrices[0].matrix() + kI * fam.matrices[1].matrix();
    out.rank = numerical_rank_svd(out.combination, 1e-9);
    return out;
}

inline OperatorSubspace family_span(const LineMatrixFamily& fam) {
    return OperatorSubspace::span_of(fam.d, fam.matrices, 1e-12);
}

/// Orthonormal traceless observables spanning the complement of the
/// line-matrix family: (4q+1)d - (4q^2+2q+1) of them, 5d-7 at q = 1.
inline ObservableSet uda_observables(std::size_t d, std::size_t q = 1) {
    require(d > 2, ErrorCode::InvalidDimension, "UDA construction needs d > 2");
    const auto fam = complement_family(d, q);
    const auto span = family_span(fam);
    require(span.dim() == fam.size(), ErrorCode::Precondition, "family is linearly dependent");
    const auto comp = complement_in_traceless(d, span.real_basis());
    return ObservableSet(d, comp.basis(), ObservableOrigin::UdaConstruction);
}

enum class AntitriangularDefect { WrongSize, NotTraceless, OutsideSupport, Singular };

inline const char* to_string(AntitriangularDefect d) {
    switch (d) {
        case AntitriangularDefect::WrongSize: return "wrong-size";
        case AntitriangularDefect::NotTraceless: return "not-traceless";
        case AntitriangularDefect::OutsideSupport: return "outside-support";
        case AntitriangularDefect::Singular: return "singular";
    }
    return "unknown";
}

/// First violated precondition of the antitriangular claim, if any. The
/// support is the antidiagonal plus everything strictly above it
/// (i + j <= n - 1).
inline std::optional<AntitriangularDefect> antitriangular_defect(const HermitianMatrix& h, std::size_t q) {
    const std::size_t n = 2 * (q + 1);
    if (q < 1 || h.dim() != n) return AntitriangularDefect::WrongSize;
    const double scale = std::max(1.0, h.matrix().max_abs());
    if (std::abs(h.trace()) > 1e-10 * scale) return AntitriangularDefect::NotTraceless;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i + j > n - 1 && std::abs(h(i, j)) > 1e-12 * scale) return AntitriangularDefect::OutsideSupport;
    const auto w = eigvalsh(h.matrix());
    const double norm = std::max(std::abs(w.front()), std::abs(w.back()));
    if (norm == 0.0) return AntitriangularDefect::Singular;
    double det = 1.0;
    for (double v : w) det *= v / norm;
    if (std::abs(det) <= 1e-9) return AntitriangularDefect::Singular;
    return std::nullopt;
}

/// True iff a 2(q+1)-square invertible traceless antitriangular Hermitian
/// matrix has signature (q+1, q+1, 0). Throws on precondition violations.
inline bool antitriangular_signature_check(const HermitianMatrix& h, std::size_t q) {
    if (const auto defect = antitriangular_defect(h, q))
        throw Error(*defect == AntitriangularDefect::WrongSize ? ErrorCode::DimensionMismatch : ErrorCode::Precondition,
                    std::string("antitriangular check: ") + to_string(*defect));
    return signature(h) == Signature{q + 1, q + 1, 0};
}

}  // namespace udalab
