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

// Symmetries of state space and their averaging projections.
//
// A symmetry acts as X -> U X U^dagger, optionally preceded by the
// computational-basis transpose. When a finite group G preserves the span of
// the observables and its fixed points are exactly that span, averaging
// over G is the orthogonal projection onto the span, and pure states that
// are determined among pure states are determined among all states. The
// concrete route is through *-algebras: if the observables and I span a
// *-algebra, unitaries from its commutant provide the symmetries.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "udalab/certify.hpp"
#include "udalab/core.hpp"
#include "udalab/observables.hpp"
#include "udalab/subspace.hpp"

namespace udalab {

class SymmetryElement {
public:
    SymmetryElement() = default;

    SymmetryElement(ComplexMatrix u, bool transpose) : u_(std::move(u)), transpose_(transpose) {
        require(u_.square(), ErrorCode::DimensionMismatch, "symmetry unitary must be square");
        const double defect = (u_.adjoint() * u_ - ComplexMatrix::identity(u_.rows())).max_abs();
        require(defect < 1e-10, ErrorCode::Precondition, "symmetry matrix is not unitary (defect " + std::to_string(defect) + ")");
    }

    static SymmetryElement identity(std::size_t d) { return {ComplexMatrix::identity(d), false}; }
    static SymmetryElement transpose_map(std::size_t d) { return {ComplexMatrix::identity(d), true}; }

    std::size_t dim() const noexcept { return u_.rows(); }
    const ComplexMatrix& unitary() const noexcept { return u_; }
    bool transpose_flag() const noexcept { return transpose_; }

    /// U (X^T if flagged) U^dagger
    ComplexMatrix apply(const ComplexMatrix& x) const {
        require(x.rows() == dim() && x.cols() == dim(), ErrorCode::DimensionMismatch, "symmetry and operand dimensions differ");
        return u_ * (transpose_ ? x.transpose() : x) * u_.adjoint();
    }

    /// (*this) o other
    SymmetryElement compose(const SymmetryElement& other) const {
        require(other.dim() == dim(), ErrorCode::DimensionMismatch, "symmetry dimensions differ");
        SymmetryElement out;
        out.u_ = u_ * (transpose_ ? other.u_.conjugate() : other.u_);
        out.transpose_ = transpose_ != other.transpose_;
        return out;
    }

    SymmetryElement inverse() const {
        SymmetryElement out;
        out.u_ = transpose_ ? u_.transpose() : u_.adjoint();
        out.transpose_ = transpose_;
        return out;
    }

    /// Equal as maps: same flag and unitaries equal up to a global phase.
    bool same_action(const SymmetryElement& o, double tol = 1e-8) const {
        if (o.dim() != dim() || o.transpose_ != transpose_) return false;
        const cd overlap = hs_inner(o.u_, u_) / static_cast<double>(dim());
        if (std::abs(std::abs(overlap) - 1.0) > tol) return false;
        const cd phase = overlap / std::abs(overlap);
        return (u_ - o.u_ * phase).max_abs() <= tol;
    }

private:
    ComplexMatrix u_;
    bool transpose_ = false;
};

inline DensityMatrix apply_symmetry(const SymmetryElement& g, const DensityMatrix& rho) {
    require(g.dim() == rho.dim(), ErrorCode::DimensionMismatch, "symmetry and state dimensions differ");
    return DensityMatrix(HermitianMatrix::symmetrize(g.apply(rho.matrix())));
}

class SymmetryGroup {
public:
    SymmetryGroup() = default;

    /// Validates identity, closure under composition and inverses.
    explicit SymmetryGroup(std::vector<SymmetryElement> elements) : elements_(std::move(elements)) {
        require(!elements_.empty(), ErrorCode::NonClosedGroup, "group needs at least one element");
        const std::size_t d = elements_.front().dim();
        for (const auto& g : elements_) require(g.dim() == d, ErrorCode::DimensionMismatch, "group elements differ in dimension");
        require(index_of(SymmetryElement::identity(d)).has_value(), ErrorCode::NonClosedGroup, "identity missing");
        for (const auto& g : elements_) {
            require(index_of(g.inverse()).has_value(), ErrorCode::NonClosedGroup, "element list is not closed under inverses");
            for (const auto& h : elements_)
                require(index_of(g.compose(h)).has_value(), ErrorCode::NonClosedGroup, "element list is not closed under composition");
        }
    }

    /// Closure of the generators (with the identity), up to max_order elements.
    static SymmetryGroup generate(std::size_t d, const std::vector<SymmetryElement>& generators, std::size_t max_order = 4096) {
        std::vector<SymmetryElement> elems{SymmetryElement::identity(d)};
        for (std::size_t i = 0; i < elems.size(); ++i)
            for (const auto& g : generators) {
                auto h = g.compose(elems[i]);
                const bool known = std::any_of(elems.begin(), elems.end(), [&](const auto& e) { return e.same_action(h); });
                if (known) continue;
                require(elems.size() < max_order, ErrorCode::NonClosedGroup, "generated group exceeds the order limit");
                elems.push_back(std::move(h));
            }
        return SymmetryGroup(std::move(elems));
    }

    std::size_t dim() const { return elements_.front().dim(); }
    std::size_t order() const noexcept { return elements_.size(); }
    const std::vector<SymmetryElement>& elements() const noexcept { return elements_; }

    std::optional<std::size_t> index_of(const SymmetryElement& g) const {
        for (std::size_t i = 0; i < elements_.size(); ++i)
            if (elements_[i].same_action(g)) return i;
        return std::nullopt;
    }

private:
    std::vector<SymmetryElement> elements_;
};

// ---------------------------------------------------------------------------

/// Orthonormal Hermitian basis {I/sqrt(d), l_i/sqrt(d(d-1))} in Gell-Mann order.
inline std::vector<HermitianMatrix> orthonormal_hermitian_basis(std::size_t d) {
    const auto gm = gellmann_basis(d);
    const double dd = static_cast<double>(d);
    std::vector<HermitianMatrix> out;
    out.push_back((1.0 / std::sqrt(dd)) * HermitianMatrix::identity(d));
    for (std::size_t i = 1; i < gm.elements.size(); ++i) out.push_back((1.0 / std::sqrt(dd * (dd - 1.0))) * gm.elements[i]);
    return out;
}

/// Real-linear map on Hermitian matrices, as its d^2 x d^2 action matrix
/// M_kl = tr(B_k F(B_l)) in orthonormal_hermitian_basis.
struct Superoperator {
    std::size_t d = 0;
    std::vector<RealVector> m;

    template <class F>
    static Superoperator from_map(std::size_t d, F&& f) {
        const auto basis = orthonormal_hermitian_basis(d);
        const std::size_t n = basis.size();
        Superoperator s{d, std::vector<RealVector>(n, RealVector(n))};
        for (std::size_t l = 0; l < n; ++l) {
            const ComplexMatrix image = f(basis[l].matrix());
            for (std::size_t k = 0; k < n; ++k) s.m[k][l] = hs_inner(basis[k].matrix(), image).real();
        }
        return s;
    }

    static Superoperator of(const SymmetryElement& g) {
        return from_map(g.dim(), [&](const ComplexMatrix& x) { return g.apply(x); });
    }

    std::size_t size() const noexcept { return m.size(); }

    Superoperator operator*(const Superoperator& o) const {
        const std::size_t n = size();
        Superoperator r{d, std::vector<RealVector>(n, RealVector(n))};
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t j = 0; j < n; ++j) r.m[i][j] += m[i][k] * o.m[k][j];
        return r;
    }

    double distance(const Superoperator& o) const {
        double worst = 0.0;
        for (std::size_t i = 0; i < size(); ++i)
            for (std::size_t j = 0; j < size(); ++j) worst = std::max(worst, std::abs(m[i][j] - o.m[i][j]));
        return worst;
    }

    /// max |M - M^T|: zero iff self-adjoint under the HS inner product
    double asymmetry() const {
        double worst = 0.0;
        for (std::size_t i = 0; i < size(); ++i)
            for (std::size_t j = 0; j < size(); ++j) worst = std::max(worst, std::abs(m[i][j] - m[j][i]));
        return worst;
    }

    ComplexMatrix apply(const ComplexMatrix& x) const {
        const auto basis = orthonormal_hermitian_basis(d);
        RealVector c(size());
        for (std::size_t l = 0; l < size(); ++l) c[l] = hs_inner(basis[l].matrix(), x).real();
        ComplexMatrix out(d, d);
        for (std::size_t k = 0; k < size(); ++k) {
            double v = 0.0;
            for (std::size_t l = 0; l < size(); ++l) v += m[k][l] * c[l];
            out.axpy(v, basis[k].matrix());
        }
        return out;
    }
};

/// (1/|G|) sum_g g
inline Superoperator average_projection(const SymmetryGroup& g) {
    const std::size_t d = g.dim();
    const std::size_t n = d * d;
    Superoperator p{d, std::vector<RealVector>(n, RealVector(n))};
    const double w = 1.0 / static_cast<double>(g.order());
    for (const auto& e : g.elements()) {
        const auto s = Superoperator::of(e);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) p.m[i][j] += w * s.m[i][j];
    }
    return p;
}

struct ProjectionDefects {
    double idempotence = 0.0;   ///< |P^2 - P|
    double self_adjoint = 0.0;  ///< |P - P^T|
    double invariance = 0.0;    ///< max_g max(|Pg - P|, |gP - P|)
    bool ok(double tol = 1e-10) const { return idempotence < tol && self_adjoint < tol && invariance < tol; }
};

inline ProjectionDefects projection_defects(const SymmetryGroup& g, const Superoperator& p) {
    ProjectionDefects out;
    out.idempotence = (p * p).distance(p);
    out.self_adjoint = p.asymmetry();
    for (const auto& e : g.elements()) {
        const auto s = Superoperator::of(e);
        out.invariance = std::max({out.invariance, (p * s).distance(p), (s * p).distance(p)});
    }
    return out;
}

/// +1 eigenspace of the averaging projection.
inline OperatorSubspace fixed_point_space(const SymmetryGroup& g) {
    const auto p = average_projection(g);
    const std::size_t n = p.size();
    ComplexMatrix sym(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) sym(i, j) = 0.5 * (p.m[i][j] + p.m[j][i]);
    const auto es = eigh(sym);
    const auto basis = orthonormal_hermitian_basis(g.dim());
    std::vector<HermitianMatrix> fixed;
    for (std::size_t k = 0; k < n; ++k) {
        if (std::abs(es.values[k] - 1.0) > 1e-8) continue;
        ComplexMatrix x(g.dim(), g.dim());
        for (std::size_t l = 0; l < n; ++l) x.axpy(es.vectors(l, k).real(), basis[l].matrix());
        fixed.push_back(HermitianMatrix::symmetrize(x));
    }
    return OperatorSubspace::span_of(g.dim(), fixed, 1e-10);
}

/// Span of the columns of P, as operators.
inline OperatorSubspace projection_image(const Superoperator& p) {
    const auto basis = orthonormal_hermitian_basis(p.d);
    std::vector<HermitianMatrix> cols;
    for (const auto& b : basis) {
        auto c = p.apply(b.matrix());
        if (c.frobenius_norm() > 1e-9) cols.push_back(HermitianMatrix::symmetrize(c));
    }
    return OperatorSubspace::span_of(p.d, cols, 1e-9);
}

// ---------------------------------------------------------------------------
// Non-negative least squares (Lawson-Hanson active set)

struct NnlsResult {
    RealVector x;
    double residual = 0.0;  ///< ||A x - b||_2
};

/// min ||A x - b|| subject to x >= 0; `a` is given column by column.
inline NnlsResult nnls(const std::vector<RealVector>& columns, const RealVector& b, std::size_t max_iter = 500) {
    const std::size_t n = columns.size();
    const std::size_t m = b.size();
    for (const auto& c : columns) require(c.size() == m, ErrorCode::DimensionMismatch, "NNLS column length mismatch");
    RealVector x(n, 0.0);
    std::vector<bool> passive(n, false);
    auto residual_vec = [&](const RealVector& xx) {
        RealVector r = b;
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < m; ++i) r[i] -= columns[j][i] * xx[j];
        return r;
    };
    // Unconstrained least squares on the passive set via normal equations.
    auto solve_passive = [&]() {
        std::vector<std::size_t> idx;
        for (std::size_t j = 0; j < n; ++j)
            if (passive[j]) idx.push_back(j);
        std::vector<RealVector> g(idx.size(), RealVector(idx.size()));
        RealVector rhs(idx.size());
        for (std::size_t a = 0; a < idx.size(); ++a) {
            rhs[a] = dot(columns[idx[a]], b);
            for (std::size_t c = 0; c < idx.size(); ++c) g[a][c] = dot(columns[idx[a]], columns[idx[c]]);
            g[a][a] += 1e-14;
        }
        RealVector z(n, 0.0);
        if (idx.empty()) return z;
        const auto sol = solve_linear(g, rhs);
        for (std::size_t a = 0; a < idx.size(); ++a) z[idx[a]] = sol[a];
        return z;
    };

    for (std::size_t it = 0; it < max_iter; ++it) {
        const auto r = residual_vec(x);
        std::size_t best = n;
        double best_w = 1e-12;
        for (std::size_t j = 0; j < n; ++j) {
            if (passive[j]) continue;
            const double w = dot(columns[j], r);
            if (w > best_w) {
                best_w = w;
                best = j;
            }
        }
        if (best == n) break;
        passive[best] = true;
        for (std::size_t inner = 0; inner < max_iter; ++inner) {
            auto z = solve_passive();
            bool feasible = true;
            for (std::size_t j = 0; j < n; ++j)
                if (passive[j] && z[j] <= 0.0) feasible = false;
            if (feasible) {
                x = std::move(z);
                break;
            }
            double alpha = 1.0;
            for (std::size_t j = 0; j < n; ++j)
                if (passive[j] && z[j] <= 0.0) alpha = std::min(alpha, x[j] / (x[j] - z[j]));
            for (std::size_t j = 0; j < n; ++j) {
                x[j] += alpha * (z[j] - x[j]);
                if (passive[j] && std::abs(x[j]) < 1e-14) {
                    passive[j] = false;
                    x[j] = 0.0;
                }
            }
        }
    }
    return {x, norm2(residual_vec(x))};
}

struct ConvexHullCheck {
    RealVector weights;
    double residual = 0.0;  ///< ||sum_g w_g g - P|| including the sum-to-one row
};

/// Writes P as a convex combination of the group actions.
inline ConvexHullCheck convex_hull_check(const SymmetryGroup& g, const Superoperator& p) {
    std::vector<RealVector> cols;
    for (const auto& e : g.elements()) {
        const auto s = Superoperator::of(e);
        RealVector c;
        for (const auto& row : s.m) c.insert(c.end(), row.begin(), row.end());
        c.push_back(1.0);
        cols.push_back(std::move(c));
    }
    RealVector b;
    for (const auto& row : p.m) b.insert(b.end(), row.begin(), row.end());
    b.push_back(1.0);
    const auto r = nnls(cols, b);
    return {r.x, r.residual};
}

// ---------------------------------------------------------------------------
// Complex operator spans, commutants and generated algebras

/// Complex subspace of M_d, orthonormal under tr(X^dagger Y).
class ComplexOperatorSpace {
public:
    ComplexOperatorSpace() = default;
    explicit ComplexOperatorSpace(std::size_t d) : d_(d) {}

    static ComplexOperatorSpace span_of(std::size_t d, std::span<const ComplexMatrix> mats, double drop_tol = 1e-10) {
        ComplexOperatorSpace s(d);
        s.add(mats, drop_tol);
        return s;
    }

    /// Appends the parts of `mats` outside the span; returns how many were added.
    std::size_t add(std::span<const ComplexMatrix> mats, double drop_tol = 1e-10) {
        const std::size_t before = basis_.size();
        gram_schmidt_append(basis_, mats, drop_tol);
        return basis_.size() - before;
    }

    std::size_t d() const noexcept { return d_; }
    std::size_t dim() const noexcept { return basis_.size(); }
    const std::vector<ComplexMatrix>& basis() const noexcept { return basis_; }

    ComplexMatrix project(const ComplexMatrix& x) const {
        ComplexMatrix out(d_, d_);
        for (const auto& b : basis_) out.axpy(hs_inner(b, x), b);
        return out;
    }
    double residual(const ComplexMatrix& x) const { return (x - project(x)).frobenius_norm(); }
    bool contains(const ComplexMatrix& x, double tol = 1e-8) const {
        return residual(x) <= tol * std::max(1.0, x.frobenius_norm());
    }

    /// Largest mutual projection residual of basis elements; zero iff equal.
    double distance(const ComplexOperatorSpace& o) const {
        if (o.dim() != dim()) return INFINITY;
        double worst = 0.0;
        for (const auto& b : basis_) worst = std::max(worst, o.residual(b));
        for (const auto& b : o.basis_) worst = std::max(worst, residual(b));
        return worst;
    }

private:
    std::size_t d_ = 0;
    std::vector<ComplexMatrix> basis_;
};

inline std::vector<ComplexMatrix> with_identity(const ObservableSet& a) {
    std::vector<ComplexMatrix> mats{ComplexMatrix::identity(a.d)};
    for (const auto& o : a.observables) mats.push_back(o.matrix());
    return mats;
}

/// {X : [X, M] = 0 for every M}, from the null space of the stacked
/// commutator map on row-major vec(X).
inline ComplexOperatorSpace commutant(std::size_t d, std::span<const ComplexMatrix> mats) {
    const std::size_t n = d * d;
    ComplexMatrix stacked(std::max<std::size_t>(1, mats.size()) * n, n);
    for (std::size_t t = 0; t < mats.size(); ++t) {
        const auto& m = mats[t];
        require(m.rows() == d && m.cols() == d, ErrorCode::DimensionMismatch, "commutant input dimension mismatch");
        // (M X - X M)_{ij} = sum_k M_ik X_kj - X_ik M_kj
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                const std::size_t r = t * n + i * d + j;
                for (std::size_t k = 0; k < d; ++k) {
                    stacked(r, k * d + j) += m(i, k);
                    stacked(r, i * d + k) -= m(k, j);
                }
            }
    }
    const auto ns = null_space(stacked, 1e-7);
    std::vector<ComplexMatrix> mats_out;
    for (std::size_t c = 0; c < ns.cols(); ++c) {
        ComplexMatrix x(d, d);
        for (std::size_t k = 0; k < n; ++k) x.data()[k] = ns(k, c);
        mats_out.push_back(std::move(x));
    }
    return ComplexOperatorSpace::span_of(d, mats_out, 1e-9);
}

inline ComplexOperatorSpace commutant(const ObservableSet& a) {
    const auto mats = with_identity(a);
    return commutant(a.d, mats);
}

/// Smallest subspace containing I and the inputs that is closed under
/// products and adjoints.
inline ComplexOperatorSpace generated_algebra(std::size_t d, std::span<const ComplexMatrix> mats) {
    std::vector<ComplexMatrix> seed{ComplexMatrix::identity(d)};
    for (const auto& m : mats) {
        seed.push_back(m);
        seed.push_back(m.adjoint());
    }
    auto s = ComplexOperatorSpace::span_of(d, seed, 1e-10);
    for (std::size_t round = 0; round < 4 * d * d; ++round) {
        std::vector<ComplexMatrix> products;
        const auto b = s.basis();
        for (const auto& x : b)
            for (const auto& y : b) products.push_back(x * y);
        if (s.add(products, 1e-10) == 0) break;
    }
    return s;
}

inline ComplexOperatorSpace generated_algebra(const ObservableSet& a) {
    std::vector<ComplexMatrix> mats;
    for (const auto& o : a.observables) mats.push_back(o.matrix());
    return generated_algebra(a.d, mats);
}

/// True iff span_C{I, A_i} is closed under products (adjoints are
/// automatic for Hermitian generators).
inline bool is_star_algebra(const ObservableSet& a, double tol = 1e-8) {
    const auto mats = with_identity(a);
    const auto s = ComplexOperatorSpace::span_of(a.d, mats, 1e-10);
    for (const auto& x : s.basis()) {
        if (s.residual(x.adjoint()) >= tol) return false;
        for (const auto& y : s.basis())
            if (s.residual(x * y) >= tol) return false;
    }
    return true;
}

/// max residual between commutant(commutant(A)) and the generated algebra.
inline double bicommutant_defect(const ObservableSet& a) {
    const auto c = commutant(a);
    const auto cc = commutant(a.d, c.basis());
    return cc.distance(generated_algebra(a));
}

// ---------------------------------------------------------------------------

inline ComplexMatrix unitary_exp(const HermitianMatrix& h, double t = 1.0) {
    const auto es = eigh(h.matrix());
    const std::size_t d = h.dim();
    ComplexMatrix out(d, d);
    for (std::size_t k = 0; k < d; ++k) {
        const cd ph = std::polar(1.0, t * es.values[k]);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) out(i, j) += es.vectors(i, k) * ph * std::conj(es.vectors(j, k));
    }
    return out;
}

/// exp(i H) for random Hermitian H in the commutant; these fix every
/// element of the algebra under conjugation.
inline std::vector<SymmetryElement> commutant_unitaries(const ObservableSet& a, std::size_t count, std::uint64_t seed = 0) {
    const auto c = commutant(a);
    Rng rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<SymmetryElement> out;
    for (std::size_t s = 0; s < count; ++s) {
        ComplexMatrix x(a.d, a.d);
        for (const auto& b : c.basis()) x.axpy(cd(g(rng), g(rng)), b);
        out.emplace_back(unitary_exp(HermitianMatrix::symmetrize(x)), false);
    }
    return out;
}

/// Pure states whose projectors lie in the real span of {I, A_i}: top
/// eigenvectors of random elements of the span when that eigenvalue is
/// simple. Meaningful when the span is a *-algebra, where spectral
/// projections stay inside it.
inline std::vector<PureState> fixed_set_pure_states(const ObservableSet& a, std::size_t count, std::uint64_t seed = 0) {
    std::vector<HermitianMatrix> spanning{HermitianMatrix::identity(a.d)};
    spanning.insert(spanning.end(), a.observables.begin(), a.observables.end());
    const auto s = OperatorSubspace::span_of(a.d, spanning, 1e-10);
    Rng rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<PureState> out;
    for (std::size_t tries = 0; out.size() < count && tries < 100 * count; ++tries) {
        ComplexMatrix h(a.d, a.d);
        for (const auto& b : s.basis()) h.axpy(g(rng), b.matrix());
        const auto es = eigh(h);
        if (a.d > 1 && es.values[a.d - 1] - es.values[a.d - 2] < 1e-6) continue;
        auto v = es.vectors.column(a.d - 1);
        const cd phase = std::polar(1.0, 2.0 * std::numbers::pi * std::uniform_real_distribution<double>(0.0, 1.0)(rng));
        for (auto& z : v) z *= phase;
        const auto psi = PureState::normalized(std::move(v));
        if (s.residual(psi.projector()) > 1e-8) continue;
        out.push_back(psi);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Qubits: reflection through the span of the observables

struct BlochFrame {
    std::array<std::array<double, 3>, 3> projector{};  ///< onto the traceless span, Bloch coordinates
    std::size_t dim = 0;
};

inline std::array<double, 3> bloch3(const ComplexMatrix& m) {
    const auto p = pauli_matrices();
    return {hs_inner(p[0].matrix(), m).real(), hs_inner(p[1].matrix(), m).real(), hs_inner(p[2].matrix(), m).real()};
}

inline BlochFrame bloch_frame(const ObservableSet& a) {
    require(a.d == 2, ErrorCode::InvalidDimension, "qubit path needs d = 2");
    std::vector<RealVector> cand;
    for (const auto& o : a.observables) {
        const auto r = bloch3(o.matrix());
        cand.push_back({r[0], r[1], r[2]});
    }
    std::vector<RealVector> basis;
    gram_schmidt_append(basis, cand, 1e-10);
    BlochFrame f;
    f.dim = basis.size();
    for (const auto& v : basis)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) f.projector[i][j] += v[i] * v[j];
    return f;
}

/// SU(2) element acting on Bloch vectors by the rotation r (det +1).
inline ComplexMatrix su2_from_rotation(const std::array<std::array<double, 3>, 3>& r) {
    // Shepperd's method for the unit quaternion (w, x, y, z).
    const double tr = r[0][0] + r[1][1] + r[2][2];
    double w, x, y, z;
    if (tr >= r[0][0] && tr >= r[1][1] && tr >= r[2][2]) {
        w = 0.5 * std::sqrt(std::max(0.0, 1.0 + tr));
        x = (r[2][1] - r[1][2]) / (4 * w);
        y = (r[0][2] - r[2][0]) / (4 * w);
        z = (r[1][0] - r[0][1]) / (4 * w);
    } else if (r[0][0] >= r[1][1] && r[0][0] >= r[2][2]) {
        x = 0.5 * std::sqrt(std::max(0.0, 1.0 + 2 * r[0][0] - tr));
        w = (r[2][1] - r[1][2]) / (4 * x);
        y = (r[0][1] + r[1][0]) / (4 * x);
        z = (r[0][2] + r[2][0]) / (4 * x);
    } else if (r[1][1] >= r[2][2]) {
        y = 0.5 * std::sqrt(std::max(0.0, 1.0 + 2 * r[1][1] - tr));
        w = (r[0][2] - r[2][0]) / (4 * y);
        x = (r[0][1] + r[1][0]) / (4 * y);
        z = (r[1][2] + r[2][1]) / (4 * y);
    } else {
        z = 0.5 * std::sqrt(std::max(0.0, 1.0 + 2 * r[2][2] - tr));
        w = (r[1][0] - r[0][1]) / (4 * z);
        x = (r[0][2] + r[2][0]) / (4 * z);
        y = (r[1][2] + r[2][1]) / (4 * z);
    }
    // U = w I - i (x X + y Y + z Z)
    ComplexMatrix u(2, 2);
    u(0, 0) = cd(w, -z);
    u(0, 1) = cd(-y, -x);
    u(1, 0) = cd(y, -x);
    u(1, 1) = cd(w, z);
    return u;
}

/// Reflection of the Bloch ball through the span of the observables,
/// 2 Pi - I, as a symmetry: a unitary when it preserves orientation, else a
/// unitary composed with the transpose (which maps y to -y).
inline SymmetryElement qubit_reflection(const ObservableSet& a) {
    const auto f = bloch_frame(a);
    std::array<std::array<double, 3>, 3> r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r[i][j] = 2 * f.projector[i][j] - (i == j ? 1.0 : 0.0);
    const double det = r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1]) - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0]) +
                       r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0]);
    if (det > 0) return {su2_from_rotation(r), false};
    // r = r' T with T = diag(1, -1, 1): r' = r T
    for (auto& row : r) row[1] = -row[1];
    return {su2_from_rotation(r), true};
}

struct QubitStateCheck {
    PureState state;
    bool on_fixed_set = false;
    Verdict verdict = Verdict::Inconclusive;  ///< uda_certify on the fixed set, udp_certify off it
    std::optional<PureState> partner;         ///< reflected state (off the fixed set)
    double partner_residual = 0.0;
    double partner_distance = 0.0;
};

struct QubitClassification {
    std::size_t span_dim = 0;  ///< 0: centre, 1: diameter, 2: disc, 3: ball
    std::string fixed_set;
    SymmetryElement reflection;
    std::vector<QubitStateCheck> checks;
};

inline const char* fixed_set_name(std::size_t dim) {
    switch (dim) {
        case 0: return "centre";
        case 1: return "diameter";
        case 2: return "disc";
        default: return "ball";
    }
}

/// Classifies the fixed set of the reflection through span(A) and checks the
/// given states: on the fixed set nothing is falsified; off it, the
/// reflected state is a second pure preimage.
inline QubitClassification qubit_classification(const ObservableSet& a, std::span<const PureState> states,
                                                const FeasibilityConfig& cfg = {}) {
    require(a.d == 2, ErrorCode::InvalidDimension, "qubit classification needs d = 2");
    QubitClassification out;
    const auto f = bloch_frame(a);
    out.span_dim = f.dim;
    out.fixed_set = fixed_set_name(f.dim);
    out.reflection = qubit_reflection(a);
    for (const auto& psi : states) {
        require(psi.dim() == 2, ErrorCode::DimensionMismatch, "qubit states expected");
        QubitStateCheck c;
        c.state = psi;
        const auto rho = DensityMatrix::from_pure(psi);
        const auto image = out.reflection.apply(rho.matrix());
        c.on_fixed_set = (image - rho.matrix()).frobenius_norm() < 1e-8;
        if (c.on_fixed_set) {
            c.verdict = uda_certify(psi, a, cfg).verdict;
        } else {
            const auto es = eigh(hermitian_part(image));
            auto partner = PureState::normalized(es.vectors.column(1));
            c.partner_residual = max_abs_difference(measure(a, partner), measure(a, psi));
            c.partner_distance = (partner.projector() - rho.matrix()).frobenius_norm();
            c.partner = std::move(partner);
            c.verdict = udp_certify(psi, a, cfg).verdict;
        }
        out.checks.push_back(std::move(c));
    }
    return out;
}

// ---------------------------------------------------------------------------

struct SymmetryVerdict {
    bool certified = false;
    std::string route;  ///< "star-algebra", "qubit" or "none"
    std::string message;
    bool star_algebra = false;
    std::size_t generated_dim = 0;
    std::size_t commutant_dim = 0;
    std::vector<SymmetryElement> evidence;  ///< commutant unitaries, or the qubit reflection
};

/// UDP implies UDA for every pure state when span_C{I, A_i} is a
/// *-algebra, or when d = 2.
inline SymmetryVerdict udp_implies_uda_via_symmetry(const ObservableSet& a, std::uint64_t seed = 0) {
    SymmetryVerdict v;
    v.star_algebra = is_star_algebra(a);
    v.generated_dim = generated_algebra(a).dim();
    v.commutant_dim = commutant(a).dim();
    if (v.star_algebra) {
        v.certified = true;
        v.route = "star-algebra";
        v.message = "observables with I span a *-algebra; conjugation by commutant unitaries fixes it, so UDP implies UDA";
        v.evidence = commutant_unitaries(a, 4, seed);
    } else if (a.d == 2) {
        v.certified = true;
        v.route = "qubit";
        v.message = "qubit: reflection of the Bloch ball through the observable span fixes it, so UDP implies UDA";
        v.evidence = {qubit_reflection(a)};
    } else {
        v.route = "none";
        v.message = "no certificate from algebra structure (not a refutation)";
    }
    return v;
}

/// {1..d} together with sum d_i^2 over partitions of d.
inline std::vector<std::size_t> realizable_fixed_dims(std::size_t d) {
    require(d >= 1, ErrorCode::InvalidDimension, "d must be at least 1");
    std::set<std::size_t> dims;
    for (std::size_t k = 1; k <= d; ++k) dims.insert(k);
    // partitions with parts in non-increasing order
    std::vector<std::size_t> parts;
    auto rec = [&](auto&& self, std::size_t remaining, std::size_t max_part) -> void {
        if (remaining == 0) {
            std::size_t s = 0;
            for (auto p : parts) s += p * p;
            dims.insert(s);
            return;
        }
        for (std::size_t p = std::min(remaining, max_part); p >= 1; --p) {
            parts.push_back(p);
            self(self, remaining - p, p);
            parts.pop_back();
        }
    };
    rec(rec, d, d);
    return {dims.begin(), dims.end()};
}

/// Conditional expectation onto block-diagonal matrices with the given
/// block sizes: zeroes every entry outside the diagonal blocks.
inline Superoperator pinching(std::span<const std::size_t> blocks) {
    std::size_t d = 0;
    std::vector<std::size_t> label;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        require(blocks[b] >= 1, ErrorCode::InvalidDimension, "block sizes must be positive");
        for (std::size_t i = 0; i < blocks[b]; ++i) label.push_back(b);
        d += blocks[b];
    }
    return Superoperator::from_map(d, [&](const ComplexMatrix& x) {
        ComplexMatrix y(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                if (label[i] == label[j]) y(i, j) = x(i, j);
        return y;
    });
}

}  // namespace udalab
