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

// Uniqueness of tripartite states given the two-party reductions on the
// pairs {1,2} and {1,3}.
//
// A second state agreeing on {1,2} purifies to sum_l |v_l>|E_l>, with
// |v_l> = sum_ij c_ijl |i>|j> and |E_l> = sum_k |k>|e_lk>. Agreement on
// {1,3} is then linear in the Gram entries x_{k'n'kn} = <e_k'n'|e_kn>; the
// state is determined when that system has full column rank.

#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "udalab/core.hpp"

namespace udalab {

using Dims3 = std::array<std::size_t, 3>;

/// Pure state on C^d1 (x) C^d2 (x) C^d3, amplitudes c_ijk at (i d2 + j) d3 + k.
class TripartiteState {
public:
    TripartiteState() = default;

    TripartiteState(Dims3 dims, ComplexVector c) : dims_(dims), c_(std::move(c)) {
        for (auto d : dims_) require(d >= 1, ErrorCode::InvalidDimension, "subsystem dimensions must be positive");
        require(c_.size() == dims_[0] * dims_[1] * dims_[2], ErrorCode::DimensionMismatch,
                "amplitude count must be d1 d2 d3");
        const double n = vnorm(c_);
        require(std::abs(n * n - 1.0) <= 1e-12, ErrorCode::NotNormalized,
                "amplitudes have squared norm " + std::to_string(n * n));
    }

    static TripartiteState from_pure(const PureState& psi, Dims3 dims) {
        return TripartiteState(dims, ComplexVector(psi.amplitudes().begin(), psi.amplitudes().end()));
    }

    static TripartiteState random(Dims3 dims, Rng& rng) {
        return from_pure(random_pure(dims[0] * dims[1] * dims[2], rng), dims);
    }

    /// a|000> + b e^{i theta}|111> on three qubits.
    static TripartiteState ghz(double a, double b, double theta = 0.0) {
        require(a >= 0.0 && b >= 0.0, ErrorCode::Precondition, "GHZ amplitudes must be non-negative");
        require(std::abs(a * a + b * b - 1.0) <= 1e-12, ErrorCode::NotNormalized, "a^2 + b^2 must equal 1");
        ComplexVector c(8);
        c[0] = a;
        c[7] = std::polar(b, theta);
        return TripartiteState({2, 2, 2}, std::move(c));
    }

    const Dims3& dims() const noexcept { return dims_; }
    std::size_t d1() const noexcept { return dims_[0]; }
    std::size_t d2() const noexcept { return dims_[1]; }
    std::size_t d3() const noexcept { return dims_[2]; }
    std::span<const cd> amplitudes() const noexcept { return c_; }

    cd operator()(std::size_t i, std::size_t j, std::size_t k) const { return c_[(i * dims_[1] + j) * dims_[2] + k]; }

    PureState pure() const { return PureState(c_); }

    /// Same state with parties 2 and 3 exchanged.
    TripartiteState swap23() const {
        ComplexVector c(c_.size());
        for (std::size_t i = 0; i < d1(); ++i)
            for (std::size_t j = 0; j < d2(); ++j)
                for (std::size_t k = 0; k < d3(); ++k) c[(i * d3() + k) * d2() + j] = (*this)(i, j, k);
        return TripartiteState({d1(), d3(), d2()}, std::move(c));
    }

    /// |v_l> = sum_ij c_ijl |i>|j>
    ComplexVector v(std::size_t l) const {
        require(l < d3(), ErrorCode::OutOfRange, "v index out of range");
        ComplexVector out(d1() * d2());
        for (std::size_t i = 0; i < d1(); ++i)
            for (std::size_t j = 0; j < d2(); ++j) out[i * d2() + j] = (*this)(i, j, l);
        return out;
    }

    /// |alpha_mk> = sum_j c_mjk |j>
    ComplexVector alpha(std::size_t m, std::size_t k) const {
        ComplexVector out(d2());
        for (std::size_t j = 0; j < d2(); ++j) out[j] = (*this)(m, j, k);
        return out;
    }

    /// det of the Gram matrix of the |v_l>; nonzero iff they are independent.
    double v_gram_determinant() const {
        ComplexMatrix g(d3(), d3());
        std::vector<ComplexVector> vs;
        for (std::size_t l = 0; l < d3(); ++l) vs.push_back(v(l));
        for (std::size_t a = 0; a < d3(); ++a)
            for (std::size_t b = 0; b < d3(); ++b) g(a, b) = vdot(vs[a], vs[b]);
        double det = 1.0;
        for (double w : eigvalsh(g)) det *= std::max(w, 0.0);
        return det;
    }

private:
    Dims3 dims_{};
    ComplexVector c_;
};

enum class Pair { P12, P13, P23 };

inline Pair parse_pair(const std::string& s) {
    if (s == "12" || s == "{1,2}") return Pair::P12;
    if (s == "13" || s == "{1,3}") return Pair::P13;
    if (s == "23" || s == "{2,3}") return Pair::P23;
    throw Error(ErrorCode::Parse, "invalid subsystem pair '" + s + "'");
}

inline DensityMatrix rdm_pair(const TripartiteState& s, Pair pair) {
    std::array<std::size_t, 2> keep{};
    switch (pair) {
        case Pair::P12: keep = {0, 1}; break;
        case Pair::P13: keep = {0, 2}; break;
        case Pair::P23: keep = {1, 2}; break;
    }
    const auto rho = s.pure().projector();
    return DensityMatrix(HermitianMatrix::symmetrize(partial_trace(rho, s.dims(), keep)));
}

// ---------------------------------------------------------------------------

struct RdmLinearSystem {
    Dims3 dims{};
    ComplexMatrix coefficients;  ///< (d1^2 d3^2) x d3^4
    ComplexVector rhs;
    bool generic = false;        ///< |v_l> linearly independent (Gram det > 1e-12)

    /// Row of equation (m, m', n, n').
    std::size_t row(std::size_t m, std::size_t mp, std::size_t n, std::size_t np) const {
        const std::size_t d1 = dims[0], d3 = dims[2];
        return ((m * d1 + mp) * d3 + n) * d3 + np;
    }
    /// Column of variable x_{k'n'kn} = <e_k'n'|e_kn>.
    std::size_t col(std::size_t kp, std::size_t np, std::size_t k, std::size_t n) const {
        const std::size_t d3 = dims[2];
        return ((kp * d3 + np) * d3 + k) * d3 + n;
    }
    std::size_t variables() const noexcept { return coefficients.cols(); }
    std::size_t equations() const noexcept { return coefficients.rows(); }

    /// x = 1 iff k' = n' and k = n: the reference state itself.
    ComplexVector canonical_solution() const {
        const std::size_t d3 = dims[2];
        ComplexVector x(variables());
        for (std::size_t n = 0; n < d3; ++n)
            for (std::size_t np = 0; np < d3; ++np) x[col(np, np, n, n)] = 1.0;
        return x;
    }
};

inline double system_residual(const ComplexMatrix& a, std::span<const cd> x, std::span<const cd> b) {
    const auto ax = a * x;
    double worst = 0.0;
    for (std::size_t i = 0; i < ax.size(); ++i) worst = std::max(worst, std::abs(ax[i] - b[i]));
    return worst;
}

inline RdmLinearSystem build_system(const TripartiteState& s) {
    const std::size_t d1 = s.d1(), d2 = s.d2(), d3 = s.d3();
    RdmLinearSystem sys;
    sys.dims = s.dims();
    sys.coefficients = ComplexMatrix(d1 * d1 * d3 * d3, d3 * d3 * d3 * d3);
    sys.rhs.assign(sys.coefficients.rows(), cd{});
    std::vector<ComplexVector> alpha(d1 * d3);
    for (std::size_t m = 0; m < d1; ++m)
        for (std::size_t k = 0; k < d3; ++k) alpha[m * d3 + k] = s.alpha(m, k);
    for (std::size_t m = 0; m < d1; ++m)
        for (std::size_t mp = 0; mp < d1; ++mp)
            for (std::size_t n = 0; n < d3; ++n)
                for (std::size_t np = 0; np < d3; ++np) {
                    const std::size_t r = sys.row(m, mp, n, np);
                    for (std::size_t k = 0; k < d3; ++k)
                        for (std::size_t kp = 0; kp < d3; ++kp)
                            sys.coefficients(r, sys.col(kp, np, k, n)) = vdot(alpha[mp * d3 + kp], alpha[m * d3 + k]);
                    cd b{};
                    for (std::size_t j = 0; j < d2; ++j) b += s(m, j, n) * std::conj(s(mp, j, np));
                    sys.rhs[r] = b;
                }
    sys.generic = s.v_gram_determinant() > 1e-12;
    return sys;
}

struct RankTestReport {
    bool uda = false;
    bool generic = false;
    bool swapped = false;  ///< parties 2 and 3 exchanged so that d3 <= d2
    std::size_t rank = 0;
    std::size_t equations = 0;
    std::size_t variables = 0;
    double canonical_residual = 0.0;
};

/// Full column rank of the system certifies the state UDA by its {1,2} and
/// {1,3} reductions. When d3 > d2 the parties 2 and 3 are exchanged first
/// (the pair of reductions is symmetric under that exchange); without it the
/// system has fewer equations than variables whenever d3 > d1.
inline RankTestReport uda_rank_report(const TripartiteState& s) {
    RankTestReport rep;
    rep.swapped = s.d3() > s.d2();
    const TripartiteState t = rep.swapped ? s.swap23() : s;
    const auto sys = build_system(t);
    rep.generic = sys.generic;
    rep.rank = rank_row_reduce(sys.coefficients, 1e-10);
    rep.equations = sys.equations();
    rep.variables = sys.variables();
    rep.canonical_residual = system_residual(sys.coefficients, sys.canonical_solution(), sys.rhs);
    rep.uda = rep.rank == rep.variables;
    return rep;
}

inline bool uda_rank_test(const TripartiteState& s) { return uda_rank_report(s).uda; }

// ---------------------------------------------------------------------------

struct GhzFamilyEntry {
    double theta = 0.0;
    double rdm_difference = 0.0;     ///< max over the three pairs, Frobenius
    double projector_distance = 0.0; ///< || P_theta - P_0 ||_F
    double predicted_distance = 0.0; ///< sqrt(2) a b |1 - e^{i theta}|
};

struct GhzFamilyReport {
    double a = 0.0, b = 0.0;
    std::vector<GhzFamilyEntry> entries;
    bool rdms_equal(double tol = 1e-12) const {
        for (const auto& e : entries)
            if (e.rdm_difference > tol) return false;
        return true;
    }
};

/// a|000> + b e^{i theta}|111> share all two-party reductions with theta = 0.
inline GhzFamilyReport ghz_family_check(double a, double b, std::span<const double> thetas) {
    require(std::isfinite(a) && std::isfinite(b), ErrorCode::Precondition, "amplitudes must be finite");
    GhzFamilyReport rep{a, b, {}};
    const auto ref = TripartiteState::ghz(a, b, 0.0);
    const auto ref_proj = ref.pure().projector();
    for (double theta : thetas) {
        const auto s = TripartiteState::ghz(a, b, theta);
        GhzFamilyEntry e;
        e.theta = theta;
        for (Pair p : {Pair::P12, Pair::P13, Pair::P23})
            e.rdm_difference =
                std::max(e.rdm_difference, (rdm_pair(s, p).matrix() - rdm_pair(ref, p).matrix()).frobenius_norm());
        e.projector_distance = (s.pure().projector() - ref_proj).frobenius_norm();
        e.predicted_distance = std::sqrt(2.0) * a * b * std::abs(1.0 - std::polar(1.0, theta));
        rep.entries.push_back(e);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Mixed states via purification

struct MixedRdmSystem {
    Dims3 dims{};
    std::size_t d4 = 0;          ///< purification ancilla dimension
    ComplexMatrix coefficients;  ///< {1,3} equations stacked over {1,2} equations
    ComplexVector rhs;
    std::size_t equations13 = 0;
    std::size_t equations12 = 0;

    /// Variable Y_{a', j3', a, j3} = sum_j4 <e_{a',(j3',j4)}|e_{a,(j3,j4)}>,
    /// a = (i3, i4) running over d3 d4 values.
    std::size_t col(std::size_t ap, std::size_t j3p, std::size_t a, std::size_t j3) const {
        const std::size_t d3 = dims[2], na = d3 * d4;
        return ((ap * d3 + j3p) * na + a) * d3 + j3;
    }
    std::size_t variables() const noexcept { return coefficients.cols(); }
    std::size_t equations() const noexcept { return coefficients.rows(); }

    ComplexVector canonical_solution() const {
        const std::size_t d3 = dims[2];
        ComplexVector y(variables());
        for (std::size_t i4 = 0; i4 < d4; ++i4)
            for (std::size_t i3 = 0; i3 < d3; ++i3)
                for (std::size_t i3p = 0; i3p < d3; ++i3p) y[col(i3p * d4 + i4, i3p, i3 * d4 + i4, i3)] = 1.0;
        return y;
    }
};

struct Purification {
    std::size_t d4 = 0;
    ComplexVector lambda;  ///< lambda_{i1 i2 i3 i4} at ((i1 d2 + i2) d3 + i3) d4 + i4
};

/// sum_a sqrt(p_a) |u_a>|a> over the eigenvalues above 1e-10.
inline Purification purify(const DensityMatrix& rho) {
    const auto es = eigh(rho.matrix());
    const std::size_t n = rho.dim();
    std::vector<std::size_t> support;
    for (std::size_t k = n; k-- > 0;)
        if (es.values[k] > 1e-10) support.push_back(k);
    Purification p{support.size(), ComplexVector(n * support.size())};
    for (std::size_t a = 0; a < support.size(); ++a) {
        const double w = std::sqrt(es.values[support[a]]);
        for (std::size_t i = 0; i < n; ++i) p.lambda[i * p.d4 + a] = w * es.vectors(i, support[a]);
    }
    return p;
}

inline std::size_t numerical_rank(const DensityMatrix& rho) { return purify(rho).d4; }

/// Stacked system for agreement on {1,3} and {1,2} of a purification of rho.
inline MixedRdmSystem build_mixed_system(const DensityMatrix& rho, Dims3 dims) {
    const std::size_t d1 = dims[0], d2 = dims[1], d3 = dims[2];
    require(rho.dim() == d1 * d2 * d3, ErrorCode::DimensionMismatch, "state dimension must be d1 d2 d3");
    const auto pur = purify(rho);
    const std::size_t d4 = pur.d4, na = d3 * d4;
    auto lam = [&](std::size_t i1, std::size_t i2, std::size_t a) { return pur.lambda[(i1 * d2 + i2) * na + a]; };

    MixedRdmSystem sys;
    sys.dims = dims;
    sys.d4 = d4;
    sys.equations13 = d1 * d1 * d3 * d3;
    sys.equations12 = d1 * d1 * d2 * d2;
    sys.coefficients = ComplexMatrix(sys.equations13 + sys.equations12, d3 * d3 * d3 * d3 * d4 * d4);
    sys.rhs.assign(sys.coefficients.rows(), cd{});

    // {1,3}: for each (i1, i1', j3, j3')
    std::size_t r = 0;
    for (std::size_t i1 = 0; i1 < d1; ++i1)
        for (std::size_t i1p = 0; i1p < d1; ++i1p)
            for (std::size_t j3 = 0; j3 < d3; ++j3)
                for (std::size_t j3p = 0; j3p < d3; ++j3p, ++r) {
                    for (std::size_t a = 0; a < na; ++a)
                        for (std::size_t ap = 0; ap < na; ++ap) {
                            cd coef{};
                            for (std::size_t i2 = 0; i2 < d2; ++i2) coef += lam(i1, i2, a) * std::conj(lam(i1p, i2, ap));
                            sys.coefficients(r, sys.col(ap, j3p, a, j3)) = coef;
                        }
                    cd b{};
                    for (std::size_t i2 = 0; i2 < d2; ++i2)
                        for (std::size_t j4 = 0; j4 < d4; ++j4)
                            b += lam(i1, i2, j3 * d4 + j4) * std::conj(lam(i1p, i2, j3p * d4 + j4));
                    sys.rhs[r] = b;
                }
    // {1,2}: for each (i1, i2, i1', i2')
    for (std::size_t i1 = 0; i1 < d1; ++i1)
        for (std::size_t i2 = 0; i2 < d2; ++i2)
            for (std::size_t i1p = 0; i1p < d1; ++i1p)
                for (std::size_t i2p = 0; i2p < d2; ++i2p, ++r) {
                    cd b{};
                    for (std::size_t a = 0; a < na; ++a) {
                        b += lam(i1, i2, a) * std::conj(lam(i1p, i2p, a));
                        for (std::size_t ap = 0; ap < na; ++ap) {
                            const cd coef = lam(i1, i2, a) * std::conj(lam(i1p, i2p, ap));
                            for (std::size_t j3 = 0; j3 < d3; ++j3) sys.coefficients(r, sys.col(ap, j3, a, j3)) += coef;
                        }
                    }
                    sys.rhs[r] = b;
                }
    return sys;
}

struct MixedRankReport {
    bool uda = false;
    std::size_t d4 = 0;
    std::size_t rank = 0;
    std::size_t equations = 0;
    std::size_t variables = 0;
    double canonical_residual = 0.0;
};

inline MixedRankReport mixed_rank_report(const DensityMatrix& rho, Dims3 dims) {
    const auto sys = build_mixed_system(rho, dims);
    MixedRankReport rep;
    rep.d4 = sys.d4;
    rep.rank = rank_row_reduce(sys.coefficients, 1e-10);
    rep.equations = sys.equations();
    rep.variables = sys.variables();
    rep.canonical_residual = system_residual(sys.coefficients, sys.canonical_solution(), sys.rhs);
    rep.uda = rep.rank == rep.variables;
    return rep;
}

/// Rank test for a low-rank mixed state; requires rank(rho) <= rank_bound <=
/// floor(d1 / d3).
inline bool mixed_uda_rank_test(const DensityMatrix& rho, Dims3 dims, std::size_t rank_bound) {
    require(rank_bound <= dims[0] / dims[2], ErrorCode::Precondition,
            "rank bound exceeds floor(d1/d3) = " + std::to_string(dims[0] / dims[2]));
    require(numerical_rank(rho) <= rank_bound, ErrorCode::Precondition,
            "state rank " + std::to_string(numerical_rank(rho)) + " exceeds the rank bound");
    return mixed_rank_report(rho, dims).uda;
}

inline DensityMatrix random_density_on(Dims3 dims, std::size_t rank, Rng& rng) {
    return random_density(dims[0] * dims[1] * dims[2], rank, rng);
}

// ---------------------------------------------------------------------------

struct FourQubitDemo {
    /// Qubits 3 and 4 grouped as the third party: (2, 2, 4). The rank bound
    /// floor(2/4) = 0 does not apply, so the system is tested directly.
    MixedRankReport grouped_third;
    /// Qubits 3 and 4 grouped as the first party: (4, 2, 2), bound 2.
    MixedRankReport grouped_first;
};

/// Rank-2 four-qubit state, tested under both readings of the grouping.
inline FourQubitDemo four_qubit_demo(std::uint64_t seed = 0) {
    Rng rng(seed);
    const auto rho = random_density(16, 2, rng);
    FourQubitDemo out;
    out.grouped_third = mixed_rank_report(rho, {2, 2, 4});
    // Reorder qubits (1,2,3,4) -> (3,4,1,2) so the pair (3,4) leads.
    ComplexMatrix moved(16, 16);
    auto perm = [](std::size_t i) {
        const std::size_t q1 = (i >> 3) & 1, q2 = (i >> 2) & 1, q3 = (i >> 1) & 1, q4 = i & 1;
        return (q3 << 3) | (q4 << 2) | (q1 << 1) | q2;
    };
    for (std::size_t i = 0; i < 16; ++i)
        for (std::size_t j = 0; j < 16; ++j) moved(perm(i), perm(j)) = rho.matrix()(i, j);
    out.grouped_first = mixed_rank_report(DensityMatrix(HermitianMatrix::symmetrize(moved)), {4, 2, 2});
    return out;
}

}  // namespace udalab
