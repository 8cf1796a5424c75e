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

// Joint numerical range of two observables,
//   W(A1, A2) = { (<psi|A1|psi>, <psi|A2|psi>) : ||psi|| = 1 },
// which is the numerical range of A1 + i A2 and hence convex. The boundary
// is traced by supporting lines: the top eigenvector of cos(t) A1 + sin(t) A2
// attains the maximum of the linear functional (cos t, sin t).

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "udalab/certify.hpp"
#include "udalab/core.hpp"
#include "udalab/observables.hpp"

namespace udalab {

struct BoundaryPoint {
    double theta = 0.0;
    double x = 0.0;
    double y = 0.0;
    double support = 0.0;  ///< top eigenvalue of cos(theta) A1 + sin(theta) A2
    std::size_t degeneracy = 1;
    PureState state;
};

struct PlanarRange {
    std::vector<BoundaryPoint> points;  ///< increasing theta in [0, 2 pi)

    /// max over supporting lines of cos(t) x + sin(t) y - support(t); <= 0
    /// inside the range.
    double halfplane_excess(double x, double y) const {
        double worst = -INFINITY;
        for (const auto& p : points)
            worst = std::max(worst, std::cos(p.theta) * x + std::sin(p.theta) * y - p.support);
        return worst;
    }

    double diameter() const {
        double best = 0.0;
        for (const auto& p : points)
            for (const auto& q : points) best = std::max(best, std::hypot(p.x - q.x, p.y - q.y));
        return best;
    }
};

struct SweepConfig {
    std::size_t angles = 720;
    /// Bisect angle intervals whose boundary points are further apart than
    /// refine_gap * diameter, at most refine_depth times.
    bool refine = false;
    double refine_gap = 0.05;
    std::size_t refine_depth = 8;
    double degeneracy_tol = 1e-8;
};

namespace detail {

inline void check_pair(const HermitianMatrix& a1, const HermitianMatrix& a2) {
    require(a1.dim() == a2.dim(), ErrorCode::DimensionMismatch, "A1 and A2 differ in dimension");
}

inline BoundaryPoint support_point(const HermitianMatrix& a1, const HermitianMatrix& a2, double theta, double rel_tol) {
    const double c = std::cos(theta), s = std::sin(theta);
    ComplexMatrix h = a1.matrix() * c;
    h.axpy(s, a2.matrix());
    const auto es = eigh(h);
    const std::size_t d = a1.dim();
    const double top = es.values[d - 1];
    const double scale = std::max(1.0, std::max(std::abs(es.values.front()), std::abs(top)));
    std::size_t deg = 0;
    for (double w : es.values)
        if (top - w <= rel_tol * scale) ++deg;
    PureState psi = PureState::normalized(es.vectors.column(d - 1));
    BoundaryPoint p;
    p.theta = theta;
    p.x = expectation(a1, psi);
    p.y = expectation(a2, psi);
    p.support = top;
    p.degeneracy = deg;
    p.state = std::move(psi);
    return p;
}

}  // namespace detail

inline PlanarRange boundary_sweep(const HermitianMatrix& a1, const HermitianMatrix& a2, const SweepConfig& cfg) {
    detail::check_pair(a1, a2);
    require(cfg.angles >= 8, ErrorCode::Precondition, "boundary sweep needs at least 8 angles");
    PlanarRange range;
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t k = 0; k < cfg.angles; ++k)
        range.points.push_back(detail::support_point(a1, a2, two_pi * static_cast<double>(k) / static_cast<double>(cfg.angles),
                                                     cfg.degeneracy_tol));
    if (!cfg.refine) return range;

    const double gap = cfg.refine_gap * std::max(range.diameter(), 1e-300);
    for (std::size_t depth = 0; depth < cfg.refine_depth; ++depth) {
        std::vector<BoundaryPoint> next;
        bool changed = false;
        for (std::size_t i = 0; i < range.points.size(); ++i) {
            const auto& p = range.points[i];
            const auto& q = range.points[(i + 1) % range.points.size()];
            next.push_back(p);
            if (std::hypot(p.x - q.x, p.y - q.y) <= gap) continue;
            const double t1 = i + 1 < range.points.size() ? q.theta : q.theta + two_pi;
            double mid = 0.5 * (p.theta + t1);
            if (mid >= two_pi) mid -= two_pi;
            next.push_back(detail::support_point(a1, a2, mid, cfg.degeneracy_tol));
            changed = true;
        }
        std::sort(next.begin(), next.end(), [](const auto& a, const auto& b) { return a.theta < b.theta; });
        range.points = std::move(next);
        if (!changed) break;
    }
    return range;
}

inline PlanarRange boundary_sweep(const HermitianMatrix& a1, const HermitianMatrix& a2, std::size_t angles = 720) {
    SweepConfig cfg;
    cfg.angles = angles;
    return boundary_sweep(a1, a2, cfg);
}

// ---------------------------------------------------------------------------

struct AchievingSearch {
    std::size_t restarts = 200;
    std::uint64_t seed = 0;
    double match_tol = 1e-8;
};

/// Pure states whose image under (A_1, ..., A_m) is within match_tol of x
/// (max norm), from random restarts of the pure-state search. Complete
/// only heuristically.
inline std::vector<PureState> achieving_states(const ObservableSet& a, std::span<const double> x,
                                               const AchievingSearch& cfg = {}) {
    require(x.size() == a.size(), ErrorCode::DimensionMismatch, "target length differs from observable count");
    const RealVector b(x.begin(), x.end());
    const detail::PureObjective obj{a, b};
    // Polish to machine precision: at boundary points the residual is
    // quadratic in the state error, and closure probes need accurate states.
    detail::SphereSearch opt;
    opt.target = 1e-32;
    std::vector<PureState> out;
    for (std::size_t r = 0; r < cfg.restarts; ++r) {
        Rng rng(cfg.seed + r);
        std::size_t iters = 0;
        auto phi = detail::minimize_on_sphere(obj, gaussian_vector(a.d, rng), opt, iters);
        const auto e = obj.residuals(phi);
        double worst = 0.0;
        for (double v : e) worst = std::max(worst, std::abs(v));
        if (worst <= cfg.match_tol) out.push_back(PureState::normalized(std::move(phi)));
    }
    return out;
}

struct EmbryReport {
    bool extreme = false;
    std::size_t achieving = 0;  ///< achieving states found
    std::size_t probes = 0;     ///< closure probes evaluated
    std::size_t failures = 0;
    double worst_miss = 0.0;    ///< largest probe image error
    bool unique_up_to_phase = false;
};

/// Closure test for the set M_x of vectors mapping to x: x is extreme iff
/// M_x (with 0) is a linear subspace. Probes psi + phi and psi + i phi for
/// pairs of achieving states, which must map to x again within 1e-7. Only
/// phases c in {1, -1, i, -i} with |psi + c phi| >= sqrt(2) are probed, so
/// that nearly cancelling sums do not amplify the search error.
inline EmbryReport embry_extreme_test(std::pair<double, double> x, const HermitianMatrix& a1, const HermitianMatrix& a2,
                                      std::span<const PureState> sample_states, const AchievingSearch& search = {}) {
    detail::check_pair(a1, a2);
    const ObservableSet a{a1.dim(), {a1, a2}, ObservableOrigin::Explicit};
    std::vector<PureState> states;
    for (const auto& s : sample_states) {
        require(s.dim() == a1.dim(), ErrorCode::DimensionMismatch, "sample state dimension mismatch");
        if (std::abs(expectation(a1, s) - x.first) <= search.match_tol &&
            std::abs(expectation(a2, s) - x.second) <= search.match_tol)
            states.push_back(s);
    }
    const double target[2] = {x.first, x.second};
    if (search.restarts > 0)
        for (auto& s : achieving_states(a, target, search)) states.push_back(std::move(s));
    require(!states.empty(), ErrorCode::NotInRange, "no achieving state found for the target point");

    EmbryReport rep;
    rep.achieving = states.size();
    rep.unique_up_to_phase = true;
    for (std::size_t i = 0; i < states.size(); ++i)
        for (std::size_t j = i + 1; j < states.size(); ++j) {
            if (states[i].fidelity(states[j]) <= 1.0 - 1e-8) rep.unique_up_to_phase = false;
            const cd overlap = vdot(states[i].amplitudes(), states[j].amplitudes());
            for (const cd phase : {cd(1.0), cd(-1.0), kI, -kI}) {
                if ((phase * overlap).real() < 0.0) continue;
                ComplexVector v(a.d);
                for (std::size_t k = 0; k < a.d; ++k) v[k] = states[i][k] + phase * states[j][k];
                const auto probe = PureState::normalized(std::move(v));
                const double miss = std::max(std::abs(expectation(a1, probe) - x.first),
                                             std::abs(expectation(a2, probe) - x.second));
                ++rep.probes;
                rep.worst_miss = std::max(rep.worst_miss, miss);
                if (miss > 1e-7) ++rep.failures;
            }
        }
    rep.extreme = rep.failures == 0;
    return rep;
}

// ---------------------------------------------------------------------------

struct Theorem5Config {
    std::size_t angles = 720;
    std::size_t interior_trials = 50;
    std::uint64_t seed = 0;
    /// Used for both the boundary UDA searches and the interior UDP searches.
    FeasibilityConfig feasibility = [] {
        FeasibilityConfig f;
        f.restarts = 1;
        f.max_iterations = 1000;
        f.scheme = ProjectionScheme::Alternating;
        return f;
    }();
    /// Interior probes must clear every supporting line by this margin.
    double interior_margin = 1e-3;
};

struct Theorem5Report {
    std::size_t boundary_points = 0;
    std::size_t nondegenerate = 0;
    std::size_t boundary_uda_falsified = 0;
    /// Boundary runs that hit the iteration limit. The feasible set at a
    /// boundary point is a single point touching the PSD cone tangentially,
    /// where alternating projections converge sublinearly.
    std::size_t boundary_unconverged = 0;
    std::size_t interior_probes = 0;
    std::size_t interior_udp_falsified = 0;
    std::size_t interior_udp_missed = 0;
    std::size_t hard_failures = 0;  ///< a point that is UDA-falsified but not UDP-falsified
    std::vector<std::string> failure_details;
    bool passed() const noexcept { return hard_failures == 0 && boundary_uda_falsified == 0; }
};

/// For two observables, UDP and UDA coincide. Checks that nondegenerate
/// boundary points never admit a second state, and that random interior
/// points always have a second pure preimage.
inline Theorem5Report theorem5_consistency(const HermitianMatrix& a1, const HermitianMatrix& a2, const Theorem5Config& cfg = {}) {
    detail::check_pair(a1, a2);
    require(cfg.interior_trials >= 1, ErrorCode::Precondition, "trials must be at least 1");
    const std::size_t d = a1.dim();
    const ObservableSet a{d, {a1, a2}, ObservableOrigin::Explicit};
    Theorem5Report rep;

    const auto range = boundary_sweep(a1, a2, cfg.angles);
    rep.boundary_points = range.points.size();
    for (std::size_t k = 0; k < range.points.size(); ++k) {
        const auto& p = range.points[k];
        if (p.degeneracy != 1) continue;
        ++rep.nondegenerate;
        FeasibilityConfig f = cfg.feasibility;
        f.seed = cfg.seed + 1000003 * k;
        const auto uda = uda_falsify(p.state, a, f);
        if (uda.falsified()) {
            ++rep.boundary_uda_falsified;
            const auto udp = udp_certify(p.state, a, f);
            if (!udp.falsified()) {
                ++rep.hard_failures;
                rep.failure_details.push_back("boundary theta=" + std::to_string(p.theta) + ": " + uda.evidence);
            }
        } else if (uda.unconverged_restarts > 0) {
            ++rep.boundary_unconverged;
        }
    }

    Rng rng(cfg.seed ^ 0x7e57ULL);
    const double scale = std::max(1.0, range.diameter());
    for (std::size_t attempts = 0; rep.interior_probes < cfg.interior_trials && attempts < 100 * cfg.interior_trials;
         ++attempts) {
        const auto psi = random_pure(d, rng);
        if (range.halfplane_excess(expectation(a1, psi), expectation(a2, psi)) > -cfg.interior_margin * scale) continue;
        ++rep.interior_probes;
        FeasibilityConfig f = cfg.feasibility;
        f.seed = cfg.seed + 7919 * attempts;
        f.restarts = std::max<std::size_t>(f.restarts, 10);
        const auto udp = udp_certify(psi, a, f);
        if (udp.falsified()) {
            ++rep.interior_udp_falsified;
            continue;
        }
        ++rep.interior_udp_missed;
        const auto uda = uda_falsify(psi, a, f);
        if (uda.falsified()) {
            ++rep.hard_failures;
            rep.failure_details.push_back("interior probe " + std::to_string(rep.interior_probes) + ": " + uda.evidence);
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------

struct QutritCounterexample {
    ObservableSet observables;  ///< (M1, M2, M3)
    RealVector target;          ///< (0, 0, 0)
    PureState pure_preimage;    ///< |2>
    DensityMatrix mixed_witness;
    CertificateOutcome udp;     ///< search for another pure preimage
    CertificateOutcome uda;     ///< search for another state
    double pure_residual = 0.0;
    double mixed_residual = 0.0;
    std::size_t ball_samples = 0;
    double ball_max_error = 0.0;  ///< constructive realization of Bloch-ball points
};

/// Three qutrit Gell-Mann observables acting on the {|0>, |1>} block: the
/// image (0,0,0) has the unique pure preimage |2> but many mixed ones.
inline QutritCounterexample qutrit_counterexample(std::size_t ball_samples = 1000, std::uint64_t seed = 0,
                                                  FeasibilityConfig cfg = {}) {
    const auto m = gellmann_matrices(3);
    QutritCounterexample out{ObservableSet{3, {m[0], m[1], m[2]}, ObservableOrigin::Explicit},
                             RealVector{0.0, 0.0, 0.0},
                             PureState::basis(3, 2),
                             DensityMatrix(HermitianMatrix::diagonal(std::vector<double>{0.5, 0.5, 0.0})),
                             {},
                             {},
                             0.0,
                             0.0,
                             ball_samples,
                             0.0};
    const MeasurementVector zero{out.target};
    out.pure_residual = max_abs_difference(measure(out.observables, out.pure_preimage), zero);
    out.mixed_residual = max_abs_difference(measure(out.observables, out.mixed_witness), zero);
    cfg.seed = seed;
    out.udp = udp_certify(out.pure_preimage, out.observables, cfg);
    out.uda = uda_certify(out.pure_preimage, out.observables, cfg);

    // r in the unit ball from sqrt(|r|) phi + sqrt(1 - |r|) |2>, phi the
    // qubit state with Bloch vector r/|r| in the {|0>,|1>} block.
    Rng rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t s = 0; s < ball_samples; ++s) {
        double r[3] = {g(rng), g(rng), g(rng)};
        const double n = std::hypot(r[0], r[1], r[2]);
        const double len = std::cbrt(u(rng));
        for (double& c : r) c *= len / n;
        const double theta = std::acos(std::clamp(r[2] / len, -1.0, 1.0));
        const double phase = std::atan2(r[1], r[0]);
        ComplexVector v{std::sqrt(len) * std::cos(theta / 2), std::sqrt(len) * std::polar(std::sin(theta / 2), phase),
                        std::sqrt(1.0 - len)};
        const auto psi = PureState::normalized(std::move(v));
        const auto got = measure(out.observables, psi);
        for (int i = 0; i < 3; ++i) out.ball_max_error = std::max(out.ball_max_error, std::abs(got.values[i] - r[i]));
    }
    return out;
}

struct BlochNonconvexity {
    ObservableSet observables;  ///< (I, X, Y, Z)
    RealVector image0, image1, midpoint;
    std::size_t probes = 0;
    double min_distance = 0.0;  ///< smallest distance from a pure image to the midpoint
    double mixed_residual = 0.0;  ///< I/2 reaches the midpoint
};

/// The joint range of (I, X, Y, Z) on a qubit is the Bloch sphere, not the
/// ball: the midpoint of the images of |0> and |1> has no pure preimage.
inline BlochNonconvexity bloch_nonconvexity_demo(std::size_t probes = 10000, std::uint64_t seed = 0) {
    auto paulis = pauli_matrices();
    BlochNonconvexity out;
    out.observables = ObservableSet{2, {HermitianMatrix::identity(2), paulis[0], paulis[1], paulis[2]}, ObservableOrigin::Explicit};
    out.image0 = measure(out.observables, PureState::basis(2, 0)).values;
    out.image1 = measure(out.observables, PureState::basis(2, 1)).values;
    for (std::size_t i = 0; i < 4; ++i) out.midpoint.push_back(0.5 * (out.image0[i] + out.image1[i]));
    out.probes = probes;

    const detail::PureObjective obj{out.observables, out.midpoint};
    Rng rng(seed);
    double best = INFINITY;
    ComplexVector best_phi;
    for (std::size_t s = 0; s < probes; ++s) {
        auto phi = gaussian_vector(2, rng);
        detail::normalize(phi);
        const double f = obj.value(phi);
        if (f < best) {
            best = f;
            best_phi = phi;
        }
    }
    detail::SphereSearch opt;
    std::size_t iters = 0;
    best_phi = detail::minimize_on_sphere(obj, std::move(best_phi), opt, iters);
    out.min_distance = std::sqrt(std::min(best, obj.value(best_phi)));
    out.mixed_residual = max_abs_difference(measure(out.observables, DensityMatrix::maximally_mixed(2)), MeasurementVector{out.midpoint});
    return out;
}

}  // namespace udalab
