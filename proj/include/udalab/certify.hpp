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

// Deciding and falsifying uniqueness of a pure state given the expectation
// values of a set of observables.
//
// UDA (unique among all states) is checked by a structural certificate when
// the complement of the observable span is known to contain only operators
// with at least two eigenvalues of each sign; otherwise Dykstra alternating
// projections between the PSD cone and the affine set of unit-trace
// Hermitian matrices with the same measurements search for a second state.
// UDP (unique among pure states) is falsifiable only: a projected-gradient
// search followed by damped Gauss-Newton looks for a second pure preimage.

#pragma once

#include <algorithm>
#include <cmath>
#include <future>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "udalab/core.hpp"
#include "udalab/observables.hpp"
#include "udalab/subspace.hpp"

namespace udalab {

struct MeasurementVector {
    RealVector values;
    std::size_t observable_count() const noexcept { return values.size(); }
};

inline MeasurementVector measure(const ObservableSet& a, const ComplexMatrix& rho) {
    require(rho.rows() == a.d && rho.cols() == a.d, ErrorCode::DimensionMismatch, "state and observables differ in dimension");
    MeasurementVector out;
    out.values.reserve(a.size());
    for (const auto& o : a.observables) out.values.push_back(hs_inner(o.matrix(), rho).real());
    return out;
}

inline MeasurementVector measure(const ObservableSet& a, const DensityMatrix& rho) { return measure(a, rho.matrix()); }

inline MeasurementVector measure(const ObservableSet& a, const PureState& psi) {
    require(psi.dim() == a.d, ErrorCode::DimensionMismatch, "state and observables differ in dimension");
    MeasurementVector out;
    out.values.reserve(a.size());
    for (const auto& o : a.observables) out.values.push_back(expectation(o, psi));
    return out;
}

inline double max_abs_difference(const MeasurementVector& x, const MeasurementVector& y) {
    require(x.values.size() == y.values.size(), ErrorCode::DimensionMismatch, "measurement lengths differ");
    double m = 0.0;
    for (std::size_t i = 0; i < x.values.size(); ++i) m = std::max(m, std::abs(x.values[i] - y.values[i]));
    return m;
}

// ---------------------------------------------------------------------------

struct ProjectionEquivalence {
    bool by_measurement = false;  ///< A(rho1) == A(rho2)
    bool by_projection = false;   ///< pi_L(rho1) == pi_L(rho2)
    bool agree() const noexcept { return by_measurement == by_projection; }
};

/// Decides equality of measurements two ways: directly, and through the
/// orthogonal projection onto the span of the observables.
inline ProjectionEquivalence projection_equivalence_check(const ObservableSet& a, const DensityMatrix& rho1,
                                                          const DensityMatrix& rho2, double tol = 1e-9) {
    require(rho1.dim() == a.d && rho2.dim() == a.d, ErrorCode::DimensionMismatch, "dimension mismatch");
    ProjectionEquivalence out;
    double scale = 1.0;
    for (const auto& o : a.observables) scale = std::max(scale, o.matrix().frobenius_norm());
    out.by_measurement = max_abs_difference(measure(a, rho1), measure(a, rho2)) <= tol * scale;
    const auto span = a.span();
    const ComplexMatrix diff = rho1.matrix() - rho2.matrix();
    out.by_projection = span.project(diff).frobenius_norm() <= tol;
    return out;
}

// ---------------------------------------------------------------------------

enum class Verdict { CertifiedUnique, Falsified, Inconclusive };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::CertifiedUnique: return "CertifiedUnique";
        case Verdict::Falsified: return "Falsified";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "unknown";
}

enum class ProjectionScheme {
    Dykstra,      ///< converges to the projection of the start onto the feasible set
    Alternating,  ///< plain alternating projections; Fejer monotone, allows early exit
};

struct FeasibilityConfig {
    std::size_t max_iterations = 20000;
    std::size_t restarts = 50;
    std::uint64_t seed = 0;
    double constraint_tol = 1e-8;
    double distinctness_tol = 1e-4;
    /// Structural certificate draws per restart.
    std::size_t structural_samples = 100;
    /// Pure-state search: gradient steps before Gauss-Newton refinement.
    std::size_t gradient_iterations = 50;
    std::size_t newton_iterations = 300;
    /// Backtracking line search: first trial step, halved up to max_halvings times.
    double initial_step = 1.0;
    std::size_t max_halvings = 40;
    std::size_t threads = 1;
    ProjectionScheme scheme = ProjectionScheme::Dykstra;

    void validate() const {
        require(restarts >= 1, ErrorCode::Precondition, "restarts must be at least 1");
        require(constraint_tol > 0.0 && distinctness_tol > 0.0, ErrorCode::Precondition, "tolerances must be positive");
        require(max_iterations >= 1, ErrorCode::Precondition, "max_iterations must be at least 1");
        require(initial_step > 0.0, ErrorCode::Precondition, "initial_step must be positive");
    }
};

struct CertificateOutcome {
    Verdict verdict = Verdict::Inconclusive;
    std::optional<DensityMatrix> witness;       ///< second state (UDA falsification)
    std::optional<PureState> pure_witness;      ///< second pure state (UDP falsification)
    std::string evidence;
    double residual = 0.0;   ///< measurement residual of the witness / best candidate
    double distance = 0.0;   ///< Frobenius distance of the witness from the query projector
    std::size_t iterations = 0;
    std::size_t monotonicity_violations = 0;
    std::size_t unconverged_restarts = 0;  ///< hit the iteration limit
    std::size_t anchored_restarts = 0;     ///< contracted onto the query state
    RealVector restart_distances;  ///< per restart, distance of the final iterate from the query
    RealVector restart_residuals;
    std::vector<bool> restart_converged;  ///< met the stopping rule (anchored runs count as converged)

    bool falsified() const noexcept { return verdict == Verdict::Falsified; }
};

namespace detail {

template <class Fn>
auto run_restarts(std::size_t count, std::size_t threads, Fn fn) {
    using R = decltype(fn(std::size_t{0}));
    std::vector<R> out;
    out.reserve(count);
    if (threads <= 1) {
        for (std::size_t r = 0; r < count; ++r) out.push_back(fn(r));
        return out;
    }
    for (std::size_t base = 0; base < count; base += threads) {
        std::vector<std::future<R>> batch;
        for (std::size_t r = base; r < std::min(count, base + threads); ++r)
            batch.push_back(std::async(std::launch::async, fn, r));
        for (auto& f : batch) out.push_back(f.get());
    }
    return out;
}

}  // namespace detail

/// Projection onto the PSD cone: negative eigenvalues clipped to zero.
inline ComplexMatrix project_psd(const ComplexMatrix& x) {
    const auto es = eigh(x);
    const std::size_t n = x.rows();
    ComplexMatrix out(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double lam = es.values[k];
        if (lam <= 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) {
            const cd vi = es.vectors(i, k) * lam;
            for (std::size_t j = 0; j < n; ++j) out(i, j) += vi * std::conj(es.vectors(j, k));
        }
    }
    return out;
}

/// Orthogonal projection onto {X Hermitian : tr X = 1, tr(A_i X) = b_i}.
/// The constraint normals {I, A_i} are orthonormalized once (a QR
/// factorization of the constraint Gram matrix), after which a projection
/// is a handful of inner products.
class AffineMeasurementSet {
public:
    AffineMeasurementSet(const ObservableSet& a, const MeasurementVector& target) : a_(a), target_(target) {
        require(target.values.size() == a.size(), ErrorCode::DimensionMismatch, "target length differs from observable count");
        const std::size_t d = a.d;
        std::vector<RealVector> normals;
        std::vector<double> values;
        normals.push_back(to_real_vector(ComplexMatrix::identity(d)));
        values.push_back(1.0);
        for (std::size_t i = 0; i < a.size(); ++i) {
            normals.push_back(to_real_vector(a.observables[i].matrix()));
            values.push_back(target.values[i]);
        }
        // Gram-Schmidt carrying the right-hand sides along.
        for (std::size_t i = 0; i < normals.size(); ++i) {
            RealVector v = normals[i];
            double c = values[i];
            const double n0 = norm2(v);
            for (int pass = 0; pass < 2; ++pass)
                for (std::size_t j = 0; j < q_.size(); ++j) {
                    const double p = dot(q_[j], v);
                    for (std::size_t t = 0; t < v.size(); ++t) v[t] -= p * q_[j][t];
                    c -= p * rhs_[j];
                }
            const double n1 = norm2(v);
            if (n1 <= 1e-12 * n0) continue;
            for (auto& x : v) x /= n1;
            q_.push_back(std::move(v));
            rhs_.push_back(c / n1);
        }
        d_ = d;
    }

    ComplexMatrix project(const ComplexMatrix& x) const {
        RealVector v = to_real_vector(x);
        for (std::size_t j = 0; j < q_.size(); ++j) {
            const double excess = dot(q_[j], v) - rhs_[j];
            for (std::size_t t = 0; t < v.size(); ++t) v[t] -= excess * q_[j][t];
        }
        return from_real_vector(v, d_);
    }

    /// max(|tr X - 1|, max_i |tr(A_i X) - b_i|)
    double residual(const ComplexMatrix& x) const {
        double r = std::abs(x.trace().real() - 1.0);
        for (std::size_t i = 0; i < a_.size(); ++i)
            r = std::max(r, std::abs(hs_inner(a_.observables[i].matrix(), x).real() - target_.values[i]));
        return r;
    }

private:
    const ObservableSet& a_;
    MeasurementVector target_;
    std::vector<RealVector> q_;
    RealVector rhs_;
    std::size_t d_ = 0;
};

struct ProjectionRun {
    ComplexMatrix point;  ///< final PSD iterate
    double residual = 0.0;
    std::size_t iterations = 0;
    std::size_t monotonicity_violations = 0;
    bool converged = false;
    bool anchored = false;  ///< stopped early: the limit lies within anchor_radius of the anchor
};

/// Alternating projections from `start` between the PSD cone and the affine
/// measurement set (with Dykstra's correction term unless `scheme` is
/// Alternating). Stops once the PSD iterate satisfies the constraints to
/// `tol` and moves less than tol between sweeps.
///
/// With the Alternating scheme and an anchor known to be feasible, the
/// distance of the iterates to the anchor never increases, so the run stops
/// as soon as it is within anchor_radius.
inline ProjectionRun alternating_projections(const AffineMeasurementSet& affine, const ComplexMatrix& start,
                                             std::size_t max_iterations, double tol,
                                             ProjectionScheme scheme = ProjectionScheme::Dykstra,
                                             const ComplexMatrix* anchor = nullptr, double anchor_radius = 0.0) {
    const std::size_t n = start.rows();
    const bool use_anchor = anchor != nullptr && scheme == ProjectionScheme::Alternating;
    ComplexMatrix x = affine.project(start);
    ComplexMatrix p(n, n);
    ComplexMatrix y_prev;
    ProjectionRun run;
    double prev_gap = INFINITY;
    for (std::size_t it = 0; it < max_iterations; ++it) {
        ComplexMatrix y = scheme == ProjectionScheme::Dykstra ? project_psd(x + p) : project_psd(x);
        if (scheme == ProjectionScheme::Dykstra) p = x + p - y;
        ComplexMatrix x_next = affine.project(y);
        const double gap = (y - x_next).frobenius_norm();
        if (gap > prev_gap + 1e-12) ++run.monotonicity_violations;
        prev_gap = gap;
        run.iterations = it + 1;
        const double step = y_prev.rows() == n ? (y - y_prev).frobenius_norm() : INFINITY;
        y_prev = y;
        x = std::move(x_next);
        if (gap <= 0.1 * tol && step <= 0.1 * tol) {
            run.converged = true;
            break;
        }
        if (use_anchor && (y_prev - *anchor).frobenius_norm() < anchor_radius) {
            run.anchored = true;
            break;
        }
    }
    run.point = std::move(y_prev);
    run.residual = affine.residual(run.point);
    return run;
}

namespace detail {

struct StructuralResult {
    bool certified = false;
    std::string evidence;
};

inline StructuralResult structural_certificate(const ObservableSet& a, const FeasibilityConfig& cfg) {
    const auto span = a.traceless_span();
    const auto perp = orthocomplement(span);
    StructuralResult out;
    if (perp.dim() == 0) {
        out.certified = true;
        out.evidence = "observables span every traceless operator; measurement determines the state";
        return out;
    }
    if (a.origin != ObservableOrigin::UdaConstruction) return out;
    Rng rng(cfg.seed ^ 0x5eedULL);
    std::normal_distribution<double> g(0.0, 1.0);
    const std::size_t samples = cfg.restarts * cfg.structural_samples;
    double worst = INFINITY;
    for (std::size_t s = 0; s < samples; ++s) {
        ComplexMatrix v(a.d, a.d);
        for (const auto& b : perp.basis()) v.axpy(g(rng), b.matrix());
        const auto w = eigvalsh(v);
        const double norm = std::max(std::abs(w.front()), std::abs(w.back()));
        const double margin = std::min(w[a.d - 2], -w[1]) / norm;
        worst = std::min(worst, margin);
        if (margin <= kDefaultSignatureTol) return out;
    }
    std::ostringstream os;
    os << "all " << samples << " sampled complement operators have >= 2 positive and >= 2 negative eigenvalues"
       << " (min relative margin " << worst << ")";
    out.certified = true;
    out.evidence = os.str();
    return out;
}

}  // namespace detail

/// The projection half of uda_certify on its own: never certifies, only
/// falsifies or reports Inconclusive.
inline CertificateOutcome uda_falsify(const PureState& psi, const ObservableSet& a, const FeasibilityConfig& cfg = {}) {
    cfg.validate();
    require(psi.dim() == a.d, ErrorCode::DimensionMismatch, "state and observables differ in dimension");
    const ComplexMatrix target = psi.projector();
    const auto b = measure(a, psi);
    const AffineMeasurementSet affine(a, b);

    auto runs = detail::run_restarts(cfg.restarts, cfg.threads, [&](std::size_t r) {
        Rng rng(cfg.seed + r);
        const auto start = random_density(a.d, a.d, rng);
        return alternating_projections(affine, start.matrix(), cfg.max_iterations, cfg.constraint_tol, cfg.scheme,
                                       &target, 0.5 * cfg.distinctness_tol);
    });

    CertificateOutcome out;
    double best_residual = INFINITY;
    for (std::size_t r = 0; r < runs.size(); ++r) {
        const auto& run = runs[r];
        out.iterations += run.iterations;
        out.monotonicity_violations += run.monotonicity_violations;
        const double dist = (run.point - target).frobenius_norm();
        out.restart_distances.push_back(dist);
        out.restart_residuals.push_back(run.residual);
        out.restart_converged.push_back(run.converged || run.anchored);
        best_residual = std::min(best_residual, run.residual);
        if (run.anchored) ++out.anchored_restarts;
        else if (!run.converged) ++out.unconverged_restarts;
        if (out.verdict != Verdict::Falsified && run.residual < cfg.constraint_tol && dist > cfg.distinctness_tol) {
            const double tr = run.point.trace().real();
            auto sigma = DensityMatrix::normalized(run.point);
            out.verdict = Verdict::Falsified;
            out.residual = affine.residual(sigma.matrix());
            out.distance = (sigma.matrix() - target).frobenius_norm();
            std::ostringstream os;
            os << "restart " << r << " reached a PSD point with residual " << run.residual << " (trace " << tr
               << ") at distance " << dist << " from the query state";
            out.evidence = os.str();
            out.witness = std::move(sigma);
        }
    }
    if (out.verdict != Verdict::Falsified) {
        std::ostringstream os;
        os << "no second compatible state in " << runs.size() << " restarts";
        if (out.anchored_restarts) os << "; " << out.anchored_restarts << " restarts contracted onto the query state";
        if (out.unconverged_restarts)
            os << "; " << out.unconverged_restarts << " restarts hit the iteration limit (best residual " << best_residual << ")";
        out.evidence = os.str();
        out.residual = best_residual;
    }
    return out;
}

/// UDA decision for a pure state: structural certificate when available,
/// otherwise a Dykstra search for a second compatible state.
inline CertificateOutcome uda_certify(const PureState& psi, const ObservableSet& a, const FeasibilityConfig& cfg = {}) {
    cfg.validate();
    require(psi.dim() == a.d, ErrorCode::DimensionMismatch, "state and observables differ in dimension");
    CertificateOutcome out;
    if (const auto s = detail::structural_certificate(a, cfg); s.certified) {
        out.verdict = Verdict::CertifiedUnique;
        out.evidence = s.evidence;
        return out;
    }
    return uda_falsify(psi, a, cfg);
}

// ---------------------------------------------------------------------------
// Pure-state search

namespace detail {

struct PureObjective {
    const ObservableSet& a;
    const RealVector& b;

    /// residuals <phi|A_i|phi> - b_i for a unit phi
    RealVector residuals(std::span<const cd> phi) const {
        RealVector e(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            const auto av = a.observables[i].matrix() * phi;
            e[i] = vdot(phi, av).real() - b[i];
        }
        return e;
    }
    double value(std::span<const cd> phi) const {
        const auto e = residuals(phi);
        return dot(e, e);
    }
};

inline void normalize(ComplexVector& v) {
    const double n = vnorm(v);
    for (auto& z : v) z /= n;
}

/// Gradient steps then damped Gauss-Newton (minimum-norm steps, damping
/// equal to the residual norm), each with a backtracking line search that
/// halves from a unit step.
struct SphereSearch {
    std::size_t gradient_iterations = 50;
    std::size_t newton_iterations = 300;
    double initial_step = 1.0;
    std::size_t max_halvings = 40;
    double target = 0.0;
};

inline ComplexVector minimize_on_sphere(const PureObjective& obj, ComplexVector phi, const SphereSearch& opt,
                                        std::size_t& iterations) {
    const std::size_t d = phi.size();
    const std::size_t m = obj.a.size();
    normalize(phi);
    double f = obj.value(phi);

    auto tangent = [&](ComplexVector g) {
        const cd overlap = vdot(phi, g);
        for (std::size_t k = 0; k < d; ++k) g[k] -= overlap.real() * phi[k];
        return g;
    };
    auto line_search = [&](const ComplexVector& dir) {
        double t = opt.initial_step;
        for (std::size_t h = 0; h <= opt.max_halvings; ++h, t *= 0.5) {
            ComplexVector trial(d);
            for (std::size_t k = 0; k < d; ++k) trial[k] = phi[k] + t * dir[k];
            normalize(trial);
            const double ft = obj.value(trial);
            if (ft < f) {
                phi = std::move(trial);
                f = ft;
                return true;
            }
        }
        return false;
    };

    for (std::size_t it = 0; it < opt.gradient_iterations && f > opt.target; ++it, ++iterations) {
        const auto e = obj.residuals(phi);
        ComplexVector g(d);
        for (std::size_t i = 0; i < m; ++i) {
            const auto av = obj.a.observables[i].matrix() * std::span<const cd>(phi);
            for (std::size_t k = 0; k < d; ++k) g[k] -= 4.0 * e[i] * av[k];
        }
        if (!line_search(tangent(std::move(g)))) break;
    }

    for (std::size_t it = 0; it < opt.newton_iterations && f > opt.target; ++it, ++iterations) {
        const auto e = obj.residuals(phi);
        // Jacobian rows: tangent part of 2 A_i phi
        std::vector<ComplexVector> rows(m);
        for (std::size_t i = 0; i < m; ++i) {
            auto av = obj.a.observables[i].matrix() * std::span<const cd>(phi);
            for (auto& z : av) z *= 2.0;
            rows[i] = tangent(std::move(av));
        }
        const double mu = std::sqrt(f);
        std::vector<RealVector> jjt(m, RealVector(m));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) jjt[i][j] = vdot(rows[i], rows[j]).real() + (i == j ? mu : 0.0);
        RealVector w;
        try {
            w = solve_linear(jjt, e);
        } catch (const Error&) {
            break;
        }
        ComplexVector dir(d);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t k = 0; k < d; ++k) dir[k] -= w[i] * rows[i][k];
        if (!line_search(dir)) break;
    }
    return phi;
}

}  // namespace detail

/// Searches for a second pure state with the same measurements. Candidates
/// with |<phi|psi>|^2 > 1 - distinctness_tol are rejected as the query
/// itself. Never certifies.
inline CertificateOutcome udp_certify(const PureState& psi, const ObservableSet& a, const FeasibilityConfig& cfg = {}) {
    cfg.validate();
    require(psi.dim() == a.d, ErrorCode::DimensionMismatch, "state and observables differ in dimension");
    const auto b = measure(a, psi);
    const detail::PureObjective obj{a, b.values};
    const detail::SphereSearch opt{cfg.gradient_iterations, cfg.newton_iterations, cfg.initial_step, cfg.max_halvings,
                                   1e-4 * cfg.constraint_tol * cfg.constraint_tol};

    struct Candidate {
        ComplexVector phi;
        double objective;
        double fidelity;
        std::size_t iterations;
    };
    auto runs = detail::run_restarts(cfg.restarts, cfg.threads, [&](std::size_t r) {
        Rng rng(cfg.seed + r);
        auto start = gaussian_vector(a.d, rng);
        std::size_t iters = 0;
        auto phi = detail::minimize_on_sphere(obj, std::move(start), opt, iters);
        const double fid = std::norm(vdot(phi, psi.amplitudes()));
        return Candidate{phi, obj.value(phi), fid, iters};
    });

    CertificateOutcome out;
    std::size_t rejected = 0;
    double best_offorbit = INFINITY;
    const ComplexMatrix target_proj = psi.projector();
    for (std::size_t r = 0; r < runs.size(); ++r) {
        const auto& c = runs[r];
        out.iterations += c.iterations;
        const double dist = std::sqrt(std::max(0.0, 2.0 * (1.0 - c.fidelity)));
        out.restart_distances.push_back(dist);
        out.restart_residuals.push_back(std::sqrt(c.objective));
        if (c.fidelity > 1.0 - cfg.distinctness_tol) {
            ++rejected;
            continue;
        }
        best_offorbit = std::min(best_offorbit, c.objective);
        if (out.verdict != Verdict::Falsified && c.objective < cfg.constraint_tol * cfg.constraint_tol) {
            out.verdict = Verdict::Falsified;
            auto w = PureState::normalized(c.phi);
            out.residual = max_abs_difference(measure(a, w), b);
            out.distance = (w.projector() - target_proj).frobenius_norm();
            std::ostringstream os;
            os << "restart " << r << " found a distinct pure preimage (fidelity " << c.fidelity << ", objective "
               << c.objective << ")";
            out.evidence = os.str();
            out.pure_witness = std::move(w);
        }
    }
    if (out.verdict != Verdict::Falsified) {
        std::ostringstream os;
        os << "no distinct pure preimage in " << runs.size() << " restarts (" << rejected
           << " converged to the query state; smallest objective away from it " << best_offorbit << ")";
        out.evidence = os.str();
        out.residual = std::sqrt(best_offorbit);
    }
    return out;
}

// ---------------------------------------------------------------------------

struct GapWitness {
    PureState phi;        ///< eigenvector of the isolated negative eigenvalue
    DensityMatrix mixed;  ///< phi phi^dagger - V / mu
    double mu = 0.0;      ///< isolated eigenvalue of the unit-normalized V
    bool sign_flipped = false;
};

/// Turns a traceless invertible V orthogonal to the observables, with one
/// eigenvalue of isolated sign, into a pure state phi and a distinct mixed
/// state with identical measurements.
inline GapWitness gap_witness(const HermitianMatrix& v, const ObservableSet& a) {
    require(v.dim() == a.d, ErrorCode::DimensionMismatch, "V and observables differ in dimension");
    const double norm = v.matrix().frobenius_norm();
    require(norm > 0.0, ErrorCode::Precondition, "V must be nonzero");
    ComplexMatrix unit = v.matrix() * (1.0 / norm);
    require(std::abs(unit.trace().real()) < 1e-10, ErrorCode::Precondition, "V must be traceless");
    const double leak = a.span().project(unit).frobenius_norm();
    require(leak < 1e-10, ErrorCode::Precondition, "V is not orthogonal to the observables (residual " + std::to_string(leak) + ")");

    auto es = eigh(unit);
    const auto sig = signature_of_values(es.values, kDefaultSignatureTol);
    require(sig.n_zero == 0, ErrorCode::Precondition, "V must be invertible");
    bool flipped = false;
    if (sig.n_minus > sig.n_plus) {
        unit *= cd(-1.0);
        es = eigh(unit);
        flipped = true;
    }
    const auto sig2 = signature_of_values(es.values, kDefaultSignatureTol);
    require(sig2.n_minus == 1, ErrorCode::Precondition,
            "construction needs exactly one eigenvalue of isolated sign; V has signature (" +
                std::to_string(sig.n_plus) + ", " + std::to_string(sig.n_minus) + ")");
    const double mu = es.values[0];
    PureState phi = PureState::normalized(es.vectors.column(0));
    ComplexMatrix rho = phi.projector() - unit * (1.0 / mu);
    return GapWitness{std::move(phi), DensityMatrix(HermitianMatrix::symmetrize(rho)), mu, flipped};
}

// ---------------------------------------------------------------------------

struct GroundStateReport {
    PureState ground_state;
    double energy = 0.0;
    double gap = 0.0;
    CertificateOutcome outcome;
};

/// Ground state of H = sum_i c_i A_i, which must be nondegenerate, and its
/// UDA certificate. A unique ground state is always UDA, so a Falsified
/// verdict here signals a numerical fault.
inline GroundStateReport ground_state_check(std::span<const double> coeffs, const ObservableSet& a,
                                            const FeasibilityConfig& cfg = {}) {
    require(coeffs.size() == a.size(), ErrorCode::DimensionMismatch, "one coefficient per observable");
    ComplexMatrix h(a.d, a.d);
    for (std::size_t i = 0; i < a.size(); ++i) h.axpy(coeffs[i], a.observables[i].matrix());
    const auto es = eigh(h);
    const double norm = std::max(1.0, std::max(std::abs(es.values.front()), std::abs(es.values.back())));
    const double gap = a.d > 1 ? es.values[1] - es.values[0] : INFINITY;
    require(gap > 1e-8 * norm, ErrorCode::Precondition, "degenerate ground space (gap " + std::to_string(gap) + ")");
    GroundStateReport rep{PureState::normalized(es.vectors.column(0)), es.values[0], gap, {}};
    rep.outcome = uda_certify(rep.ground_state, a, cfg);
    return rep;
}

}  // namespace udalab
