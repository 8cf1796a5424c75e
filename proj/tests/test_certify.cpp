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

#include <gtest/gtest.h>

#include "udalab/certify.hpp"

namespace udalab {
namespace {

ObservableSet paulis() { return ObservableSet(2, pauli_matrices()); }

ObservableSet qutrit_block() {
    const auto m = gellmann_matrices(3);
    return ObservableSet(3, {m[0], m[1], m[2]});
}

ComplexMatrix pauli_string(const std::string& s) {
    const auto p = pauli_matrices();
    ComplexMatrix out = ComplexMatrix::identity(1);
    for (char c : s) {
        const ComplexMatrix f = c == 'I' ? ComplexMatrix::identity(2) : p[static_cast<std::size_t>(c - 'X')].matrix();
        out = kron(out, f);
    }
    return out;
}

// All Pauli strings on three qubits of weight 1 or 2.
ObservableSet local_paulis_3q() {
    std::vector<HermitianMatrix> obs;
    const std::string letters = "IXYZ";
    for (char a : letters)
        for (char b : letters)
            for (char c : letters) {
                const std::string s{a, b, c};
                const auto weight = 3 - std::count(s.begin(), s.end(), 'I');
                if (weight == 1 || weight == 2) obs.emplace_back(pauli_string(s));
            }
    return ObservableSet(8, std::move(obs));
}

PureState ghz3(double sign) {
    ComplexVector v(8);
    v[0] = 1.0 / std::sqrt(2.0);
    v[7] = sign / std::sqrt(2.0);
    return PureState(v);
}

// Oracle for any claimed witness: PSD, unit trace, same data, distinct.
void expect_sound(const CertificateOutcome& o, const PureState& psi, const ObservableSet& a, const FeasibilityConfig& cfg) {
    ASSERT_TRUE(o.falsified());
    ASSERT_TRUE(o.witness.has_value());
    const auto w = eigvalsh(o.witness->matrix());
    EXPECT_GT(w.front(), -1e-9);
    EXPECT_NEAR(o.witness->matrix().trace().real(), 1.0, 1e-9);
    const auto want = measure(a, psi);
    const auto got = measure(a, o.witness->matrix());
    EXPECT_LT(max_abs_difference(want, got), 10 * cfg.constraint_tol);
    EXPECT_GT((o.witness->matrix() - psi.projector()).frobenius_norm(), cfg.distinctness_tol);
}

TEST(Measure, PauliExamples) {
    const auto a = paulis();
    const auto z = measure(a, PureState::basis(2, 0)).values;
    EXPECT_NEAR(z[0], 0.0, 1e-15);
    EXPECT_NEAR(z[1], 0.0, 1e-15);
    EXPECT_NEAR(z[2], 1.0, 1e-15);
    const auto plus = measure(a, PureState::normalized({1.0, 1.0})).values;
    EXPECT_NEAR(plus[0], 1.0, 1e-15);
    EXPECT_NEAR(plus[2], 0.0, 1e-15);
    const auto yplus = measure(a, PureState::normalized({1.0, kI})).values;
    EXPECT_NEAR(yplus[1], 1.0, 1e-15);
}

TEST(Measure, PureAndDensityAgree) {
    Rng rng(3);
    for (std::size_t d = 2; d <= 6; ++d) {
        std::vector<HermitianMatrix> obs;
        for (int i = 0; i < 5; ++i) obs.push_back(random_hermitian(d, rng));
        const ObservableSet a(d, obs);
        const auto psi = random_pure(d, rng);
        const auto x = measure(a, psi).values;
        const auto y = measure(a, DensityMatrix::from_pure(psi)).values;
        for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(x[i], y[i], 1e-12);
    }
    EXPECT_THROW(measure(paulis(), PureState::basis(3, 0)), Error);
}

TEST(ProjectionEquivalence, Examples) {
    const auto p = pauli_matrices();
    const ObservableSet xy(2, {p[0], p[1]});
    const auto r0 = DensityMatrix::from_pure(PureState::basis(2, 0));
    const auto r1 = DensityMatrix::from_pure(PureState::basis(2, 1));
    auto e = projection_equivalence_check(xy, r0, r1);
    EXPECT_TRUE(e.by_measurement);
    EXPECT_TRUE(e.by_projection);
    e = projection_equivalence_check(paulis(), r0, r1);
    EXPECT_FALSE(e.by_measurement);
    EXPECT_FALSE(e.by_projection);
}

TEST(ProjectionEquivalence, BothRoutesAgree) {
    Rng rng(11);
    for (int s = 0; s < 200; ++s) {
        const std::size_t d = 2 + static_cast<std::size_t>(s % 3);
        std::vector<HermitianMatrix> obs;
        for (std::size_t i = 0; i < d; ++i) obs.push_back(random_traceless_hermitian(d, rng));
        const ObservableSet a(d, obs);
        const ComplexMatrix mix = 0.5 * (random_density(d, d, rng).matrix() + DensityMatrix::maximally_mixed(d).matrix());
        const DensityMatrix r1(HermitianMatrix::symmetrize(mix));
        // Half the pairs differ only by a traceless operator orthogonal to A.
        DensityMatrix r2 = random_density(d, d, rng);
        if (s % 2 == 0) {
            const auto perp = complement_in_traceless(d, a.span().real_basis());
            ComplexMatrix m = r1.matrix() + (0.1 / static_cast<double>(d)) * perp.basis().front().matrix();
            r2 = DensityMatrix(HermitianMatrix::symmetrize(m));
        }
        const auto e = projection_equivalence_check(a, r1, r2);
        EXPECT_TRUE(e.agree());
        EXPECT_EQ(e.by_measurement, s % 2 == 0);
    }
}

TEST(UdaCertify, FullTomographyIsCertified) {
    const ObservableSet a(3, gellmann_matrices(3));
    Rng rng(1);
    const auto o = uda_certify(random_pure(3, rng), a);
    EXPECT_EQ(o.verdict, Verdict::CertifiedUnique);
    EXPECT_FALSE(o.evidence.empty());
}

TEST(UdaCertify, QutritBlockIsFalsified) {
    const auto a = qutrit_block();
    FeasibilityConfig cfg;
    cfg.restarts = 10;
    const auto psi = PureState::basis(3, 2);
    const auto o = uda_certify(psi, a, cfg);
    expect_sound(o, psi, a, cfg);
    // the {|0>, |1>} block of any preimage is proportional to the identity
    const auto& w = o.witness->matrix();
    EXPECT_NEAR(std::abs(w(0, 1)), 0.0, 1e-6);
    EXPECT_NEAR(w(0, 0).real(), w(1, 1).real(), 1e-6);
}

TEST(UdaCertify, ConstructedSetNeverFalsified) {
    const auto a = uda_observables(4);
    FeasibilityConfig cfg;
    cfg.restarts = 5;
    Rng rng(4);
    for (int s = 0; s < 50; ++s) {
        cfg.seed = static_cast<std::uint64_t>(s);
        const auto psi = random_pure(4, rng);
        EXPECT_NE(uda_certify(psi, a, cfg).verdict, Verdict::Falsified);
        const auto o = uda_falsify(psi, a, cfg);
        EXPECT_NE(o.verdict, Verdict::Falsified) << o.evidence;
        for (double dist : o.restart_distances) EXPECT_LT(dist, 1e-3);
    }
}

TEST(UdaCertify, DiagonalSetWitnessesAreSound) {
    // Diagonal observables only see populations.
    const auto m = gellmann_matrices(3);
    const ObservableSet a(3, {m[2], m[7]});
    FeasibilityConfig cfg;
    cfg.restarts = 10;
    Rng rng(9);
    for (int s = 0; s < 10; ++s) {
        const auto psi = random_pure(3, rng);
        expect_sound(uda_falsify(psi, a, cfg), psi, a, cfg);
    }
}

TEST(UdaCertify, Preconditions) {
    FeasibilityConfig cfg;
    cfg.restarts = 0;
    EXPECT_THROW(uda_certify(PureState::basis(2, 0), paulis(), cfg), Error);
    EXPECT_THROW(uda_certify(PureState::basis(3, 0), paulis()), Error);
    cfg = {};
    cfg.constraint_tol = 0.0;
    EXPECT_THROW(udp_certify(PureState::basis(2, 0), paulis(), cfg), Error);
}

TEST(UdpCertify, QubitPaulisDetermineState) {
    FeasibilityConfig cfg;
    cfg.restarts = 20;
    Rng rng(2);
    for (int s = 0; s < 5; ++s) EXPECT_NE(udp_certify(random_pure(2, rng), paulis(), cfg).verdict, Verdict::Falsified);
}

TEST(UdpCertify, GhzSharesLocalData) {
    const auto a = local_paulis_3q();
    ASSERT_EQ(a.size(), 36u);
    const auto plus = ghz3(1.0);
    // Oracle: the opposite-phase GHZ state has identical 1- and 2-local data.
    EXPECT_LT(max_abs_difference(measure(a, plus), measure(a, ghz3(-1.0))), 1e-14);
    FeasibilityConfig cfg;
    cfg.restarts = 30;
    const auto o = udp_certify(plus, a, cfg);
    ASSERT_TRUE(o.falsified()) << o.evidence;
    ASSERT_TRUE(o.pure_witness.has_value());
    EXPECT_LT(max_abs_difference(measure(a, *o.pure_witness), measure(a, plus)), 1e-7);
    EXPECT_LT(o.pure_witness->fidelity(plus), 1.0 - cfg.distinctness_tol);
}

TEST(UdpCertify, QutritBlockHasUniquePurePreimage) {
    FeasibilityConfig cfg;
    cfg.restarts = 50;
    const auto o = udp_certify(PureState::basis(3, 2), qutrit_block(), cfg);
    EXPECT_NE(o.verdict, Verdict::Falsified);
}

TEST(Consistency, UdaCertifiedImpliesNoPureWitness) {
    const auto a = uda_observables(5);
    FeasibilityConfig cfg;
    cfg.restarts = 20;
    Rng rng(6);
    for (int s = 0; s < 10; ++s) {
        const auto psi = random_pure(5, rng);
        ASSERT_EQ(uda_certify(psi, a, cfg).verdict, Verdict::CertifiedUnique);
        EXPECT_NE(udp_certify(psi, a, cfg).verdict, Verdict::Falsified);
    }
}

TEST(Projections, DykstraReachesNearestFeasiblePoint) {
    // Fixed <Z> = 0.2 on a qubit: the feasible states keep the diagonal
    // (0.6, 0.4) and an off-diagonal entry of modulus at most sqrt(0.24).
    const auto p = pauli_matrices();
    const ObservableSet a(2, {p[2]});
    const AffineMeasurementSet affine(a, MeasurementVector{{0.2}});
    ComplexMatrix start(2, 2);
    start(0, 0) = 0.9;
    start(1, 1) = 0.1;
    start(0, 1) = cd(0.9, 0.3);
    start(1, 0) = std::conj(start(0, 1));
    const auto run = alternating_projections(affine, start, 20000, 1e-12, ProjectionScheme::Dykstra);
    EXPECT_TRUE(run.converged);
    const cd c = start(0, 1) * (std::sqrt(0.24) / std::abs(start(0, 1)));
    EXPECT_NEAR(run.point(0, 0).real(), 0.6, 1e-8);
    EXPECT_NEAR(run.point(1, 1).real(), 0.4, 1e-8);
    EXPECT_NEAR(std::abs(run.point(0, 1) - c), 0.0, 1e-6);
}

TEST(Projections, AlternatingGapIsMonotone) {
    Rng rng(5);
    for (int s = 0; s < 20; ++s) {
        const std::size_t d = 3 + static_cast<std::size_t>(s % 3);
        std::vector<HermitianMatrix> obs;
        for (std::size_t i = 0; i < d; ++i) obs.push_back(random_traceless_hermitian(d, rng));
        const ObservableSet a(d, obs);
        const AffineMeasurementSet affine(a, measure(a, random_pure(d, rng)));
        const auto run = alternating_projections(affine, random_density(d, d, rng).matrix(), 2000, 1e-10,
                                                 ProjectionScheme::Alternating);
        EXPECT_EQ(run.monotonicity_violations, 0u);
    }
}

TEST(GapWitness, QutritDiagonalExample) {
    const auto a = qutrit_block();
    const auto v = HermitianMatrix::diagonal(std::vector<double>{1.0, 1.0, -2.0});
    const auto gw = gap_witness(v, a);
    EXPECT_NEAR(gw.mu, -2.0 / std::sqrt(6.0), 1e-12);
    EXPECT_NEAR(gw.phi.fidelity(PureState::basis(3, 2)), 1.0, 1e-12);
    EXPECT_FALSE(gw.sign_flipped);
    // rho = |2><2| + diag(1,1,-2)/2 = diag(1/2, 1/2, 0)
    const auto want = HermitianMatrix::diagonal(std::vector<double>{0.5, 0.5, 0.0});
    EXPECT_LT((gw.mixed.matrix() - want.matrix()).max_abs(), 1e-12);
}

TEST(GapWitness, ScaleAndSignInvariant) {
    const auto a = qutrit_block();
    const auto v = HermitianMatrix::diagonal(std::vector<double>{1.0, 1.0, -2.0});
    const auto base = gap_witness(v, a);
    for (double s : {1e-3, 7.0, -1.0, -50.0}) {
        const auto g = gap_witness(HermitianMatrix(v.matrix() * cd(s)), a);
        EXPECT_LT((g.mixed.matrix() - base.mixed.matrix()).max_abs(), 1e-10) << s;
        EXPECT_EQ(g.sign_flipped, s < 0);
    }
}

TEST(GapWitness, RandomPerpendicularOperators) {
    // V = U diag(-x, y_1..y_{d-1}) U^dagger, then A spans a subspace of V's
    // orthocomplement. The witness must reproduce the measurements of phi.
    Rng rng(12);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    for (int s = 0; s < 50; ++s) {
        const std::size_t d = 3 + static_cast<std::size_t>(s % 4);
        RealVector diag(d);
        double sum = 0.0;
        for (std::size_t i = 1; i < d; ++i) sum += diag[i] = u(rng);
        diag[0] = -sum;
        const auto uu = random_unitary(d, rng);
        const HermitianMatrix v = HermitianMatrix::symmetrize(uu * ComplexMatrix::diagonal(diag) * uu.adjoint());
        const OperatorSubspace vs = OperatorSubspace::span_of(d, std::vector<HermitianMatrix>{v});
        std::vector<HermitianMatrix> obs;
        for (int i = 0; i < 4; ++i) {
            const auto h = random_hermitian(d, rng);
            obs.push_back(HermitianMatrix::symmetrize(h.matrix() - vs.project(h.matrix())));
        }
        const ObservableSet a(d, obs);
        const auto gw = gap_witness(v, a);
        EXPECT_GT(eigvalsh(gw.mixed.matrix()).front(), -1e-10);
        EXPECT_LT(max_abs_difference(measure(a, gw.phi), measure(a, gw.mixed)), 1e-10);
        EXPECT_GT((gw.mixed.matrix() - gw.phi.projector()).frobenius_norm(), 0.1);
    }
}

TEST(GapWitness, Preconditions) {
    const auto a = qutrit_block();
    EXPECT_THROW(gap_witness(HermitianMatrix::diagonal(std::vector<double>{1.0, 1.0, 1.0}), a), Error);
    EXPECT_THROW(gap_witness(HermitianMatrix::diagonal(std::vector<double>{1.0, -1.0, 0.0}), a), Error);
    EXPECT_THROW(gap_witness(HermitianMatrix::zero(3), a), Error);
    // traceless and invertible, but two of each sign
    EXPECT_THROW(gap_witness(HermitianMatrix::diagonal(std::vector<double>{1.0, 1.0, -1.0, -1.0}), ObservableSet(4, {})),
                 Error);
}

TEST(GroundState, PauliZ) {
    const auto p = pauli_matrices();
    const ObservableSet a(2, {p[2]});
    FeasibilityConfig cfg;
    cfg.restarts = 5;
    const auto rep = ground_state_check(std::vector<double>{1.0}, a, cfg);
    EXPECT_NEAR(rep.ground_state.fidelity(PureState::basis(2, 1)), 1.0, 1e-12);
    EXPECT_NEAR(rep.energy, -1.0, 1e-12);
    EXPECT_NEAR(rep.gap, 2.0, 1e-12);
    EXPECT_NE(rep.outcome.verdict, Verdict::Falsified);
}

TEST(GroundState, NeverFalsified) {
    Rng rng(21);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<HermitianMatrix> obs;
    for (int i = 0; i < 4; ++i) obs.push_back(random_hermitian(4, rng));
    const ObservableSet a(4, obs);
    FeasibilityConfig cfg;
    cfg.restarts = 4;
    cfg.max_iterations = 2000;
    for (int s = 0; s < 20; ++s) {
        const std::vector<double> c{g(rng), g(rng), g(rng), g(rng)};
        const auto rep = ground_state_check(c, a, cfg);
        EXPECT_NE(rep.outcome.verdict, Verdict::Falsified) << rep.outcome.evidence;
    }
    const auto m3 = ground_state_check(std::vector<double>{0.0, 0.0, 1.0}, qutrit_block(), cfg);
    EXPECT_NEAR(m3.ground_state.fidelity(PureState::basis(3, 1)), 1.0, 1e-12);
    EXPECT_NE(m3.outcome.verdict, Verdict::Falsified);
}

TEST(GroundState, Preconditions) {
    const auto p = pauli_matrices();
    EXPECT_THROW(ground_state_check(std::vector<double>{1.0, 1.0}, ObservableSet(2, {p[2]})), Error);
    EXPECT_THROW(ground_state_check(std::vector<double>{0.0}, ObservableSet(2, {p[2]})), Error);
}

}  // namespace
}  // namespace udalab
