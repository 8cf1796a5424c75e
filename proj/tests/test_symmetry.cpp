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

#include <numbers>

#include "udalab/symmetry.hpp"

namespace udalab {
namespace {

const auto kPauli = pauli_matrices();

SymmetryElement conj_by(const ComplexMatrix& u) { return {u, false}; }

ComplexMatrix perm_matrix(const std::vector<std::size_t>& p) {
    ComplexMatrix m(p.size(), p.size());
    for (std::size_t i = 0; i < p.size(); ++i) m(p[i], i) = 1.0;
    return m;
}

ComplexMatrix diag_pm(std::vector<double> s) { return ComplexMatrix::diagonal(s); }

// Direct group average of x, independent of the superoperator matrix.
ComplexMatrix average_direct(const SymmetryGroup& g, const ComplexMatrix& x) {
    ComplexMatrix out(g.dim(), g.dim());
    for (const auto& e : g.elements()) out += e.apply(x);
    return out * (1.0 / static_cast<double>(g.order()));
}

ObservableSet diagonal_set(std::size_t d) {
    std::vector<HermitianMatrix> obs;
    for (std::size_t k = 0; k + 1 < d; ++k) {
        RealVector v(d);
        v[k] = 1.0;
        obs.push_back(HermitianMatrix::diagonal(v));
    }
    return ObservableSet(d, obs);
}

// M_2 on the first two levels plus the projector onto the third.
ObservableSet block21_set() {
    std::vector<HermitianMatrix> obs;
    for (const auto& p : kPauli) {
        ComplexMatrix m(3, 3);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) m(i, j) = p(i, j);
        obs.emplace_back(m);
    }
    obs.push_back(HermitianMatrix::diagonal(std::vector<double>{0.0, 0.0, 1.0}));
    return ObservableSet(3, obs);
}

TEST(ApplySymmetry, IdentityAndRotation) {
    Rng rng(50);
    const auto rho = random_density(3, 3, rng);
    EXPECT_LT((apply_symmetry(SymmetryElement::identity(3), rho).matrix() - rho.matrix()).max_abs(), 1e-15);
    // rotation about the x axis fixes |+>
    const auto u = unitary_exp(kPauli[0], 0.7);
    const auto plus = DensityMatrix::from_pure(PureState::normalized({1.0, 1.0}));
    EXPECT_LT((apply_symmetry(conj_by(u), plus).matrix() - plus.matrix()).max_abs(), 1e-14);
    const auto zero = DensityMatrix::from_pure(PureState::basis(2, 0));
    EXPECT_GT((apply_symmetry(conj_by(u), zero).matrix() - zero.matrix()).max_abs(), 0.1);
}

TEST(ApplySymmetry, TransposeFlipsY) {
    const auto basis = gellmann_basis(2);
    Rng rng(51);
    for (int s = 0; s < 10; ++s) {
        const auto rho = random_density(2, 2, rng);
        const auto r = bloch_decompose(rho, basis).r;
        const auto t = bloch_decompose(apply_symmetry(SymmetryElement::transpose_map(2), rho), basis).r;
        EXPECT_NEAR(t[0], r[0], 1e-14);
        EXPECT_NEAR(t[1], -r[1], 1e-14);
        EXPECT_NEAR(t[2], r[2], 1e-14);
    }
}

TEST(SymmetryElementTest, ComposeAndInverse) {
    Rng rng(52);
    for (int s = 0; s < 20; ++s) {
        const SymmetryElement g(random_unitary(3, rng), s % 2 == 0);
        const SymmetryElement h(random_unitary(3, rng), s % 3 == 0);
        const auto x = random_hermitian(3, rng).matrix();
        EXPECT_LT((g.compose(h).apply(x) - g.apply(h.apply(x))).max_abs(), 1e-12);
        EXPECT_TRUE(g.compose(g.inverse()).same_action(SymmetryElement::identity(3)));
    }
    // a global phase does not change the action
    EXPECT_TRUE(conj_by(kI * ComplexMatrix::identity(2)).same_action(SymmetryElement::identity(2)));
    EXPECT_THROW(SymmetryElement(ComplexMatrix::diagonal(std::vector<double>{1.0, 2.0}), false), Error);
}

struct GroupCase {
    const char* name;
    SymmetryGroup group;
    std::size_t fixed_dim;
};

std::vector<GroupCase> cases() {
    const auto t2 = SymmetryElement::transpose_map(2);
    return {
        {"qubit transpose (real symmetric)", SymmetryGroup::generate(2, {t2}), 3},
        {"Z flip (diagonal)", SymmetryGroup::generate(2, {conj_by(kPauli[2].matrix())}), 2},
        {"Pauli X, Z (scalars)", SymmetryGroup::generate(2, {conj_by(kPauli[0].matrix()), conj_by(kPauli[2].matrix())}), 1},
        {"qutrit identity", SymmetryGroup::generate(3, {}), 9},
        {"qutrit transpose", SymmetryGroup::generate(3, {SymmetryElement::transpose_map(3)}), 6},
        {"qutrit sign flips (diagonal)",
         SymmetryGroup::generate(3, {conj_by(diag_pm({-1, 1, 1})), conj_by(diag_pm({1, -1, 1}))}), 3},
        {"cyclic shift (circulant)", SymmetryGroup::generate(3, {conj_by(perm_matrix({1, 2, 0}))}), 3},
        {"S3 (aI + bJ)", SymmetryGroup::generate(3, {conj_by(perm_matrix({1, 2, 0})), conj_by(perm_matrix({1, 0, 2}))}), 2},
    };
}

TEST(AverageProjection, FixedDimensionsAndProperties) {
    Rng rng(53);
    for (const auto& c : cases()) {
        SCOPED_TRACE(c.name);
        const auto p = average_projection(c.group);
        const auto defects = projection_defects(c.group, p);
        EXPECT_TRUE(defects.ok()) << defects.idempotence << " " << defects.self_adjoint << " " << defects.invariance;
        const auto fixed = fixed_point_space(c.group);
        EXPECT_EQ(fixed.dim(), c.fixed_dim);
        EXPECT_EQ(projection_image(p).dim(), c.fixed_dim);
        EXPECT_LT(projection_image(p).distance(fixed), 1e-8);
        EXPECT_LT(convex_hull_check(c.group, p).residual, 1e-8);
        for (int s = 0; s < 5; ++s) {
            const auto x = random_hermitian(c.group.dim(), rng).matrix();
            const auto px = p.apply(x);
            EXPECT_LT((px - average_direct(c.group, x)).max_abs(), 1e-12);
            for (const auto& e : c.group.elements()) EXPECT_LT((e.apply(px) - px).max_abs(), 1e-12);
        }
    }
}

TEST(AverageProjection, SignFlipsArePinching) {
    const auto g = SymmetryGroup::generate(3, {conj_by(diag_pm({-1, 1, 1})), conj_by(diag_pm({1, -1, 1}))});
    EXPECT_EQ(g.order(), 4u);
    const std::size_t blocks[] = {1, 1, 1};
    EXPECT_LT(average_projection(g).distance(pinching(blocks)), 1e-12);
    const std::size_t blocks21[] = {2, 1};
    EXPECT_EQ(projection_image(pinching(blocks21)).dim(), 5u);
}

TEST(SymmetryGroupTest, RejectsNonClosedSets) {
    const std::vector<SymmetryElement> partial{SymmetryElement::identity(2), conj_by(kPauli[0].matrix()),
                                               conj_by(unitary_exp(kPauli[2], 0.3))};
    try {
        SymmetryGroup g(partial);
        FAIL() << "expected NonClosedGroup";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NonClosedGroup);
    }
    try {
        SymmetryGroup::generate(2, {conj_by(unitary_exp(kPauli[2], 1.0))}, 50);
        FAIL() << "expected NonClosedGroup";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NonClosedGroup);
    }
}

TEST(Nnls, SmallExamples) {
    const auto r = nnls({{1.0, 0.0}, {0.0, 1.0}}, {1.0, -1.0});
    EXPECT_NEAR(r.x[0], 1.0, 1e-12);
    EXPECT_NEAR(r.x[1], 0.0, 1e-12);
    EXPECT_NEAR(r.residual, 1.0, 1e-12);
    const auto s = nnls({{1.0, 1.0}, {1.0, -1.0}}, {3.0, 1.0});
    EXPECT_NEAR(s.x[0], 2.0, 1e-12);
    EXPECT_NEAR(s.x[1], 1.0, 1e-12);
    EXPECT_LT(s.residual, 1e-12);
}

TEST(Algebra, StarAlgebraExamples) {
    EXPECT_TRUE(is_star_algebra(diagonal_set(4)));
    EXPECT_TRUE(is_star_algebra(ObservableSet(2, {kPauli[0]})));
    EXPECT_FALSE(is_star_algebra(ObservableSet(2, {kPauli[0], kPauli[2]})));
    EXPECT_TRUE(is_star_algebra(block21_set()));
    const auto m = gellmann_matrices(3);
    EXPECT_FALSE(is_star_algebra(ObservableSet(3, {m[0], m[1], m[2]})));
}

TEST(Algebra, CommutantDimensions) {
    EXPECT_EQ(commutant(diagonal_set(3)).dim(), 3u);
    EXPECT_EQ(commutant(ObservableSet(2, kPauli)).dim(), 1u);
    EXPECT_EQ(commutant(block21_set()).dim(), 2u);
    EXPECT_EQ(commutant(ObservableSet(3, {})).dim(), 9u);
    // every basis element commutes with every observable
    const auto a = block21_set();
    const auto c = commutant(a);
    for (const auto& x : c.basis())
        for (const auto& o : a.observables) EXPECT_LT((x * o.matrix() - o.matrix() * x).max_abs(), 1e-10);
}

TEST(Algebra, GeneratedDimensions) {
    EXPECT_EQ(generated_algebra(ObservableSet(2, {kPauli[0]})).dim(), 2u);
    EXPECT_EQ(generated_algebra(ObservableSet(2, {kPauli[0], kPauli[2]})).dim(), 4u);
    EXPECT_EQ(generated_algebra(ObservableSet(4, {HermitianMatrix::diagonal(std::vector<double>{1, 2, 3, 4})})).dim(), 4u);
    EXPECT_EQ(generated_algebra(ObservableSet(4, {HermitianMatrix::diagonal(std::vector<double>{1, 1, 2, 2})})).dim(), 2u);
    EXPECT_EQ(generated_algebra(block21_set()).dim(), 5u);
}

TEST(Algebra, BicommutantIdentity) {
    Rng rng(54);
    const std::vector<ObservableSet> sets{diagonal_set(5), block21_set(), ObservableSet(2, {kPauli[0], kPauli[2]}),
                                          ObservableSet(3, {random_hermitian(3, rng)})};
    for (const auto& a : sets) EXPECT_LT(bicommutant_defect(a), 1e-8);
}

TEST(Certificate, StarAlgebraRoute) {
    for (const auto& a : {diagonal_set(4), block21_set()}) {
        const auto v = udp_implies_uda_via_symmetry(a, 3);
        EXPECT_TRUE(v.certified);
        EXPECT_EQ(v.route, "star-algebra");
        EXPECT_EQ(v.generated_dim, a.d == 4 ? 4u : 5u);
        ASSERT_FALSE(v.evidence.empty());
        for (const auto& u : v.evidence)
            for (const auto& o : a.observables) EXPECT_LT((u.apply(o.matrix()) - o.matrix()).max_abs(), 1e-10);
    }
}

TEST(Certificate, QubitAndNoneRoutes) {
    const auto q = udp_implies_uda_via_symmetry(ObservableSet(2, {kPauli[0], kPauli[2]}));
    EXPECT_TRUE(q.certified);
    EXPECT_EQ(q.route, "qubit");
    const auto m = gellmann_matrices(3);
    const auto n = udp_implies_uda_via_symmetry(ObservableSet(3, {m[0], m[1], m[2]}));
    EXPECT_FALSE(n.certified);
    EXPECT_EQ(n.route, "none");
}

TEST(FixedSet, PureStatesLieInSpan) {
    const auto a = diagonal_set(3);
    const auto states = fixed_set_pure_states(a, 6, 2);
    ASSERT_EQ(states.size(), 6u);
    for (const auto& s : states) {
        double best = 0.0;
        for (std::size_t k = 0; k < 3; ++k) best = std::max(best, s.fidelity(PureState::basis(3, k)));
        EXPECT_NEAR(best, 1.0, 1e-10);
    }
    FeasibilityConfig cfg;
    cfg.restarts = 5;
    cfg.scheme = ProjectionScheme::Alternating;
    cfg.max_iterations = 2000;
    for (const auto& s : fixed_set_pure_states(block21_set(), 5, 4))
        EXPECT_NE(uda_certify(s, block21_set(), cfg).verdict, Verdict::Falsified);
}

TEST(FixedDims, Realizable) {
    EXPECT_EQ(realizable_fixed_dims(4), (std::vector<std::size_t>{1, 2, 3, 4, 6, 8, 10, 16}));
    EXPECT_EQ(realizable_fixed_dims(1), (std::vector<std::size_t>{1}));
    EXPECT_EQ(realizable_fixed_dims(2), (std::vector<std::size_t>{1, 2, 4}));
    EXPECT_THROW(realizable_fixed_dims(0), Error);
}

TEST(QubitClassificationTest, Disc) {
    const ObservableSet a(2, {kPauli[0], kPauli[1]});
    std::vector<PureState> states;
    for (double phi : {0.0, 1.0, 2.5}) states.push_back(PureState::normalized({1.0, std::polar(1.0, phi)}));
    states.push_back(PureState::basis(2, 0));
    states.push_back(PureState::basis(2, 1));
    FeasibilityConfig cfg;
    cfg.restarts = 5;
    const auto c = qubit_classification(a, states, cfg);
    EXPECT_EQ(c.span_dim, 2u);
    EXPECT_EQ(c.fixed_set, "disc");
    EXPECT_TRUE(c.reflection.transpose_flag());
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_TRUE(c.checks[i].on_fixed_set);
        EXPECT_NE(c.checks[i].verdict, Verdict::Falsified);
    }
    for (std::size_t i = 3; i < 5; ++i) {
        EXPECT_FALSE(c.checks[i].on_fixed_set);
        EXPECT_EQ(c.checks[i].verdict, Verdict::Falsified);
        ASSERT_TRUE(c.checks[i].partner.has_value());
        EXPECT_NEAR(c.checks[i].partner->fidelity(PureState::basis(2, 4 - i)), 1.0, 1e-12);
        EXPECT_LT(c.checks[i].partner_residual, 1e-12);
        EXPECT_NEAR(c.checks[i].partner_distance, std::sqrt(2.0), 1e-12);
    }
}

TEST(QubitClassificationTest, DiameterAndBall) {
    Rng rng(55);
    std::vector<PureState> states{PureState::normalized({1.0, 1.0}), PureState::normalized({1.0, -1.0})};
    for (int s = 0; s < 5; ++s) states.push_back(random_pure(2, rng));
    FeasibilityConfig cfg;
    cfg.restarts = 10;
    const auto c = qubit_classification(ObservableSet(2, {kPauli[0]}), states, cfg);
    EXPECT_EQ(c.fixed_set, "diameter");
    EXPECT_FALSE(c.reflection.transpose_flag());
    EXPECT_TRUE(c.checks[0].on_fixed_set);
    EXPECT_TRUE(c.checks[1].on_fixed_set);
    for (std::size_t i = 2; i < states.size(); ++i) {
        EXPECT_EQ(c.checks[i].verdict, Verdict::Falsified);
        EXPECT_LT(c.checks[i].partner_residual, 1e-12);
        EXPECT_GT(c.checks[i].partner_distance, 1e-3);
    }
    const auto ball = qubit_classification(ObservableSet(2, kPauli), states, cfg);
    EXPECT_EQ(ball.fixed_set, "ball");
    for (const auto& ch : ball.checks) EXPECT_TRUE(ch.on_fixed_set);
    EXPECT_EQ(fixed_set_name(0), std::string("centre"));
}

TEST(QubitClassificationTest, RequiresQubit) {
    EXPECT_THROW(qubit_classification(diagonal_set(3), {}), Error);
}

}  // namespace
}  // namespace udalab
