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

#include "udalab/core.hpp"

namespace udalab {
namespace {

double max_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).max_abs(); }

TEST(GellMann, QubitBasisIsPauli) {
    const auto b = gellmann_basis(2);
    const auto p = pauli_matrices();
    ASSERT_EQ(b.elements.size(), 4u);
    for (int i = 0; i < 3; ++i) EXPECT_EQ(max_diff(b.elements[i + 1].matrix(), p[i].matrix()), 0.0);
}

TEST(GellMann, QutritLastElementIsDiag112) {
    const auto b = gellmann_basis(3);
    ComplexMatrix want(3, 3);
    want(0, 0) = 1.0;
    want(1, 1) = 1.0;
    want(2, 2) = -2.0;
    EXPECT_LT(max_diff(b.elements[8].matrix(), want), 1e-14);
    // and sqrt(3) times the standard M8
    EXPECT_LT(max_diff(b.elements[8].matrix(), std::sqrt(3.0) * gellmann_matrices(3)[7].matrix()), 1e-14);
}

TEST(GellMann, Orthogonality) {
    for (std::size_t d = 2; d <= 6; ++d) {
        const auto b = gellmann_basis(d);
        ASSERT_EQ(b.elements.size(), d * d);
        const double dd = static_cast<double>(d);
        for (std::size_t i = 0; i < b.elements.size(); ++i)
            for (std::size_t j = 0; j < b.elements.size(); ++j)
                EXPECT_NEAR(hs(b.elements[i], b.elements[j]), i == j ? dd * (dd - 1.0) : 0.0, 1e-10) << d << " " << i << " " << j;
        for (std::size_t i = 1; i < b.elements.size(); ++i) EXPECT_NEAR(b.elements[i].trace(), 0.0, 1e-14);
    }
}

TEST(GellMann, StandardMatricesHaveTraceTwo) {
    const auto m = gellmann_matrices(4);
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) EXPECT_NEAR(hs(m[i], m[j]), i == j ? 2.0 : 0.0, 1e-12);
}

TEST(Bloch, MaximallyMixedIsOrigin) {
    for (std::size_t d = 2; d <= 5; ++d) {
        const auto r = bloch_decompose(DensityMatrix::maximally_mixed(d), gellmann_basis(d));
        for (double x : r.r) EXPECT_NEAR(x, 0.0, 1e-15);
        const auto back = bloch_compose(BlochVector{d, RealVector(d * d - 1, 0.0)}, gellmann_basis(d));
        EXPECT_LT(max_diff(back.matrix(), DensityMatrix::maximally_mixed(d).matrix()), 1e-15);
    }
}

TEST(Bloch, QubitExamples) {
    const auto b = gellmann_basis(2);
    const auto r = bloch_decompose(DensityMatrix::from_pure(PureState::basis(2, 0)), b);
    EXPECT_NEAR(r.r[0], 0.0, 1e-15);
    EXPECT_NEAR(r.r[1], 0.0, 1e-15);
    EXPECT_NEAR(r.r[2], 1.0, 1e-15);
    const auto plus = bloch_compose(BlochVector{2, {1.0, 0.0, 0.0}}, b);
    EXPECT_LT(max_diff(plus.matrix(), PureState::normalized({1.0, 1.0}).projector()), 1e-15);
}

TEST(Bloch, RoundTrip) {
    for (std::size_t d = 2; d <= 6; ++d) {
        const auto b = gellmann_basis(d);
        Rng rng(d);
        for (int s = 0; s < 100; ++s) {
            const auto rho = random_density(d, 1 + s % d, rng);
            const auto back = bloch_compose(bloch_decompose(rho, b), b);
            ASSERT_LT(max_diff(back.matrix(), rho.matrix()), 1e-10);
        }
    }
}

TEST(Bloch, PureStatesHaveUnitLength) {
    for (std::size_t d = 2; d <= 6; ++d) {
        const auto b = gellmann_basis(d);
        Rng rng(10 + d);
        for (int s = 0; s < 50; ++s) {
            const auto r = bloch_decompose(DensityMatrix::from_pure(random_pure(d, rng)), b);
            EXPECT_NEAR(norm2(r.r), 1.0, 1e-10);
        }
    }
}

TEST(Bloch, UnitVectorNeedNotBeAState) {
    const auto b = gellmann_basis(3);
    Rng rng(3);
    std::normal_distribution<double> g(0.0, 1.0);
    double lowest = INFINITY;
    for (int s = 0; s < 200; ++s) {
        RealVector r(8);
        for (auto& x : r) x = g(rng);
        const double n = norm2(r);
        for (auto& x : r) x /= n;
        lowest = std::min(lowest, eigvalsh(bloch_compose(BlochVector{3, r}, b).matrix()).front());
    }
    EXPECT_LT(lowest, -1e-6);
}

// Traceless observables: tr(A rho) = (d - 1) r.alpha, no constant offset.
TEST(Bloch, ExpectationIdentity) {
    for (std::size_t d = 2; d <= 5; ++d) {
        const auto b = gellmann_basis(d);
        Rng rng(20 + d);
        for (int s = 0; s < 20; ++s) {
            const auto rho = random_density(d, d, rng);
            const auto a = random_traceless_hermitian(d, rng);
            const auto r = bloch_decompose(rho, b);
            const auto alpha = bloch_coefficients(a, b);
            EXPECT_NEAR(expectation(a, rho), (static_cast<double>(d) - 1.0) * dot(r.r, alpha), 1e-12);
        }
    }
}

TEST(Expectation, Examples) {
    Rng rng(1);
    const auto rho = random_density(3, 2, rng);
    EXPECT_NEAR(expectation(HermitianMatrix::identity(3), rho), 1.0, 1e-14);
    EXPECT_EQ(expectation(pauli_matrices()[2], DensityMatrix::from_pure(PureState::basis(2, 0))), 1.0);
    EXPECT_EQ(expectation(pauli_matrices()[2], PureState::basis(2, 0)), 1.0);
}

TEST(Eigen, DiagonalSorted) {
    const auto es = eig_hermitian(HermitianMatrix::diagonal(std::vector<double>{3.0, 1.0, 2.0}));
    EXPECT_NEAR(es.values[0], 1.0, 1e-15);
    EXPECT_NEAR(es.values[1], 2.0, 1e-15);
    EXPECT_NEAR(es.values[2], 3.0, 1e-15);
}

TEST(Eigen, PauliX) {
    const auto es = eig_hermitian(pauli_matrices()[0]);
    EXPECT_NEAR(es.values[0], -1.0, 1e-15);
    EXPECT_NEAR(es.values[1], 1.0, 1e-15);
    const auto minus = PureState::normalized({1.0, -1.0});
    const auto plus = PureState::normalized({1.0, 1.0});
    EXPECT_NEAR(minus.fidelity(PureState::normalized(es.vectors.column(0))), 1.0, 1e-14);
    EXPECT_NEAR(plus.fidelity(PureState::normalized(es.vectors.column(1))), 1.0, 1e-14);
}

// Oracle: residual |H v - l v| and unitarity of V, independent of the solver.
TEST(Eigen, RandomResidualsAndUnitarity) {
    Rng rng(5);
    for (std::size_t d = 2; d <= 12; ++d) {
        const auto h = random_hermitian(d, rng);
        const auto es = eig_hermitian(h);
        for (std::size_t k = 0; k + 1 < d; ++k) EXPECT_LE(es.values[k], es.values[k + 1]);
        EXPECT_LT(max_diff(es.vectors.adjoint() * es.vectors, ComplexMatrix::identity(d)), 1e-12);
        for (std::size_t k = 0; k < d; ++k) {
            const auto v = es.vectors.column(k);
            const auto hv = h.matrix() * v;
            double r = 0.0;
            for (std::size_t i = 0; i < d; ++i) r = std::max(r, std::abs(hv[i] - es.values[k] * v[i]));
            EXPECT_LT(r, 1e-11);
        }
        double tr = 0.0;
        for (double v : es.values) tr += v;
        EXPECT_NEAR(tr, h.trace(), 1e-11);
    }
}

TEST(SignatureTest, Examples) {
    EXPECT_EQ(signature(HermitianMatrix::diagonal(std::vector<double>{1.0, -1.0}), 1e-9), (Signature{1, 1, 0}));
    EXPECT_EQ(signature(HermitianMatrix::zero(5)), (Signature{0, 0, 5}));
    ComplexMatrix h1(4, 4);
    for (std::size_t i = 0; i < 4; ++i) h1(i, 3 - i) = 1.0;
    EXPECT_EQ(signature(HermitianMatrix(h1)), (Signature{2, 2, 0}));
}

TEST(SignatureTest, ToleranceIsRelative) {
    // 1e-7 counts as zero relative to 1e3 but not relative to 1
    EXPECT_EQ(signature(HermitianMatrix::diagonal(std::vector<double>{1e3, 1e-7, -1.0}), 1e-9), (Signature{1, 1, 1}));
    EXPECT_EQ(signature(HermitianMatrix::diagonal(std::vector<double>{1.0, 1e-7, -1.0}), 1e-9), (Signature{2, 1, 0}));
    EXPECT_THROW(signature(HermitianMatrix::zero(2), 0.0), Error);
}

TEST(PartialTrace, ProductState) {
    Rng rng(2);
    const auto a = random_density(2, 2, rng);
    const auto b = random_density(3, 2, rng);
    const auto ab = kron(a.matrix(), b.matrix());
    const std::vector<std::size_t> dims{2, 3};
    EXPECT_LT(max_diff(partial_trace(ab, dims, std::vector<std::size_t>{0}), a.matrix()), 1e-12);
    EXPECT_LT(max_diff(partial_trace(ab, dims, std::vector<std::size_t>{1}), b.matrix()), 1e-12);
}

TEST(PartialTrace, BellState) {
    const auto bell = PureState::normalized({1.0, 0.0, 0.0, 1.0});
    const auto r = partial_trace(DensityMatrix::from_pure(bell), std::vector<std::size_t>{2, 2}, std::vector<std::size_t>{0});
    EXPECT_LT(max_diff(r.matrix(), DensityMatrix::maximally_mixed(2).matrix()), 1e-15);
}

TEST(PartialTrace, GhzAgainstDirectContraction) {
    ComplexVector c(8);
    c[0] = c[7] = 1.0 / std::numbers::sqrt2;
    const auto rho = PureState(c).projector();
    const std::vector<std::size_t> dims{2, 2, 2};
    const auto got = partial_trace(rho, dims, std::vector<std::size_t>{0, 1});
    ComplexMatrix want(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            for (std::size_t k = 0; k < 2; ++k) want(i, j) += c[2 * i + k] * std::conj(c[2 * j + k]);
    EXPECT_LT(max_diff(got, want), 1e-15);
    EXPECT_NEAR(want(0, 0).real(), 0.5, 1e-15);
    EXPECT_NEAR(want(3, 3).real(), 0.5, 1e-15);
}

TEST(PartialTrace, MiddleSubsystemAgainstLoops) {
    Rng rng(9);
    const auto rho = random_density(12, 3, rng).matrix();  // dims 2 x 3 x 2, keep {1}
    const auto got = partial_trace(rho, std::vector<std::size_t>{2, 3, 2}, std::vector<std::size_t>{1});
    ComplexMatrix want(3, 3);
    for (std::size_t b = 0; b < 3; ++b)
        for (std::size_t bp = 0; bp < 3; ++bp)
            for (std::size_t a = 0; a < 2; ++a)
                for (std::size_t c = 0; c < 2; ++c) want(b, bp) += rho((a * 3 + b) * 2 + c, (a * 3 + bp) * 2 + c);
    EXPECT_LT(max_diff(got, want), 1e-14);
}

TEST(PartialTrace, LinearAndTracePreserving) {
    Rng rng(4);
    const std::vector<std::size_t> dims{2, 3, 2};
    const std::vector<std::size_t> keep{0, 2};
    for (int s = 0; s < 20; ++s) {
        const auto x = random_hermitian(12, rng).matrix();
        const auto y = random_hermitian(12, rng).matrix();
        const double a = 0.3 + s, b = -1.7;
        const auto lhs = partial_trace(a * x + b * y, dims, keep);
        const auto rhs = a * partial_trace(x, dims, keep) + b * partial_trace(y, dims, keep);
        EXPECT_LT(max_diff(lhs, rhs), 1e-12);
        EXPECT_NEAR(std::abs(partial_trace(x, dims, keep).trace() - x.trace()), 0.0, 1e-12);
    }
}

TEST(PartialTrace, Errors) {
    const auto rho = DensityMatrix::maximally_mixed(4);
    EXPECT_THROW(partial_trace(rho, std::vector<std::size_t>{2, 3}, std::vector<std::size_t>{0}), Error);
    EXPECT_THROW(partial_trace(rho, std::vector<std::size_t>{2, 2}, std::vector<std::size_t>{}), Error);
    EXPECT_THROW(partial_trace(rho, std::vector<std::size_t>{2, 2}, std::vector<std::size_t>{2}), Error);
}

TEST(Sampling, Deterministic) {
    const auto a = random_pure(5, 42);
    const auto b = random_pure(5, 42);
    for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(a[i], b[i]);
    const auto r1 = random_density(4, 2, 7);
    const auto r2 = random_density(4, 2, 7);
    EXPECT_EQ(max_diff(r1.matrix(), r2.matrix()), 0.0);
    EXPECT_NE(random_pure(5, 43)[0], a[0]);
}

TEST(Sampling, RankAndNorm) {
    for (std::uint64_t s = 0; s < 10; ++s) {
        const auto w = eigvalsh(random_density(4, 2, s).matrix());
        EXPECT_LT(std::abs(w[0]), 1e-8);
        EXPECT_LT(std::abs(w[1]), 1e-8);
        EXPECT_GT(w[2], 1e-8);
        EXPECT_GT(w[3], 1e-8);
        EXPECT_NEAR(vnorm(random_pure(3, s).amplitudes()), 1.0, 1e-12);
    }
}

TEST(Interlacing, Examples) {
    const auto h = HermitianMatrix::diagonal(std::vector<double>{1.0, 2.0, 3.0});
    EXPECT_TRUE(interlacing_check(h, std::vector<std::size_t>{0, 1, 2}));
    const auto sub = eigvalsh(principal_submatrix(h, std::vector<std::size_t>{0, 2}).matrix());
    EXPECT_EQ(sub[0], 1.0);
    EXPECT_EQ(sub[1], 3.0);
    EXPECT_TRUE(interlacing_check(h, std::vector<std::size_t>{0, 2}));
}

TEST(Interlacing, RandomProperty) {
    Rng rng(11);
    std::uniform_int_distribution<std::size_t> dim(1, 8);
    for (int s = 0; s < 1000; ++s) {
        const std::size_t d = dim(rng);
        const auto h = random_hermitian(d, rng);
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < d; ++i)
            if (rng() % 2) rows.push_back(i);
        if (rows.empty()) rows.push_back(0);
        ASSERT_TRUE(interlacing_check(h, rows)) << "d=" << d;
    }
}

TEST(Validation, RejectsBadInputs) {
    ComplexMatrix m(2, 2);
    m(0, 1) = 1.0;
    try {
        HermitianMatrix h(m);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotHermitian);
    }
    try {
        PureState p(ComplexVector{1.0, 1.0});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotNormalized);
    }
    try {
        DensityMatrix r(HermitianMatrix::diagonal(std::vector<double>{1.5, -0.5}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotPositive);
    }
    EXPECT_THROW(gellmann_basis(1), Error);
}

}  // namespace
}  // namespace udalab
