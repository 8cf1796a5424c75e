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

#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "udalab/core.hpp"

namespace udalab {

/// Hermitian d x d matrix as a real 2d^2 vector; the Euclidean dot product
/// of two such vectors equals tr(XY).
inline RealVector to_real_vector(const ComplexMatrix& h) {
    RealVector v;
    v.reserve(2 * h.rows() * h.cols());
    for (const auto& z : h.data()) {
        v.push_back(z.real());
        v.push_back(z.imag());
    }
    return v;
}

inline ComplexMatrix from_real_vector(std::span<const double> v, std::size_t d) {
    require(v.size() == 2 * d * d, ErrorCode::DimensionMismatch, "real vector length must be 2 d^2");
    ComplexMatrix m(d, d);
    for (std::size_t k = 0; k < d * d; ++k) m.data()[k] = cd(v[2 * k], v[2 * k + 1]);
    return m;
}

/// Real subspace of Hermitian matrices with a basis orthonormal under
/// tr(XY).
class OperatorSubspace {
public:
    OperatorSubspace() = default;
    explicit OperatorSubspace(std::size_t d) : d_(d) {}

    /// Orthonormalizes `spanning` (dependent members are dropped).
    static OperatorSubspace span_of(std::size_t d, std::span<const HermitianMatrix> spanning, double drop_tol = 1e-12) {
        OperatorSubspace s(d);
        std::vector<RealVector> cand;
        for (const auto& h : spanning) {
            require(h.dim() == d, ErrorCode::DimensionMismatch, "spanning set dimension mismatch");
            cand.push_back(to_real_vector(h.matrix()));
        }
        gram_schmidt_append(s.vecs_, cand, drop_tol);
        s.rebuild();
        return s;
    }

    std::size_t d() const noexcept { return d_; }
    std::size_t dim() const noexcept { return basis_.size(); }
    const std::vector<HermitianMatrix>& basis() const noexcept { return basis_; }
    const std::vector<RealVector>& real_basis() const noexcept { return vecs_; }

    /// Orthogonal (Hilbert-Schmidt) projection onto the subspace.
    ComplexMatrix project(const ComplexMatrix& x) const {
        const RealVector v = to_real_vector(hermitian_part(x));
        RealVector out(v.size(), 0.0);
        for (const auto& b : vecs_) {
            const double c = dot(b, v);
            for (std::size_t i = 0; i < v.size(); ++i) out[i] += c * b[i];
        }
        return from_real_vector(out, d_);
    }

    /// || x - P x ||_F for Hermitian x
    double residual(const ComplexMatrix& x) const { return (hermitian_part(x) - project(x)).frobenius_norm(); }

    bool contains(const ComplexMatrix& x, double tol = 1e-9) const {
        return residual(x) <= tol * std::max(1.0, x.frobenius_norm());
    }

    /// Largest mutual projection residual between unit basis elements; zero
    /// iff the two subspaces coincide.
    double distance(const OperatorSubspace& other) const {
        if (dim() != other.dim()) return INFINITY;
        double worst = 0.0;
        for (const auto& b : basis_) worst = std::max(worst, other.residual(b.matrix()));
        for (const auto& b : other.basis_) worst = std::max(worst, residual(b.matrix()));
        return worst;
    }

    bool traceless(double tol = 1e-10) const {
        for (const auto& b : basis_)
            if (std::abs(b.trace()) > tol) return false;
        return true;
    }

    /// max_{ij} |tr(B_i B_j) - delta_ij|
    double orthonormality_defect() const {
        double worst = 0.0;
        for (std::size_t i = 0; i < basis_.size(); ++i)
            for (std::size_t j = 0; j < basis_.size(); ++j)
                worst = std::max(worst, std::abs(hs(basis_[i], basis_[j]) - (i == j ? 1.0 : 0.0)));
        return worst;
    }

private:
    void rebuild() {
        basis_.clear();
        for (const auto& v : vecs_) basis_.push_back(HermitianMatrix::symmetrize(from_real_vector(v, d_)));
    }

    std::size_t d_ = 0;
    std::vector<RealVector> vecs_;
    std::vector<HermitianMatrix> basis_;

    friend OperatorSubspace orthocomplement(const OperatorSubspace& s);
    friend OperatorSubspace complement_in_traceless(std::size_t d, std::span<const RealVector> orthonormal);
};

/// Orthonormal completion of an orthonormal traceless family to the whole
/// traceless space; returns only the added vectors.
inline OperatorSubspace complement_in_traceless(std::size_t d, std::span<const RealVector> orthonormal) {
    const auto gm = gellmann_basis(d);
    std::vector<RealVector> work(orthonormal.begin(), orthonormal.end());
    const std::size_t start = work.size();
    std::vector<RealVector> cand;
    for (std::size_t i = 1; i < gm.elements.size(); ++i) cand.push_back(to_real_vector(gm.elements[i].matrix()));
    gram_schmidt_append(work, cand, 1e-12);
    OperatorSubspace out(d);
    out.vecs_.assign(work.begin() + static_cast<std::ptrdiff_t>(start), work.end());
    out.rebuild();
    return out;
}

/// Complement of S inside the traceless Hermitian matrices.
inline OperatorSubspace orthocomplement(const OperatorSubspace& s) {
    require(s.traceless(1e-10), ErrorCode::Precondition, "orthocomplement expects a traceless subspace");
    return complement_in_traceless(s.d(), s.vecs_);
}

}  // namespace udalab
