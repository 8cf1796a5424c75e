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

// JSON interchange. Matrices are {"d": n, "entries": [[re, im], ...]} in
// row-major order, states are {"d": n, "amplitudes": [[re, im], ...]}, and an
// observable file is either a bare array of matrices or an object with an
// "observables" array.
//
// Doubles are written in shortest round-trip form (at most 17 significant
// digits), so identical values always serialize to identical bytes.

#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "udalab/certify.hpp"
#include "udalab/core.hpp"
#include "udalab/observables.hpp"

namespace udalab::io {

using json = nlohmann::ordered_json;

inline json complex_to_json(cd z) { return json::array({z.real(), z.imag()}); }

inline cd complex_from_json(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    require(j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number(), ErrorCode::Parse,
            "complex entry must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline json matrix_to_json(const ComplexMatrix& m) {
    require(m.square(), ErrorCode::DimensionMismatch, "only square matrices are serialized");
    json entries = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) entries.push_back(complex_to_json(m(i, j)));
    return json{{"d", m.rows()}, {"entries", std::move(entries)}};
}

inline json matrix_to_json(const HermitianMatrix& h) { return matrix_to_json(h.matrix()); }

inline ComplexMatrix matrix_from_json(const json& j) {
    require(j.is_object() && j.contains("d") && j.contains("entries"), ErrorCode::Parse,
            "matrix must be an object with \"d\" and \"entries\"");
    require(j["d"].is_number_unsigned() && j["d"].get<std::size_t>() > 0, ErrorCode::Parse, "\"d\" must be a positive integer");
    const auto d = j["d"].get<std::size_t>();
    const auto& e = j["entries"];
    require(e.is_array() && e.size() == d * d, ErrorCode::Parse,
            "\"entries\" must hold d*d = " + std::to_string(d * d) + " values");
    ComplexMatrix m(d, d);
    for (std::size_t k = 0; k < d * d; ++k) m(k / d, k % d) = complex_from_json(e[k]);
    return m;
}

inline HermitianMatrix hermitian_from_json(const json& j) { return HermitianMatrix(matrix_from_json(j)); }

inline json state_to_json(std::span<const cd> amplitudes) {
    json amps = json::array();
    for (cd z : amplitudes) amps.push_back(complex_to_json(z));
    return json{{"d", amplitudes.size()}, {"amplitudes", std::move(amps)}};
}

inline json state_to_json(const PureState& psi) { return state_to_json(psi.amplitudes()); }

inline ComplexVector amplitudes_from_json(const json& j) {
    require(j.is_object() && j.contains("amplitudes"), ErrorCode::Parse, "state must be an object with \"amplitudes\"");
    const auto& a = j["amplitudes"];
    require(a.is_array() && !a.empty(), ErrorCode::Parse, "\"amplitudes\" must be a non-empty array");
    if (j.contains("d"))
        require(j["d"].is_number_unsigned() && j["d"].get<std::size_t>() == a.size(), ErrorCode::Parse,
                "\"d\" does not match the number of amplitudes");
    ComplexVector v;
    v.reserve(a.size());
    for (const auto& z : a) v.push_back(complex_from_json(z));
    return v;
}

inline PureState state_from_json(const json& j) { return PureState(amplitudes_from_json(j)); }

inline json observables_to_json(std::span<const HermitianMatrix> obs) {
    json arr = json::array();
    for (const auto& h : obs) arr.push_back(matrix_to_json(h));
    return arr;
}

inline ObservableSet observables_from_json(const json& j) {
    const json* arr = &j;
    if (j.is_object()) {
        require(j.contains("observables"), ErrorCode::Parse, "observable file needs an \"observables\" array");
        arr = &j["observables"];
    }
    require(arr->is_array() && !arr->empty(), ErrorCode::Parse, "observables must be a non-empty array of matrices");
    std::vector<HermitianMatrix> obs;
    for (const auto& m : *arr) obs.push_back(hermitian_from_json(m));
    const std::size_t d = obs.front().dim();
    for (const auto& h : obs)
        require(h.dim() == d, ErrorCode::DimensionMismatch, "observables have different dimensions");
    return ObservableSet{d, std::move(obs), ObservableOrigin::Explicit};
}

inline json real_vector_to_json(std::span<const double> v) { return json(std::vector<double>(v.begin(), v.end())); }

/// Common header of every emitted document.
inline json provenance(const std::string& anchor, const std::string& module, json config) {
    return json{{"anchor", anchor}, {"module", module}, {"config", std::move(config)}};
}

inline json outcome_to_json(const CertificateOutcome& o) {
    json j{{"verdict", to_string(o.verdict)},
           {"evidence", o.evidence},
           {"residuals", {{"measurement", o.residual}, {"per_restart", real_vector_to_json(o.restart_residuals)}}},
           {"distance", o.distance},
           {"iterations", o.iterations},
           {"monotonicity_violations", o.monotonicity_violations},
           {"unconverged_restarts", o.unconverged_restarts}};
    if (o.witness) j["witness"] = matrix_to_json(o.witness->matrix());
    if (o.pure_witness) j["pure_witness"] = state_to_json(*o.pure_witness);
    return j;
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), ErrorCode::Parse, "cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Parse, path + ": " + e.what());
    }
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    require(out.good(), ErrorCode::Parse, "cannot write " + path);
    out << dump(j);
}

}  // namespace udalab::io
