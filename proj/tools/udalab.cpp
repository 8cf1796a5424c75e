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

// udalab command-line front end. Every command writes one JSON document to
// stdout (certify-* only with --json) and logs its effective configuration
// to stderr. Exit codes: 0 success, 1 usage or input error, 2 a reproduced
// criterion failed.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "udalab/acceptance.hpp"
#include "udalab/io.hpp"
#include "udalab/udalab.hpp"

namespace {

using namespace udalab;
using io::json;

struct Globals {
    std::uint64_t seed = 0;
    std::size_t threads = 1;
    bool verbose = false;
};

void log_config(const std::string& command, const json& config) {
    std::cerr << "udalab " << command << " config " << config.dump() << "\n";
}

json document(const std::string& anchor, const std::string& module, const json& config) {
    return json{{"provenance", io::provenance(anchor, module, config)}};
}

void emit(const json& doc) { std::cout << io::dump(doc); }

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json measurement_json(const MeasurementVector& m) { return io::real_vector_to_json(m.values); }

// ---------------------------------------------------------------------------

struct ConstructArgs {
    std::size_t d = 4;
    std::size_t q = 1;
    std::vector<std::string> out;
    std::size_t verify_samples = 0;
};

int run_construct(const ConstructArgs& a, const Globals& g) {
    const json config{{"d", a.d}, {"q", a.q}, {"verify_samples", a.verify_samples}, {"seed", g.seed}, {"out", a.out}};
    log_config("construct", config);
    const auto fam = complement_family(a.d, a.q);
    const auto obs = uda_observables(a.d, a.q);

    json doc = document("uda-construction", "observable-construction", config);
    doc["d"] = a.d;
    doc["q"] = a.q;
    doc["family_size"] = fam.size();
    doc["observable_count"] = obs.size();
    doc["expected"] = {{"family_size", complement_family_count(static_cast<long long>(a.d), static_cast<long long>(a.q))},
                       {"observable_count", uda_observable_count(static_cast<long long>(a.d), static_cast<long long>(a.q))}};

    json lines = json::array();
    for (const auto& l : fam.lines) lines.push_back({{"k", l.k}, {"part", l.imaginary ? "imag" : "real"}, {"column", l.column}});
    json family{{"d", a.d}, {"q", a.q}, {"matrices", io::observables_to_json(fam.matrices)}, {"lines", lines}};
    json observables{{"d", a.d}, {"q", a.q}, {"observables", io::observables_to_json(obs.observables)}};

    if (a.out.size() == 2) {
        json f = document("uda-construction", "observable-construction", config);
        f.update(family);
        json o = document("uda-construction", "observable-construction", config);
        o.update(observables);
        io::write_json_file(a.out[0], f);
        io::write_json_file(a.out[1], o);
        doc["written"] = a.out;
    } else {
        doc["family"] = family;
        doc["observables"] = observables["observables"];
    }

    if (a.verify_samples > 0) {
        const auto rep = family_signature_check(fam, a.verify_samples, g.seed);
        doc["verification"] = {{"samples", rep.samples},
                               {"violations", rep.violations},
                               {"min_n_plus", rep.min_n_plus},
                               {"min_n_minus", rep.min_n_minus},
                               {"worst_margin", rep.worst_margin},
                               {"passed", rep.passed()}};
    }
    emit(doc);
    return 0;
}

// ---------------------------------------------------------------------------

struct CertifyArgs {
    std::string state;
    std::string observables;
    std::size_t restarts = 50;
    std::size_t max_iterations = 20000;
    double constraint_tol = 1e-8;
    double distinctness_tol = 1e-4;
    std::string scheme = "dykstra";
    bool json_out = false;
};

int run_certify(bool uda, const CertifyArgs& a, const Globals& g) {
    FeasibilityConfig cfg;
    cfg.restarts = a.restarts;
    cfg.max_iterations = a.max_iterations;
    cfg.constraint_tol = a.constraint_tol;
    cfg.distinctness_tol = a.distinctness_tol;
    cfg.seed = g.seed;
    cfg.threads = g.threads;
    cfg.scheme = a.scheme == "alternating" ? ProjectionScheme::Alternating : ProjectionScheme::Dykstra;
    const json config{{"state", a.state},       {"observables", a.observables},
                      {"restarts", a.restarts}, {"max_iterations", a.max_iterations},
                      {"constraint_tol", a.constraint_tol}, {"distinctness_tol", a.distinctness_tol},
                      {"scheme", a.scheme},     {"seed", g.seed},
                      {"threads", g.threads}};
    const std::string command = uda ? "certify-uda" : "certify-udp";
    log_config(command, config);

    const auto psi = io::state_from_json(io::read_json_file(a.state));
    const auto obs = io::observables_from_json(io::read_json_file(a.observables));
    const auto out = uda ? uda_certify(psi, obs, cfg) : udp_certify(psi, obs, cfg);
    if (g.verbose)
        for (std::size_t r = 0; r < out.restart_distances.size(); ++r)
            std::cerr << "restart " << r << " distance " << out.restart_distances[r] << " residual "
                      << out.restart_residuals[r] << "\n";

    if (!a.json_out) {
        std::cout << to_string(out.verdict) << ": " << out.evidence << "\n";
        return 0;
    }
    json doc = document(uda ? "projection-falsifier" : "pure-state-search", "uniqueness-certifier", config);
    doc["measurements"] = measurement_json(measure(obs, psi));
    doc.update(io::outcome_to_json(out));
    emit(doc);
    return 0;
}

// ---------------------------------------------------------------------------

struct NumrangeArgs {
    std::string a1, a2;
    std::size_t angles = 720;
    bool refine = false;
    std::string csv;
    std::string demo;
    bool check = false;
    std::size_t interior_trials = 50;
};

json qutrit_gap_json(const json& config, const Globals& g) {
    FeasibilityConfig cfg;
    cfg.seed = g.seed;
    cfg.threads = g.threads;
    const auto q = qutrit_counterexample(1000, g.seed, cfg);
    json doc = document("qutrit-gap", "numerical-range", config);
    doc["observables"] = io::observables_to_json(q.observables.observables);
    doc["pure_state"] = io::state_to_json(q.pure_preimage);
    doc["mixed_witness"] = io::matrix_to_json(q.mixed_witness.matrix());
    doc["pure_measurements"] = measurement_json(measure(q.observables, q.pure_preimage));
    doc["mixed_measurements"] = measurement_json(measure(q.observables, q.mixed_witness));
    doc["udp"] = io::outcome_to_json(q.udp);
    doc["uda"] = io::outcome_to_json(q.uda);
    doc["ball"] = {{"samples", q.ball_samples}, {"max_error", q.ball_max_error}};
    return doc;
}

json bloch_json(const json& config, const Globals& g) {
    const auto b = bloch_nonconvexity_demo(10000, g.seed);
    json doc = document("bloch-sphere", "numerical-range", config);
    doc["observables"] = io::observables_to_json(b.observables.observables);
    doc["image0"] = io::real_vector_to_json(b.image0);
    doc["image1"] = io::real_vector_to_json(b.image1);
    doc["midpoint"] = io::real_vector_to_json(b.midpoint);
    doc["probes"] = b.probes;
    doc["min_distance"] = b.min_distance;
    doc["mixed_residual"] = b.mixed_residual;
    return doc;
}

int run_numrange(const NumrangeArgs& a, const Globals& g) {
    const json config{{"a1", a.a1},          {"a2", a.a2},     {"angles", a.angles},
                      {"refine", a.refine},  {"csv", a.csv},   {"demo", a.demo},
                      {"check", a.check},    {"interior_trials", a.interior_trials},
                      {"seed", g.seed}};
    log_config("numrange", config);
    if (a.demo == "qutrit") {
        emit(qutrit_gap_json(config, g));
        return 0;
    }
    if (a.demo == "bloch") {
        emit(bloch_json(config, g));
        return 0;
    }
    if (a.a1.empty() || a.a2.empty()) throw CLI::ValidationError("numrange needs --a1 and --a2, or --demo");

    const auto a1 = io::hermitian_from_json(io::read_json_file(a.a1));
    const auto a2 = io::hermitian_from_json(io::read_json_file(a.a2));
    SweepConfig sc;
    sc.angles = a.angles;
    sc.refine = a.refine;
    const auto range = boundary_sweep(a1, a2, sc);

    json doc = document("two-observable-range", "numerical-range", config);
    std::size_t nondeg = 0;
    for (const auto& p : range.points) nondeg += p.degeneracy == 1;
    doc["points"] = range.points.size();
    doc["nondegenerate"] = nondeg;
    doc["diameter"] = range.diameter();
    if (!a.csv.empty()) {
        std::ofstream out(a.csv);
        require(out.good(), ErrorCode::Parse, "cannot write " + a.csv);
        out << "theta,x,y,degeneracy\n";
        for (const auto& p : range.points)
            out << format_double(p.theta) << "," << format_double(p.x) << "," << format_double(p.y) << "," << p.degeneracy
                << "\n";
        doc["csv"] = a.csv;
    } else {
        json pts = json::array();
        for (const auto& p : range.points)
            pts.push_back({{"theta", p.theta}, {"x", p.x}, {"y", p.y}, {"degeneracy", p.degeneracy}});
        doc["boundary"] = pts;
    }
    if (a.check) {
        Theorem5Config tc;
        tc.angles = a.angles;
        tc.interior_trials = a.interior_trials;
        tc.seed = g.seed;
        tc.feasibility.threads = g.threads;
        const auto rep = theorem5_consistency(a1, a2, tc);
        doc["consistency"] = {{"nondegenerate", rep.nondegenerate},
                              {"boundary_uda_falsified", rep.boundary_uda_falsified},
                              {"boundary_unconverged", rep.boundary_unconverged},
                              {"interior_probes", rep.interior_probes},
                              {"interior_udp_falsified", rep.interior_udp_falsified},
                              {"hard_failures", rep.hard_failures},
                              {"failure_details", rep.failure_details},
                              {"passed", rep.passed()}};
    }
    emit(doc);
    return 0;
}

// ---------------------------------------------------------------------------

struct RdmArgs {
    std::string dims;
    std::string state;
    std::string mixed;
    std::size_t rank = 0;
    std::string demo;
    double a = 1.0 / std::numbers::sqrt2;
    double b = 1.0 / std::numbers::sqrt2;
};

Dims3 parse_dims(const std::string& s) {
    Dims3 d{};
    std::stringstream ss(s);
    std::string part;
    std::size_t i = 0;
    while (std::getline(ss, part, ',')) {
        require(i < 3, ErrorCode::Parse, "--dims takes exactly three values");
        try {
            std::size_t used = 0;
            const long v = std::stol(part, &used);
            require(used == part.size() && v >= 1, ErrorCode::Parse, "bad dimension '" + part + "'");
            d[i++] = static_cast<std::size_t>(v);
        } catch (const std::logic_error&) {
            throw Error(ErrorCode::Parse, "bad dimension '" + part + "'");
        }
    }
    require(i == 3, ErrorCode::Parse, "--dims takes exactly three values");
    return d;
}

json rank_json(const RankTestReport& r) {
    return {{"system_shape", {r.equations, r.variables}}, {"rank", r.rank},       {"uda", r.uda},
            {"generic", r.generic},                       {"swapped", r.swapped}, {"canonical_residual", r.canonical_residual}};
}

int run_rdm(const RdmArgs& a, const Globals& g) {
    const json config{{"dims", a.dims}, {"state", a.state}, {"mixed", a.mixed}, {"rank", a.rank},
                      {"demo", a.demo}, {"a", a.a},         {"b", a.b},         {"seed", g.seed}};
    log_config("rdm-check", config);
    if (a.demo == "ghz") {
        json doc = document("ghz-family", "rdm-uniqueness", config);
        doc.update(rank_json(uda_rank_report(TripartiteState::ghz(a.a, a.b))));
        const std::vector<double> thetas{std::numbers::pi / 4, std::numbers::pi / 2, std::numbers::pi};
        const auto fam = ghz_family_check(a.a, a.b, thetas);
        json entries = json::array();
        for (const auto& e : fam.entries)
            entries.push_back({{"theta", e.theta},
                               {"rdm_difference", e.rdm_difference},
                               {"projector_distance", e.projector_distance},
                               {"predicted_distance", e.predicted_distance}});
        doc["family"] = entries;
        doc["rdms_equal"] = fam.rdms_equal();
        emit(doc);
        return 0;
    }
    if (a.dims.empty()) throw CLI::ValidationError("rdm-check needs --dims (or --demo ghz)");
    const auto dims = parse_dims(a.dims);
    if (!a.mixed.empty()) {
        const auto rho = DensityMatrix(io::hermitian_from_json(io::read_json_file(a.mixed)));
        require(rho.dim() == dims[0] * dims[1] * dims[2], ErrorCode::DimensionMismatch, "mixed state dimension differs from d1 d2 d3");
        const auto rep = mixed_rank_report(rho, dims);
        json doc = document("mixed-reductions", "rdm-uniqueness", config);
        doc["system_shape"] = {rep.equations, rep.variables};
        doc["rank"] = rep.rank;
        doc["purification_rank"] = rep.d4;
        doc["canonical_residual"] = rep.canonical_residual;
        doc["uda"] = a.rank > 0 ? mixed_uda_rank_test(rho, dims, a.rank) : rep.uda;
        emit(doc);
        return 0;
    }
    if (a.state.empty()) throw CLI::ValidationError("rdm-check needs --state or --mixed");
    const auto s = TripartiteState(dims, io::amplitudes_from_json(io::read_json_file(a.state)));
    json doc = document("tripartite-reductions", "rdm-uniqueness", config);
    doc.update(rank_json(uda_rank_report(s)));
    emit(doc);
    return 0;
}

// ---------------------------------------------------------------------------

struct SymmetryArgs {
    std::string observables;
    bool check_algebra = false;
    std::size_t fixed_dims = 0;
};

int run_symmetry(const SymmetryArgs& a, const Globals& g) {
    const json config{{"observables", a.observables}, {"check_algebra", a.check_algebra}, {"fixed_dims", a.fixed_dims},
                      {"seed", g.seed}};
    log_config("symmetry", config);
    const auto obs = io::observables_from_json(io::read_json_file(a.observables));
    const auto v = udp_implies_uda_via_symmetry(obs, g.seed);
    json doc = document("symmetry-averaging", "symmetry-analysis", config);
    doc["star_algebra"] = v.star_algebra;
    doc["generated_dim"] = v.generated_dim;
    doc["commutant_dim"] = v.commutant_dim;
    doc["certificate"] = {{"certified", v.certified}, {"route", v.route}, {"message", v.message}};
    if (a.check_algebra) doc["bicommutant_defect"] = bicommutant_defect(obs);
    if (obs.d == 2) doc["qubit_fixed_set"] = fixed_set_name(bloch_frame(obs).dim);
    if (a.fixed_dims > 0) doc["fixed_dims"] = realizable_fixed_dims(a.fixed_dims);
    emit(doc);
    return 0;
}

// ---------------------------------------------------------------------------

int run_demo(const std::string& name, const Globals& g) {
    const json config{{"demo", name}, {"seed", g.seed}, {"threads", g.threads}};
    log_config("demo", config);
    if (name == "qutrit-gap") {
        emit(qutrit_gap_json(config, g));
    } else if (name == "bloch") {
        emit(bloch_json(config, g));
    } else if (name == "d4-family") {
        const auto fam = complement_family(4, 1);
        const auto cs = complex_span_rank_demo(fam);
        json doc = document("uda-construction", "observable-construction", config);
        doc["matrices"] = io::observables_to_json(fam.matrices);
        json sig = json::array();
        for (const auto& h : fam.matrices) {
            const auto s = signature(h);
            sig.push_back({s.n_plus, s.n_minus, s.n_zero});
        }
        doc["signatures"] = sig;
        doc["complex_combination"] = io::matrix_to_json(cs.combination);
        doc["complex_combination_rank"] = cs.rank;
        emit(doc);
    } else if (name == "four-qubit") {
        const auto fq = four_qubit_demo(g.seed);
        auto j = [](const MixedRankReport& r) {
            return json{{"system_shape", {r.equations, r.variables}}, {"rank", r.rank}, {"uda", r.uda},
                        {"purification_rank", r.d4}};
        };
        json doc = document("four-qubit-grouping", "rdm-uniqueness", config);
        doc["grouped_third"] = j(fq.grouped_third);
        doc["grouped_first"] = j(fq.grouped_first);
        emit(doc);
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct ReproduceArgs {
    std::string suite = "all";
    std::string json_path;
};

std::vector<int> parse_suite(const std::string& s) {
    if (s == "all") return {};
    std::vector<int> ids;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
        try {
            std::size_t used = 0;
            const int v = std::stoi(part, &used);
            require(used == part.size(), ErrorCode::Parse, "bad criterion id '" + part + "'");
            ids.push_back(v);
        } catch (const std::logic_error&) {
            throw Error(ErrorCode::Parse, "bad criterion id '" + part + "'");
        }
    }
    return ids;
}

int run_reproduce(const ReproduceArgs& a, const Globals& g) {
    const json config{{"suite", a.suite}, {"seed", g.seed}, {"threads", g.threads}, {"json", a.json_path}};
    log_config("reproduce", config);
    const auto ids = parse_suite(a.suite);
    const auto results = acceptance::run({g.seed, g.threads}, ids, [](const acceptance::Result& r) {
        std::cout << acceptance::format_line(r) << std::endl;
    });
    std::size_t failed = 0;
    json rows = json::array();
    for (const auto& r : results) {
        failed += !r.passed;
        rows.push_back({{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"detail", r.detail}});
    }
    std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed\n";
    if (!a.json_path.empty()) {
        json doc = document("acceptance", "cli", config);
        doc["results"] = rows;
        io::write_json_file(a.json_path, doc);
    }
    return failed == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"udalab: uniqueness of quantum states from partial measurements"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--seed", g.seed, "random seed (default 0)")->envname("UDA_LAB_SEED");
    app.add_option("--threads", g.threads, "worker threads for independent restarts")->check(CLI::PositiveNumber);
    app.add_flag("-v,--verbose", g.verbose, "per-restart diagnostics on stderr");
    app.fallthrough();

    ConstructArgs ca;
    auto* construct = app.add_subcommand("construct", "build the complement family and the observable set");
    construct->add_option("--d", ca.d, "dimension")->required();
    construct->add_option("--q", ca.q, "rank parameter");
    construct->add_option("--out", ca.out, "family.json observables.json")->expected(2);
    construct->add_option("--verify-samples", ca.verify_samples, "random combinations checked for the signature property");

    CertifyArgs cu;
    auto add_certify = [&](const std::string& name, const std::string& desc) {
        auto* sub = app.add_subcommand(name, desc);
        sub->add_option("--state", cu.state, "pure state JSON")->required()->check(CLI::ExistingFile);
        sub->add_option("--observables", cu.observables, "observable list JSON")->required()->check(CLI::ExistingFile);
        sub->add_option("--restarts", cu.restarts, "independent restarts")->check(CLI::PositiveNumber);
        sub->add_option("--max-iterations", cu.max_iterations, "projection sweeps per restart")->check(CLI::PositiveNumber);
        sub->add_option("--tol", cu.constraint_tol, "measurement residual tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--distinctness-tol", cu.distinctness_tol, "Frobenius separation of a second state")
            ->check(CLI::PositiveNumber);
        sub->add_option("--scheme", cu.scheme, "dykstra or alternating")->check(CLI::IsMember({"dykstra", "alternating"}));
        sub->add_flag("--json", cu.json_out, "emit the verdict document as JSON");
        return sub;
    };
    auto* certify_uda = add_certify("certify-uda", "search for a second state with the same measurements");
    auto* certify_udp = add_certify("certify-udp", "search for a second pure state with the same measurements");

    NumrangeArgs na;
    auto* numrange = app.add_subcommand("numrange", "boundary of the joint range of two observables");
    numrange->add_option("--a1", na.a1, "first observable")->check(CLI::ExistingFile);
    numrange->add_option("--a2", na.a2, "second observable")->check(CLI::ExistingFile);
    numrange->add_option("--angles", na.angles, "support directions")->check(CLI::Range(8, 1 << 20));
    numrange->add_flag("--refine", na.refine, "bisect directions across long boundary gaps");
    numrange->add_option("--csv", na.csv, "write theta,x,y,degeneracy rows");
    numrange->add_flag("--check", na.check, "verify boundary states and interior points against both uniqueness notions");
    numrange->add_option("--interior-trials", na.interior_trials, "interior points for --check")->check(CLI::PositiveNumber);
    numrange->add_option("--demo", na.demo, "qutrit or bloch")->check(CLI::IsMember({"qutrit", "bloch"}));

    RdmArgs ra;
    auto* rdm = app.add_subcommand("rdm-check", "uniqueness of a tripartite state from its {1,2} and {1,3} reductions");
    rdm->add_option("--dims", ra.dims, "d1,d2,d3");
    rdm->add_option("--state", ra.state, "pure state JSON, amplitudes indexed (i d2 + j) d3 + k")->check(CLI::ExistingFile);
    rdm->add_option("--mixed", ra.mixed, "density matrix JSON")->check(CLI::ExistingFile);
    rdm->add_option("--rank", ra.rank, "rank bound for the mixed test");
    rdm->add_option("--demo", ra.demo, "ghz")->check(CLI::IsMember({"ghz"}));
    rdm->add_option("--a", ra.a, "GHZ amplitude of |000>");
    rdm->add_option("--b", ra.b, "GHZ amplitude of |111>");

    SymmetryArgs sa;
    auto* symmetry = app.add_subcommand("symmetry", "algebraic certificates that UDP implies UDA");
    symmetry->add_option("--observables", sa.observables, "observable list JSON")->required()->check(CLI::ExistingFile);
    symmetry->add_flag("--check-algebra", sa.check_algebra, "also report the bicommutant defect");
    symmetry->add_option("--fixed-dims", sa.fixed_dims, "list realizable fixed-point dimensions for this d");

    std::string demo_name;
    auto* demo = app.add_subcommand("demo", "worked examples");
    demo->add_option("name", demo_name, "qutrit-gap, bloch, d4-family or four-qubit")
        ->required()
        ->check(CLI::IsMember({"qutrit-gap", "bloch", "d4-family", "four-qubit"}));

    ReproduceArgs rp;
    auto* reproduce = app.add_subcommand("reproduce", "run the acceptance criteria");
    reproduce->add_option("--suite", rp.suite, "all, or comma-separated criterion ids");
    reproduce->add_option("--json", rp.json_path, "also write the results table as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (construct->parsed()) return run_construct(ca, g);
        if (certify_uda->parsed()) return run_certify(true, cu, g);
        if (certify_udp->parsed()) return run_certify(false, cu, g);
        if (numrange->parsed()) return run_numrange(na, g);
        if (rdm->parsed()) return run_rdm(ra, g);
        if (symmetry->parsed()) return run_symmetry(sa, g);
        if (demo->parsed()) return run_demo(demo_name, g);
        if (reproduce->parsed()) return run_reproduce(rp, g);
    } catch (const CLI::Error& e) {
        std::cerr << "usage error: " << e.what() << "\n" << app.help();
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
