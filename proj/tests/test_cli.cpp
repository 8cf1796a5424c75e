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

// Runs the udalab binary (path from UDALAB_CLI_PATH) and checks exit codes
// and documents.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "udalab/io.hpp"

namespace udalab {
namespace {

using io::json;

struct Run {
    int exit_code = -1;
    std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + (env.empty() ? "" : " ") + "\"" UDALAB_CLI_PATH "\" " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(p);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string temp_path(const std::string& name) { return (std::filesystem::temp_directory_path() / name).string(); }

void write(const std::string& path, const json& j) { io::write_json_file(path, j); }

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        const auto m = gellmann_matrices(3);
        write(temp_path("udalab_cli_block.json"), json{{"observables", io::observables_to_json(std::vector<HermitianMatrix>{m[0], m[1], m[2]})}});
        write(temp_path("udalab_cli_paulis.json"), io::observables_to_json(pauli_matrices()));
        write(temp_path("udalab_cli_ket2.json"), io::state_to_json(PureState::basis(3, 2)));
        write(temp_path("udalab_cli_ket0.json"), io::state_to_json(PureState::basis(2, 0)));
        write(temp_path("udalab_cli_x.json"), io::matrix_to_json(pauli_matrices()[0]));
        write(temp_path("udalab_cli_y.json"), io::matrix_to_json(pauli_matrices()[1]));
    }
};

TEST_F(Cli, ConstructCounts) {
    const auto r = run("construct --d 4 --q 1 --verify-samples 1000");
    ASSERT_EQ(r.exit_code, 0);
    const auto j = json::parse(r.out);
    EXPECT_EQ(j["family_size"], 2);
    EXPECT_EQ(j["observable_count"], 13);
    ASSERT_TRUE(j.contains("provenance"));
    EXPECT_EQ(j["provenance"]["module"], "observable-construction");
    EXPECT_EQ(j["provenance"]["config"]["d"], 4);
}

TEST_F(Cli, ConstructWritesFiles) {
    const auto fam = temp_path("udalab_cli_family.json"), obs = temp_path("udalab_cli_obs.json");
    ASSERT_EQ(run("construct --d 5 --out " + fam + " " + obs).exit_code, 0);
    const auto a = io::observables_from_json(io::read_json_file(obs));
    EXPECT_EQ(a.size(), 18u);
    EXPECT_EQ(a.d, 5u);
    EXPECT_TRUE(io::read_json_file(fam).is_object());
}

TEST_F(Cli, UsageErrorsExitOne) {
    EXPECT_EQ(run("construct --d 4 --bogus").exit_code, 1);
    EXPECT_EQ(run("construct").exit_code, 1);
    EXPECT_EQ(run("construct --d two").exit_code, 1);
    EXPECT_EQ(run("construct --d 2").exit_code, 1);
    EXPECT_EQ(run("no-such-command").exit_code, 1);
    EXPECT_EQ(run("certify-udp --state missing.json --observables missing.json").exit_code, 1);
    EXPECT_EQ(run("numrange --a1 " + temp_path("udalab_cli_x.json")).exit_code, 1);
    EXPECT_EQ(run("certify-uda --state " + temp_path("udalab_cli_ket0.json") + " --observables " +
                  temp_path("udalab_cli_block.json"))
                  .exit_code,
              1);
}

TEST_F(Cli, CertifyUdaFalsifiesQutritBlock) {
    const auto r = run("certify-uda --state " + temp_path("udalab_cli_ket2.json") + " --observables " +
                       temp_path("udalab_cli_block.json") + " --restarts 3 --json");
    ASSERT_EQ(r.exit_code, 0);
    const auto j = json::parse(r.out);
    EXPECT_EQ(j["verdict"], "Falsified");
    const auto w = io::hermitian_from_json(j["witness"]);
    EXPECT_NEAR(w.trace(), 1.0, 1e-9);
    EXPECT_GT(eigvalsh(w.matrix()).front(), -1e-9);
    for (const auto& v : j["measurements"]) EXPECT_NEAR(v.get<double>(), 0.0, 1e-15);
}

TEST_F(Cli, CertifyUdpAndUdaOnPaulis) {
    const std::string args = "--state " + temp_path("udalab_cli_ket0.json") + " --observables " +
                             temp_path("udalab_cli_paulis.json") + " --restarts 5 --json";
    const auto uda = run("certify-uda " + args);
    ASSERT_EQ(uda.exit_code, 0);
    EXPECT_EQ(json::parse(uda.out)["verdict"], "CertifiedUnique");
    const auto udp = run("certify-udp " + args);
    ASSERT_EQ(udp.exit_code, 0);
    EXPECT_NE(json::parse(udp.out)["verdict"], "Falsified");
}

TEST_F(Cli, RepeatRunsAreByteIdentical) {
    const std::string args = "certify-uda --state " + temp_path("udalab_cli_ket2.json") + " --observables " +
                             temp_path("udalab_cli_block.json") + " --restarts 4 --seed 9 --json";
    const auto a = run(args), b = run(args);
    ASSERT_EQ(a.exit_code, 0);
    EXPECT_EQ(a.out, b.out);
    const auto c = run("demo qutrit-gap"), d = run("demo qutrit-gap");
    ASSERT_EQ(c.exit_code, 0);
    EXPECT_EQ(c.out, d.out);
}

TEST_F(Cli, SeedFromEnvironment) {
    const auto r = run("construct --d 4", "UDA_LAB_SEED=7");
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_EQ(json::parse(r.out)["provenance"]["config"]["seed"], 7);
    const auto flag = run("construct --d 4 --seed 3", "UDA_LAB_SEED=7");
    EXPECT_EQ(json::parse(flag.out)["provenance"]["config"]["seed"], 3);
}

TEST_F(Cli, Demos) {
    for (const std::string name : {"qutrit-gap", "bloch", "d4-family", "four-qubit"}) {
        const auto r = run("demo " + name);
        ASSERT_EQ(r.exit_code, 0) << name;
        EXPECT_TRUE(json::parse(r.out).contains("provenance")) << name;
    }
    EXPECT_EQ(run("demo nothing").exit_code, 1);
}

TEST_F(Cli, NumrangeCsv) {
    const auto csv = temp_path("udalab_cli_range.csv");
    const auto r = run("numrange --a1 " + temp_path("udalab_cli_x.json") + " --a2 " + temp_path("udalab_cli_y.json") +
                       " --angles 16 --csv " + csv);
    ASSERT_EQ(r.exit_code, 0);
    std::ifstream in(csv);
    std::string line;
    std::size_t rows = 0;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != 't') ++rows;
    EXPECT_EQ(rows, 16u);
}

TEST_F(Cli, RdmGhz) {
    const auto r = run("rdm-check --demo ghz");
    ASSERT_EQ(r.exit_code, 0);
    const auto j = json::parse(r.out);
    EXPECT_EQ(j["uda"], false);
    EXPECT_EQ(j["rdms_equal"], true);
}

TEST_F(Cli, SymmetryRoutes) {
    const auto r = run("symmetry --observables " + temp_path("udalab_cli_block.json") + " --check-algebra");
    ASSERT_EQ(r.exit_code, 0);
    const auto j = json::parse(r.out);
    EXPECT_EQ(j["star_algebra"], false);
    EXPECT_EQ(j["certificate"]["route"], "none");
    const auto q = json::parse(run("symmetry --observables " + temp_path("udalab_cli_paulis.json")).out);
    EXPECT_EQ(q["certificate"]["certified"], true);
}

TEST_F(Cli, ReproduceSubset) {
    const auto out = temp_path("udalab_cli_reproduce.json");
    const auto r = run("reproduce --suite 1,3 --json " + out);
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.out.find("[PASS] 1."), std::string::npos);
    EXPECT_NE(r.out.find("[PASS] 3."), std::string::npos);
    EXPECT_TRUE(io::read_json_file(out).contains("provenance"));
    EXPECT_EQ(run("reproduce --suite 99").exit_code, 1);
}

}  // namespace
}  // namespace udalab
