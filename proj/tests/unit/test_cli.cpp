/*
   Copyright 2026 The stochconv Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "stochconv/config.hpp"
#include "stochconv/experiments.hpp"

using namespace stochconv;
namespace fs = std::filesystem;

namespace {

ExperimentConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

std::string config_error(const std::string& text) {
    try {
        validate(parse(text));
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("stochconv_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

} // namespace

TEST(Config, RoundTripsEveryKind) {
    for (const std::string& kind : experiment_kinds()) {
        const ExperimentConfig c = default_config(kind);
        const std::string text = serialize(c);
        const ExperimentConfig back = parse(text);
        EXPECT_EQ(serialize(back), text) << kind;
        EXPECT_EQ(config_hash(back), config_hash(c)) << kind;
        EXPECT_NO_THROW(validate(back)) << kind;
    }
}

TEST(Config, ComplexModesRoundTrip) {
    ExperimentConfig c = default_config("dilation-check");
    c.generator.kind = "spectral";
    c.generator.modes = {cplx(1.0, 2.0), cplx(0.1, -3.5), cplx(100.0, 0.0)};
    c.space.d = 3;
    const ExperimentConfig back = parse(serialize(c));
    EXPECT_EQ(back.generator.modes, c.generator.modes);
}

TEST(Config, HashIgnoresThreadsOnly) {
    ExperimentConfig a = default_config("convolve");
    ExperimentConfig b = a;
    b.sampling.threads = 7;
    EXPECT_EQ(config_hash(a), config_hash(b));
    EXPECT_EQ(config_hash(a).size(), 16u);
    b.sampling.seed = 2;
    EXPECT_NE(config_hash(a), config_hash(b));
}

TEST(Config, FractionalExponentRejected) {
    const std::string msg = config_error("[experiment]\nkind = convolve\n[space]\nq = 0.5\n");
    EXPECT_NE(msg.find("space.q"), std::string::npos) << msg;
    EXPECT_NE(msg.find("q must be ≥ 1"), std::string::npos) << msg;
}

TEST(Config, UnknownKeysAndSectionsRejected) {
    EXPECT_NE(config_error("[space]\nqq = 2\n").find("space.qq"), std::string::npos);
    EXPECT_NE(config_error("[spaces]\nq = 2\n").find("unknown section"), std::string::npos);
    EXPECT_NE(config_error("[experiment]\nkind = nope\n"), "");
    EXPECT_NE(config_error("[sampling]\nscheme = milstein\n"), "");
}

TEST(Experiments, DilationCheckPassesOnHeat) {
    ExperimentConfig c = default_config("dilation-check");
    c.space = {2.0, 8};
    c.checks.samples = 20;
    const Report r = run_experiment(c);
    ASSERT_EQ(r.checks.size(), 3u);
    EXPECT_TRUE(r.all_pass()) << r.dump();
    EXPECT_EQ(r.checks[0].statistic.provenance, Provenance::Quadrature);
}

TEST(Experiments, ScalarIsometryPasses) {
    ExperimentConfig c = default_config("bdg");
    c.sampling.paths = 5000;
    c.checks.p = {2.0};
    const Report r = run_experiment(c, RunOptions{{"isometry"}});
    ASSERT_EQ(r.checks.size(), 1u);
    EXPECT_TRUE(r.checks[0].pass) << r.dump();
    EXPECT_EQ(r.checks[0].statistic.provenance, Provenance::MonteCarlo);
    EXPECT_TRUE(r.checks[0].statistic.ci.has_value());
}

TEST(Experiments, SecondMomentMatchesEachScheme) {
    for (const char* scheme : {"exact", "euler", "ito"}) {
        ExperimentConfig c = default_config("convolve");
        c.process.kind = "constant";
        c.space = {2.0, 4};
        c.grid.N = 8;
        c.sampling.paths = 20000;
        c.sampling.scheme = scheme;
        const Report r = run_experiment(c);
        const Check* m = r.find("second-moment");
        ASSERT_NE(m, nullptr) << scheme;
        EXPECT_TRUE(m->pass) << scheme << ' ' << r.dump();
    }
}

TEST(Experiments, ReportIsThreadInvariant) {
    ExperimentConfig c = default_config("convolve");
    c.space.d = 4;
    c.grid.N = 16;
    c.sampling.paths = 1000;
    c.sampling.threads = 1;
    const std::string one = run_experiment(c).dump();
    c.sampling.threads = 4;
    EXPECT_EQ(run_experiment(c).dump(), one);
}

TEST(Experiments, ReportSchema) {
    const Report r = run_experiment(default_config("renorm-check"));
    const auto j = nlohmann::ordered_json::parse(r.dump());
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) keys.push_back(k);
    EXPECT_EQ(keys, (std::vector<std::string>{"id", "kind", "config_hash", "seed", "checks", "verdict"}));
    const std::set<std::string> prov{"exact", "quadrature", "mc"};
    for (const auto& c : j.at("checks")) {
        EXPECT_TRUE(prov.count(c.at("statistic").at("provenance").get<std::string>()));
        EXPECT_TRUE(c.at("verdict") == "pass" || c.at("verdict") == "fail");
        EXPECT_TRUE(c.contains("threshold") && c.contains("details") && c.contains("description"));
    }
    EXPECT_EQ(j.at("verdict"), "pass");
}

TEST(Experiments, CrProbeDefaultPasses) {
    const Report r = run_experiment(default_config("cr-probe"));
    EXPECT_EQ(r.checks.size(), 4u);
    EXPECT_TRUE(r.all_pass()) << r.dump();
}

TEST(Experiments, KindSpecificConfigErrors) {
    ExperimentConfig tail = default_config("tail");
    tail.sampling.paths = 5000;
    EXPECT_THROW(run_experiment(tail), ConfigError);
    ExperimentConfig cr = default_config("cr-probe");
    cr.checks.r = 2.0;
    cr.space.q = 4.0;
    EXPECT_THROW(run_experiment(cr), ConfigError);
    EXPECT_THROW(run_experiment(default_config("renorm-check"), RunOptions{{"no-such-check"}}), ConfigError);
}

TEST(Experiments, ErrorReportFails) {
    const Report r = error_report(default_config("doob"), "matrix exponential failed to converge");
    EXPECT_FALSE(r.all_pass());
    const auto j = nlohmann::json::parse(r.dump());
    EXPECT_EQ(j.at("error"), "matrix exponential failed to converge");
    EXPECT_EQ(j.at("verdict"), "fail");
}

#ifdef STOCHCONV_CLI
namespace {
int cli(const std::string& args) {
    const int rc = std::system((std::string(STOCHCONV_CLI) + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}
} // namespace

TEST(Cli, ExitCodesAndOutput) {
    const fs::path dir = scratch("cli");
    EXPECT_EQ(cli("renorm-check --out " + dir.string()), 0);
    EXPECT_TRUE(fs::exists(dir / "renorm-check" / "report.json"));

    std::ofstream(dir / "bad.ini") << "[experiment]\nkind = convolve\n[space]\nq = 0.5\n";
    EXPECT_EQ(cli("convolve --config " + (dir / "bad.ini").string() + " --out " + dir.string()), 2);

    std::ofstream(dir / "other.ini") << serialize(default_config("doob"));
    EXPECT_EQ(cli("bdg --config " + (dir / "other.ini").string() + " --out " + dir.string()), 2);

    EXPECT_EQ(cli("cr-probe --check fd-hessian --threads 2 --out " + dir.string()), 0);
    EXPECT_EQ(cli("no-such-subcommand"), 2);
    fs::remove_all(dir);
}

TEST(Cli, OutputDirectoryFromEnvironment) {
    const fs::path dir = scratch("env");
    EXPECT_EQ(cli("cr-probe --check k1 --seed 9"), 0) << "default directory";
    const std::string cmd = "env STOCHCONV_OUT_DIR=" + dir.string() + " " + std::string(STOCHCONV_CLI) + " cr-probe --check k1 > /dev/null";
    EXPECT_EQ(std::system(cmd.c_str()), 0);
    EXPECT_TRUE(fs::exists(dir / "cr-probe" / "report.json"));
    fs::remove_all(dir);
    fs::remove_all("stochconv_out");
}
#endif
