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

// stochconv command line: one subcommand per experiment kind.
//
// exit codes: 0 all checks pass, 1 a check failed, 2 configuration error,
//             3 numerical failure (an error report is still written)

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "stochconv/common.hpp"
#include "stochconv/config.hpp"
#include "stochconv/experiments.hpp"

namespace {

struct Options {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::vector<std::string> checks;
    bool print_config = false;
    bool quiet = false;
};

void print_summary(const stochconv::Report& r) {
    for (const auto& c : r.checks) {
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << "  " << stochconv::format_double(c.statistic.value) << ' '
                  << c.threshold.op << ' ' << stochconv::format_double(c.threshold.a);
        if (c.threshold.op == "in") std::cout << ' ' << stochconv::format_double(c.threshold.b);
        std::cout << '\n';
    }
    std::cout << "verdict: " << (r.all_pass() ? "pass" : "fail") << '\n';
}

int run(const std::string& kind, const Options& o) {
    using namespace stochconv;
    ExperimentConfig c;
    try {
        c = o.config.empty() ? default_config(kind) : load_config(o.config);
        if (c.kind != kind) throw ConfigError("invalid config field experiment.kind: " + c.kind + " given to subcommand " + kind);
        if (o.seed) c.sampling.seed = *o.seed;
        if (o.threads) c.sampling.threads = *o.threads;
        validate(c);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    }
    if (o.print_config) {
        std::cout << serialize(c);
        return 0;
    }
    std::string out = o.out;
    if (out.empty()) {
        const char* env = std::getenv("STOCHCONV_OUT_DIR");
        out = (env && *env) ? env : "stochconv_out";
    }
    out = (std::filesystem::path(out) / c.id).string();
    Report r;
    int code = 0;
    try {
        r = run_experiment(c, RunOptions{o.checks});
        code = r.all_pass() ? 0 : 1;
    } catch (const ConfigError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        r = error_report(c, e.what());
        code = 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        r = error_report(c, e.what());
        code = 3;
    }
    write_report(r, out);
    if (!o.quiet) print_summary(r);
    std::cout << "report: " << (std::filesystem::path(out) / "report.json").string() << '\n';
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"stochconv: Monte Carlo checks for stochastic convolutions"};
    app.require_subcommand(1);
    Options o;
    std::string chosen;
    for (const std::string& kind : stochconv::experiment_kinds()) {
        CLI::App* sub = app.add_subcommand(kind, "run the " + kind + " experiment");
        sub->add_option("--config", o.config, "INI configuration file")->check(CLI::ExistingFile);
        sub->add_option("--out", o.out, "output directory (default $STOCHCONV_OUT_DIR or ./stochconv_out)");
        sub->add_option("--seed", o.seed, "override sampling.seed");
        sub->add_option("--threads", o.threads, "worker threads (does not change results)")->check(CLI::PositiveNumber);
        sub->add_option("--check", o.checks, "run only the named check (repeatable)");
        sub->add_flag("--print-config", o.print_config, "print the resolved configuration and exit");
        sub->add_flag("--quiet", o.quiet, "do not print the per-check summary");
        sub->callback([&chosen, kind] { chosen = kind; });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    return run(chosen, o);
}
