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

// Acceptance run: executes the suite, then re-derives every verdict from the
// serialized report with independent oracles and the pinned tolerances.
// One PASS/FAIL line per criterion; nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "stochconv/experiments.hpp"

using nlohmann::json;

namespace {

struct Verdict {
    bool pass = true;
    std::string note;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!note.empty()) note += "; ";
            note += what;
        }
    }
};

std::string num(double x) {
    char b[32];
    std::snprintf(b, sizeof b, "%.4g", x);
    return b;
}

std::vector<double> values(const json& tagged) { return tagged.at("values").get<std::vector<double>>(); }
double val(const json& stat) { return stat.at("value").get<double>(); }
double lo(const json& stat) { return stat.at("ci").at(0).get<double>(); }
double hi(const json& stat) { return stat.at("ci").at(1).get<double>(); }
double half(const json& stat) { return 0.5 * (hi(stat) - lo(stat)); }

double slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = double(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<double> ranks(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        for (std::size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * double(i + j) + 1.0;
        i = j + 1;
    }
    return r;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = double(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

// ---- per-criterion evaluation ----------------------------------------------

Verdict c1(const json& d) {
    Verdict v;
    for (const char* k : {"scalar", "l2"}) {
        const json& s = d.at(k);
        v.require(lo(s) <= 1.0 && 1.0 <= hi(s), std::string(k) + " CI misses 1");
        const double width = (hi(s) - lo(s)) / val(s);
        v.require(width <= 0.02, std::string(k) + " CI width " + num(width));
    }
    v.require(d.at("paths").get<double>() >= 1e5, "fewer than 1e5 paths");
    return v;
}

Verdict c2(const json& d) {
    Verdict v;
    const double oracle = std::sqrt(std::sqrt(3.0)); // (E Z^4)^(1/4) for Z ~ N(0, 1)
    const double got = val(d.at("moment"));
    v.require(std::abs(got / oracle - 1.0) <= 0.02, "moment " + num(got) + " vs " + num(oracle));
    return v;
}

Verdict c3(const json& d) {
    Verdict v;
    const double oracle = (1.0 - std::exp(-2.0)) / 2.0; // int_0^1 e^{-2s} ds
    for (double x : values(d.at("exact_variance")))
        v.require(std::abs(x / oracle - 1.0) <= 0.01, "exact variance " + num(x));
    v.require(d.at("exact_paths").get<double>() >= 1e5, "fewer than 1e5 paths");
    std::vector<double> ldt, lerr;
    const auto dts = d.at("euler_dt").get<std::vector<double>>();
    const auto var = values(d.at("euler_variance"));
    for (std::size_t i = 0; i < dts.size(); ++i) {
        ldt.push_back(std::log(dts[i]));
        lerr.push_back(std::log(std::abs(var[i] - oracle)));
    }
    const double order = slope(ldt, lerr);
    v.require(dts.size() >= 3 && order >= 0.9, "Euler order " + num(order));
    return v;
}

Verdict c4(const json& d) {
    Verdict v;
    const double res = val(d.at("identity_residual"));
    v.require(res <= 1e-8, "identity residual " + num(res));
    v.require(d.at("modes").get<int>() >= 25, "mode scan too small");
    for (const auto& [q, s] : d.at("pathwise_gap").items()) v.require(val(s) <= 1e-6, "q=" + q + " pathwise gap " + num(val(s)));
    v.require(d.at("pathwise_gap").size() == 2 && d.at("pathwise_paths").get<int>() >= 1000, "pathwise sample too small");
    return v;
}

Verdict c5(const json& d) {
    Verdict v;
    int cells = 0;
    for (const auto& [key, cell] : d.items()) {
        if (key.rfind("q", 0) != 0) continue;
        ++cells;
        const auto r16 = values(cell.at("d16"));
        const auto r64 = values(cell.at("d64"));
        for (const auto* r : {&r16, &r64}) {
            v.require(r->size() == 20, key + " family size");
            const double spread = *std::max_element(r->begin(), r->end()) / median_of(*r);
            v.require(spread <= 5.0, key + " max/median " + num(spread));
            std::vector<double> idx(r->size());
            std::iota(idx.begin(), idx.end(), 1.0);
            const double rho = pearson(ranks(idx), ranks(*r));
            v.require(std::abs(rho) < 0.5, key + " Spearman " + num(rho));
        }
        for (std::size_t i = 0; i < r16.size(); ++i)
            v.require(std::abs(r64[i] / r16[i] - 1.0) <= 0.2, key + " member " + std::to_string(i) + " drift");
    }
    v.require(cells == 4, "expected q in {2,4} x p in {2,4}");
    return v;
}

Verdict c6(const json& d) {
    Verdict v;
    const double M = val(d.at("M"));
    const double c = val(d.at("c_tail"));
    v.require(M == 1.0 && val(d.at("max_l2gamma_sq")) <= 1.0 + 1e-12, "budget M = 1 violated");
    for (const auto& m : d.at("members")) {
        v.require(lo(m.at("slope")) > 0.0, "slope CI not positive");
        const auto lam = m.at("lambda").get<std::vector<double>>();
        const auto p = values(m.at("probability"));
        const auto up = values(m.at("ci_high"));
        v.require(*std::max_element(p.begin(), p.end()) >= 0.05 && *std::min_element(p.begin(), p.end()) <= 2e-3,
                  "lambda grid does not span 1e-1..1e-3");
        for (std::size_t j = 0; j < lam.size(); ++j) {
            const double bound = 2.0 * std::exp(-lam[j] * lam[j] / (2.0 * std::exp(1.0) * M * c * c));
            v.require(bound >= up[j], "bound below upper CI at lambda " + num(lam[j]));
        }
    }
    return v;
}

Verdict c7(const json& d) {
    Verdict v;
    const auto ps = d.at("p").get<std::vector<double>>();
    std::vector<double> lp, lk;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        lp.push_back(std::log(ps[i]));
        lk.push_back(std::log(val(d.at("K").at(i))));
    }
    const double s = slope(lp, lk);
    v.require(ps == std::vector<double>{2, 4, 8, 16}, "p set");
    v.require(0.3 <= s && s <= 0.7, "slope " + num(s));
    return v;
}

Verdict c8(const json& d) {
    Verdict v;
    for (const auto& a : d.at("agreement")) {
        const double diff = val(a.at("K_space")) - val(a.at("K_scalar"));
        const double ci = std::hypot(half(a.at("K_space")), half(a.at("K_scalar")));
        v.require(std::abs(diff) <= 3.0 * ci, "(p,q)=(" + num(a.at("p")) + "," + num(a.at("q")) + ") diff " + num(diff));
    }
    v.require(d.at("agreement").size() == 3, "pair set");
    const json& in = d.at("interpolation");
    const double theta = 2.0 / 3.0; // 1/3 = (1 - theta)/2 + theta/4
    const double k2 = val(in.at("K_l2")), k3 = val(in.at("K_lq")), k4 = val(in.at("K_lp"));
    const double a = std::pow(k2, 1.0 - theta) * std::pow(k4, theta);
    const double gap = a - k3;
    const double ci = std::sqrt(std::pow((1.0 - theta) * a / k2 * half(in.at("K_l2")), 2) +
                                std::pow(theta * a / k4 * half(in.at("K_lp")), 2) + std::pow(half(in.at("K_lq")), 2));
    v.require(std::abs(val(in.at("theta")) - theta) < 1e-12, "theta");
    v.require(gap >= -3.0 * ci, "interpolation gap " + num(gap));
    return v;
}

Verdict c9(const json& d) {
    Verdict v;
    for (double p : {2.0, 4.0}) {
        const double pp = p / (p - 1.0);
        for (const auto& m : d.at(p == 2.0 ? "p2" : "p4")) {
            const double rel = half(m) / val(m);
            v.require(val(m) <= pp * (1.0 + 3.0 * rel), "p=" + num(p) + " ratio " + num(val(m)));
        }
    }
    return v;
}

Verdict c10(const json& d) {
    Verdict v;
    v.require(val(d.at("lyapunov_residual")) <= 1e-10, "Lyapunov residual " + num(val(d.at("lyapunov_residual"))));
    v.require(val(d.at("contraction")) <= 1.0 + 1e-8, "contraction " + num(val(d.at("contraction"))));
    v.require(val(d.at("diagonal_collapse")) <= 1e-10, "collapse " + num(val(d.at("diagonal_collapse"))));
    v.require(d.at("generators").get<int>() == 100, "generator count");
    return v;
}

Verdict c11(const json& d) {
    Verdict v;
    for (const auto& p : d.at("probes")) {
        const double r = p.at("r").get<double>();
        const std::string tag = "(r,q)=(" + num(r) + "," + num(p.at("q").get<double>()) + ")";
        v.require(std::abs(val(p.at("k1_hat")) - r) <= 1e-10, tag + " k1");
        v.require(val(p.at("fd_hessian_residual")) <= 1e-6, tag + " Hessian");
        v.require(val(p.at("scale_residual")) <= 1e-12, tag + " homogeneity");
    }
    v.require(d.at("probes").size() == 3, "probe set");
    return v;
}

Verdict c12(const json& d) {
    Verdict v;
    const auto g = values(d.at("median_gap"));
    v.require(g.size() == 3, "three refinements");
    for (std::size_t i = 1; i < g.size(); ++i) v.require(g[i] < g[i - 1], "not strictly decreasing at " + std::to_string(i));
    return v;
}

stochconv::Report run_suite(int threads, const std::string& out) {
    stochconv::ExperimentConfig c = stochconv::default_config("suite");
    c.sampling.threads = threads;
    const auto t0 = std::chrono::steady_clock::now();
    stochconv::Report r = stochconv::run_experiment(c);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cerr << "suite with " << threads << " worker(s): " << num(secs) << " s\n";
    stochconv::write_report(r, out);
    return r;
}

} // namespace

int main(int argc, char** argv) {
    std::string out = "acceptance_out";
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--out") out = argv[i + 1];

    const std::vector<std::function<Verdict(const json&)>> eval{c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12};
    bool all = true;
    auto line = [&](const std::string& name, const Verdict& v) {
        all = all && v.pass;
        std::cout << (v.pass ? "PASS " : "FAIL ") << name << (v.note.empty() ? "" : "  " + v.note) << std::endl;
    };

    const stochconv::Report r8 = run_suite(8, (std::filesystem::path(out) / "threads8").string());
    const json j = json::parse(r8.dump());
    const auto& names = stochconv::suite_check_names();
    for (std::size_t i = 0; i < names.size(); ++i) {
        Verdict v;
        const json* found = nullptr;
        for (const auto& c : j.at("checks"))
            if (c.at("name") == names[i]) found = &c;
        if (!found) {
            v.require(false, "missing from report");
        } else {
            try {
                v = eval[i](found->at("details"));
            } catch (const std::exception& e) {
                v.require(false, std::string("malformed details: ") + e.what());
            }
            // The library's own verdict must agree with the independent one.
            v.require((found->at("verdict") == "pass") == v.pass, "library verdict disagrees");
        }
        line(names[i], v);
    }

    const stochconv::Report r1 = run_suite(1, (std::filesystem::path(out) / "threads1").string());
    Verdict v13;
    v13.require(r1.dump() == r8.dump(), "1-worker and 8-worker reports differ");
    line("C13", v13);
    return all ? 0 : 1;
}
