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

#include "stochconv/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace stochconv {

namespace {

namespace pt = boost::property_tree;

[[noreturn]] void fail(const std::string& field, const std::string& why) {
    throw ConfigError("invalid config field " + field + ": " + why);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double parse_double(const std::string& field, const std::string& text) {
    const std::string t = trim(text);
    // from_chars takes no leading '+'
    const char* first = t.data() + (t.size() > 1 && t[0] == '+' && t[1] != '-' && t[1] != '+');
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) fail(field, "expected a finite number, got '" + t + "'");
    return v;
}

std::uint64_t parse_u64(const std::string& field, const std::string& text) {
    const std::string t = trim(text);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) fail(field, "expected a non-negative integer, got '" + t + "'");
    return v;
}

int parse_int(const std::string& field, const std::string& text) {
    const std::string t = trim(text);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) fail(field, "expected an integer, got '" + t + "'");
    return v;
}

// a, a+bi, a-bi, bi
cplx parse_complex(const std::string& field, const std::string& text) {
    std::string t = trim(text);
    if (t.empty()) fail(field, "empty mode");
    if (t.back() != 'i') return parse_double(field, t);
    t.pop_back();
    std::size_t split = std::string::npos;
    for (std::size_t i = t.size(); i-- > 1;)
        if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') {
            split = i;
            break;
        }
    if (split == std::string::npos) return cplx(0.0, parse_double(field, t));
    const double re = parse_double(field, t.substr(0, split));
    std::string im = t.substr(split);
    if (im == "+" || im == "-") im += "1";
    return cplx(re, parse_double(field, im));
}

std::string format_complex(cplx z) {
    if (z.imag() == 0.0) return format_double(z.real());
    std::string s = format_double(z.real());
    if (!std::signbit(z.imag())) s += '+';
    return s + format_double(z.imag()) + "i";
}

template <class T, class F>
std::string join(const std::vector<T>& v, F f) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + f(v[i]);
    return s;
}

} // namespace

std::string format_double(double x) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

const std::vector<std::string>& experiment_kinds() {
    static const std::vector<std::string> k = {"convolve", "bdg", "tail", "interp", "doob",
                                               "dilation-check", "renorm-check", "cr-probe", "suite"};
    return k;
}

void validate(const ExperimentConfig& c) {
    const auto& kinds = experiment_kinds();
    if (std::find(kinds.begin(), kinds.end(), c.kind) == kinds.end()) fail("experiment.kind", "unknown kind '" + c.kind + "'");
    if (c.id.empty()) fail("experiment.id", "must not be empty");
    if (!(c.space.q >= 1.0)) fail("space.q", "q must be ≥ 1");
    if (c.space.d < 1 || c.space.d > 4096) fail("space.d", "dimension must be in [1, 4096]");
    const std::string& g = c.generator.kind;
    if (g != "heat" && g != "spectral" && g != "sectorial") fail("generator.kind", "expected heat, spectral or sectorial");
    if (g == "spectral") {
        if (int(c.generator.modes.size()) != c.space.d) fail("generator.modes", "need exactly d modes");
    } else if (!c.generator.modes.empty()) {
        fail("generator.modes", "only used with kind = spectral");
    }
    const std::string& p = c.process.kind;
    if (p != "constant" && p != "rank-one" && p != "bdg-family" && p != "maximal-family" && p != "tail-family")
        fail("process.kind", "unknown process '" + p + "'");
    if (!(c.process.budget > 0.0)) fail("process.budget", "must be positive");
    if (c.process.member < -1 || c.process.member >= 20) fail("process.member", "must be -1 or in [0, 20)");
    if (!(c.grid.T > 0.0)) fail("grid.T", "must be positive");
    if (c.grid.N < 1) fail("grid.N", "must be ≥ 1");
    if (c.grid.refinements < 0 || c.grid.refinements > 12) fail("grid.refinements", "must be in [0, 12]");
    if (c.sampling.paths < 1000) fail("sampling.paths", "need at least 1000 paths");
    if (c.sampling.scheme != "exact" && c.sampling.scheme != "euler" && c.sampling.scheme != "ito")
        fail("sampling.scheme", "expected exact, euler or ito");
    if (c.sampling.threads < 1 || c.sampling.threads > 1024) fail("sampling.threads", "must be in [1, 1024]");
    if (c.checks.p.empty()) fail("checks.p", "need at least one moment order");
    for (double v : c.checks.p)
        if (!(v > 0.0)) fail("checks.p", "moment orders must be positive");
    if (!(c.checks.r >= 1.0)) fail("checks.r", "must be ≥ 1");
    if (!(c.checks.q_mid >= 1.0)) fail("checks.q_mid", "q must be ≥ 1");
    if (c.checks.samples < 1) fail("checks.samples", "must be positive");
    if (c.checks.lambda_points < 3) fail("checks.lambda_points", "need at least 3 points");
    if (!(c.checks.tolerance >= 0.0)) fail("checks.tolerance", "must be ≥ 0");
}

ExperimentConfig parse_config(std::istream& in) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("malformed config: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
    }
    ExperimentConfig c;
    static const std::map<std::string, std::set<std::string>> known = {
        {"experiment", {"kind", "id"}},
        {"generator", {"kind", "modes", "seed"}},
        {"space", {"q", "d"}},
        {"process", {"kind", "amplitude", "budget", "member"}},
        {"grid", {"T", "N", "refinements"}},
        {"sampling", {"paths", "seed", "scheme", "threads"}},
        {"checks", {"p", "r", "q_mid", "samples", "lambda_points", "tolerance"}},
    };
    for (const auto& [section, body] : tree) {
        const auto it = known.find(section);
        if (it == known.end()) {
            if (body.empty()) fail(section, "keys must live in a [section]");
            fail(section, "unknown section");
        }
        for (const auto& [key, value] : body) {
            const std::string field = section + "." + key;
            if (!it->second.count(key)) fail(field, "unknown key");
            const std::string v = value.get_value<std::string>();
            if (section == "experiment") {
                if (key == "kind") c.kind = trim(v);
                else c.id = trim(v);
            } else if (section == "generator") {
                if (key == "kind") c.generator.kind = trim(v);
                else if (key == "seed") c.generator.seed = parse_u64(field, v);
                else {
                    c.generator.modes.clear();
                    for (const auto& m : split_list(v)) c.generator.modes.push_back(parse_complex(field, m));
                }
            } else if (section == "space") {
                if (key == "q") c.space.q = parse_double(field, v);
                else c.space.d = parse_int(field, v);
            } else if (section == "process") {
                if (key == "kind") c.process.kind = trim(v);
                else if (key == "amplitude") c.process.amplitude = parse_double(field, v);
                else if (key == "budget") c.process.budget = parse_double(field, v);
                else c.process.member = parse_int(field, v);
            } else if (section == "grid") {
                if (key == "T") c.grid.T = parse_double(field, v);
                else if (key == "N") c.grid.N = parse_int(field, v);
                else c.grid.refinements = parse_int(field, v);
            } else if (section == "sampling") {
                if (key == "paths") c.sampling.paths = parse_u64(field, v);
                else if (key == "seed") c.sampling.seed = parse_u64(field, v);
                else if (key == "scheme") c.sampling.scheme = trim(v);
                else c.sampling.threads = parse_int(field, v);
            } else {
                if (key == "p") {
                    c.checks.p.clear();
                    for (const auto& s : split_list(v)) c.checks.p.push_back(parse_double(field, s));
                } else if (key == "r") c.checks.r = parse_double(field, v);
                else if (key == "q_mid") c.checks.q_mid = parse_double(field, v);
                else if (key == "samples") c.checks.samples = parse_int(field, v);
                else if (key == "lambda_points") c.checks.lambda_points = parse_int(field, v);
                else c.checks.tolerance = parse_double(field, v);
            }
        }
    }
    validate(c);
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in);
}

std::string serialize(const ExperimentConfig& c, bool include_runtime) {
    std::ostringstream os;
    auto d = [](double x) { return format_double(x); };
    os << "[experiment]\nkind = " << c.kind << "\nid = " << c.id << "\n\n";
    os << "[generator]\nkind = " << c.generator.kind << "\n";
    if (!c.generator.modes.empty()) os << "modes = " << join(c.generator.modes, format_complex) << "\n";
    os << "seed = " << c.generator.seed << "\n\n";
    os << "[space]\nq = " << d(c.space.q) << "\nd = " << c.space.d << "\n\n";
    os << "[process]\nkind = " << c.process.kind << "\namplitude = " << d(c.process.amplitude) << "\nbudget = "
       << d(c.process.budget) << "\nmember = " << c.process.member << "\n\n";
    os << "[grid]\nT = " << d(c.grid.T) << "\nN = " << c.grid.N << "\nrefinements = " << c.grid.refinements << "\n\n";
    os << "[sampling]\npaths = " << c.sampling.paths << "\nseed = " << c.sampling.seed << "\nscheme = " << c.sampling.scheme << "\n";
    if (include_runtime) os << "threads = " << c.sampling.threads << "\n";
    os << "\n[checks]\np = " << join(c.checks.p, d) << "\nr = " << d(c.checks.r) << "\nq_mid = " << d(c.checks.q_mid)
       << "\nsamples = " << c.checks.samples << "\nlambda_points = " << c.checks.lambda_points
       << "\ntolerance = " << d(c.checks.tolerance) << "\n";
    return os.str();
}

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string config_hash(const ExperimentConfig& c) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(serialize(c, false))));
    return buf;
}

} // namespace stochconv
