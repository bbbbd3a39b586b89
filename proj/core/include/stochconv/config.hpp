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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "stochconv/common.hpp"

namespace stochconv {

/// Invalid or unreadable configuration; the message names the field.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GeneratorConfig {
    std::string kind = "heat"; // heat | spectral | sectorial
    std::vector<cplx> modes;   // spectral only
    std::uint64_t seed = 1;    // sectorial only
};

struct SpaceConfig {
    double q = 2.0;
    int d = 8;
};

struct ProcessConfig {
    /// constant | rank-one | bdg-family | maximal-family | tail-family
    std::string kind = "constant";
    double amplitude = 1.0;
    double budget = 1.0; // tail-family: a.s. bound M on int ||G||^2 dt
    int member = -1;     // maximal-family: single member (0-based), -1 for all
};

struct GridConfig {
    double T = 1.0;
    int N = 64;
    int refinements = 0;
};

struct SamplingConfig {
    std::size_t paths = 10000;
    std::uint64_t seed = 1;
    std::string scheme = "exact"; // exact | euler | ito
    int threads = 1;              // runtime only: not part of the hash
};

struct ChecksConfig {
    std::vector<double> p{2.0, 4.0};
    double r = 4.0;          // cr-probe exponent; interp: the outer p is p.back()
    double q_mid = 3.0;      // interp: middle exponent
    int samples = 1000;      // probe cloud / matrices / coupled paths
    int lambda_points = 12;
    double tolerance = 0.0;  // 0 selects the per-kind default
};

struct ExperimentConfig {
    std::string kind = "convolve";
    std::string id = "experiment";
    GeneratorConfig generator;
    SpaceConfig space;
    ProcessConfig process;
    GridConfig grid;
    SamplingConfig sampling;
    ChecksConfig checks;
};

const std::vector<std::string>& experiment_kinds();

/// Throws ConfigError naming the offending field.
void validate(const ExperimentConfig& c);

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

/// Canonical INI text; doubles in shortest round-trip form. With
/// include_runtime = false the worker count is omitted.
std::string serialize(const ExperimentConfig& c, bool include_runtime = true);

/// FNV-1a 64 of the canonical text without runtime fields, as 16 hex digits.
std::string config_hash(const ExperimentConfig& c);

std::uint64_t fnv1a64(const std::string& s);

/// Shortest decimal that parses back to the same double.
std::string format_double(double x);

} // namespace stochconv
