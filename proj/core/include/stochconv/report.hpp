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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "stochconv/stats.hpp"

namespace stochconv {

using Json = nlohmann::ordered_json;

enum class Provenance { Exact, Quadrature, MonteCarlo };

const char* provenance_name(Provenance p);

/// A reported number with its provenance; Monte-Carlo values carry a CI.
struct Statistic {
    double value = 0.0;
    Provenance provenance = Provenance::Exact;
    std::optional<std::pair<double, double>> ci;

    static Statistic exact(double v) { return {v, Provenance::Exact, std::nullopt}; }
    static Statistic quadrature(double v) { return {v, Provenance::Quadrature, std::nullopt}; }
    static Statistic mc(double v, double lo, double hi) { return {v, Provenance::MonteCarlo, std::make_pair(lo, hi)}; }
    static Statistic mc(const Estimate& e) { return mc(e.value, e.ci_low, e.ci_high); }

    Json to_json() const;
};

/// Threshold as data: op is one of "<=", ">=", "<", ">", "in", "ci-contains", "decreasing".
struct Threshold {
    std::string op;
    double a = 0.0;
    double b = 0.0;

    Json to_json() const;
};

struct Check {
    std::string name;
    std::string description;
    Statistic statistic;
    Threshold threshold;
    bool pass = false;
    Json details = Json::object();
};

struct CsvTable {
    std::string file; // relative to the output directory
    std::string text;
};

struct Report {
    std::string id;
    std::string kind;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::vector<Check> checks;
    std::optional<std::string> error;
    std::vector<CsvTable> tables;

    bool all_pass() const;
    const Check* find(const std::string& name) const;
    Json to_json() const;
    /// Pretty JSON, two-space indent, trailing newline.
    std::string dump() const;
};

/// Writes report.json and every CSV table into dir (created if needed).
void write_report(const Report& r, const std::string& dir);

/// Statistic arrays inside details: {"provenance": ..., "values": [...]}.
Json tagged_values(const std::vector<double>& v, Provenance p);

} // namespace stochconv
