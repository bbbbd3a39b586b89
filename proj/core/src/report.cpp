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

#include "stochconv/report.hpp"

#include <filesystem>
#include <fstream>

namespace stochconv {

const char* provenance_name(Provenance p) {
    switch (p) {
    case Provenance::Exact: return "exact";
    case Provenance::Quadrature: return "quadrature";
    case Provenance::MonteCarlo: return "mc";
    }
    return "exact";
}

Json Statistic::to_json() const {
    Json j;
    j["value"] = value;
    j["provenance"] = provenance_name(provenance);
    if (ci) j["ci"] = Json::array({ci->first, ci->second});
    else j["ci"] = nullptr;
    return j;
}

Json Threshold::to_json() const {
    Json j;
    j["op"] = op;
    if (op == "in") j["range"] = Json::array({a, b});
    else if (op != "decreasing") j["value"] = a;
    return j;
}

bool Report::all_pass() const {
    if (error) return false;
    for (const Check& c : checks)
        if (!c.pass) return false;
    return true;
}

const Check* Report::find(const std::string& name) const {
    for (const Check& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

Json Report::to_json() const {
    Json j;
    j["id"] = id;
    j["kind"] = kind;
    j["config_hash"] = config_hash;
    j["seed"] = seed;
    Json arr = Json::array();
    for (const Check& c : checks) {
        Json cj;
        cj["name"] = c.name;
        cj["description"] = c.description;
        cj["statistic"] = c.statistic.to_json();
        cj["threshold"] = c.threshold.to_json();
        cj["verdict"] = c.pass ? "pass" : "fail";
        cj["details"] = c.details;
        arr.push_back(std::move(cj));
    }
    j["checks"] = std::move(arr);
    if (error) j["error"] = *error;
    j["verdict"] = all_pass() ? "pass" : "fail";
    return j;
}

std::string Report::dump() const { return to_json().dump(2) + "\n"; }

void write_report(const Report& r, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    auto put = [&](const std::string& name, const std::string& text) {
        std::ofstream out(fs::path(dir) / name, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + (fs::path(dir) / name).string());
        out << text;
    };
    put("report.json", r.dump());
    for (const CsvTable& t : r.tables) put(t.file, t.text);
}

Json tagged_values(const std::vector<double>& v, Provenance p) {
    Json j;
    j["provenance"] = provenance_name(p);
    j["values"] = v;
    return j;
}

} // namespace stochconv
