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

#include <string>
#include <vector>

#include "stochconv/config.hpp"
#include "stochconv/report.hpp"

namespace stochconv {

struct RunOptions {
    /// Check names to run; empty runs all.
    std::vector<std::string> only;

    bool enabled(const std::string& name) const;
};

/// Runs one experiment. Throws ConfigError for kind-specific
/// configuration problems and NumericalError / std::invalid_argument
/// for numerical failures. Worker count comes from c.sampling.threads
/// and never changes the report.
Report run_experiment(const ExperimentConfig& c, const RunOptions& opt = {});

/// Report carrying only an error message (no checks, verdict fail).
Report error_report(const ExperimentConfig& c, const std::string& message);

/// Ready-to-run configuration for each experiment kind.
ExperimentConfig default_config(const std::string& kind);

/// C1 ... C12, in suite order.
const std::vector<std::string>& suite_check_names();

} // namespace stochconv
