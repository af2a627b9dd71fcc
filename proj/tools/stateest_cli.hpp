// Copyright 2026 The stateest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "stateest/simulation.hpp"

namespace stateest::cli {

enum ExitCode : int { kOk = 0, kUsageError = 2, kDomainError = 3, kIoError = 4 };

/// Malformed input or configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File system failure (exit code 4).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SimulateSettings {
  ExperimentConfig experiment;
  std::filesystem::path out_dir = ".";
  bool svg = false;
  unsigned workers = 1;
};

/// Complex matrix from nested rows; each entry is [re, im] or a bare real.
ComplexMatrix parse_matrix(const nlohmann::json& j);
nlohmann::json matrix_to_json(const ComplexMatrix& m);

/// Strict: unknown keys and wrongly typed values raise ConfigError.
SimulateSettings parse_simulate_config(const nlohmann::json& j);

nlohmann::json read_json_file(const std::filesystem::path& path);
nlohmann::json parse_json_text(const std::string& text, const std::string& what);

/// %.17g, which round-trips every finite double.
std::string format_double(double v);

/// Header "n,metric,mean,stderr,trials,seed" and one row per schedule point.
std::string format_csv(const TrajectoryRecord& record, Metric metric);

/// Line chart of mean +- standard error against n for one metric.
std::string format_svg(const TrajectoryRecord& record, Metric metric);

/// Write to a sibling temporary file, then rename over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

/// Entry point shared by the executable and the tests. args[0] is the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stateest::cli
