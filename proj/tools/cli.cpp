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

#include <filesystem>
#include <map>
#include <ostream>
#include <set>

#include "CLI11.hpp"
#include "stateest/error_analysis.hpp"
#include "stateest/errors.hpp"
#include "stateest/estimators.hpp"
#include "stateest_cli.hpp"

namespace stateest::cli {
namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

struct Options {
  std::string matrix_text;
  std::string input_path;
  std::string config_path;
  std::string out;
  std::string scheme;
  std::vector<double> theta;
  std::vector<double> directions;
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  std::uint64_t n = 0;
  unsigned workers = 0;
  int grid = 10;
  bool svg = false;
};

ordered to_ordered(const json& j) { return ordered::parse(j.dump()); }

// One top-level key per line with compact values, so matrices stay legible.
std::string render(const ordered& result) {
  std::string text = "{\n";
  std::size_t i = 0;
  for (const auto& item : result.items()) {
    text += "  " + ordered(item.key()).dump() + ": " + item.value().dump();
    text += ++i < result.size() ? ",\n" : "\n";
  }
  return text + "}\n";
}

BlochVector theta_from(const std::vector<double>& v) {
  if (v.size() != 3) throw ConfigError("--theta needs three components");
  return {{v[0], v[1], v[2]}};
}

DirectionTriple directions_from(const std::vector<double>& v) {
  if (v.empty()) return DirectionTriple::orthonormal();
  if (v.size() != 9) throw ConfigError("--directions needs nine numbers (rows of T)");
  Eigen::Matrix3d t;
  for (int i = 0; i < 3; ++i)
    for (int c = 0; c < 3; ++c) t(i, c) = v[static_cast<std::size_t>(3 * i + c)];
  return DirectionTriple(t);
}

// Matrix given inline (--matrix) or as a file holding either the bare
// nested array or {"matrix": ...}.
ComplexMatrix matrix_input(const Options& o) {
  json j;
  if (!o.matrix_text.empty()) {
    j = parse_json_text(o.matrix_text, "--matrix");
  } else if (!o.input_path.empty()) {
    j = read_json_file(o.input_path);
  } else {
    throw ConfigError("a matrix is required (--matrix or --input)");
  }
  if (j.is_object()) {
    if (j.size() != 1 || !j.contains("matrix")) throw ConfigError("matrix file must hold only a 'matrix' key");
    j = j["matrix"];
  }
  return parse_matrix(j);
}

std::vector<std::uint64_t> count_array(const json& j, const std::string& what) {
  if (!j.is_array()) throw ConfigError(what + " must be an array of counts");
  std::vector<std::uint64_t> c;
  for (const auto& v : j) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) throw ConfigError(what + " entries must be nonnegative integers");
    c.push_back(v.get<std::uint64_t>());
  }
  return c;
}

void add_estimates(ordered& result, const TraceOneHermitian& un, const ConstrainedEstimate& con) {
  result["unconstrained"] = to_ordered(matrix_to_json(un.matrix().entries()));
  result["unconstrained_psd"] = is_psd(un.matrix(), 1e-12);
  result["constrained"] = to_ordered(matrix_to_json(con.matrix.matrix().entries()));
  result["constrained_psd"] = is_psd(con.matrix.matrix(), 1e-12);
  result["steps"] = con.steps;
  result["distance"] = hs_distance(un.matrix(), con.matrix.matrix());
}

int cmd_project(const Options& o, std::ostream& out) {
  const TraceOneHermitian phi{HermitianMatrix(matrix_input(o))};
  const ConstrainedEstimate c = constrained_estimate(phi);
  ordered result;
  result["matrix"] = to_ordered(matrix_to_json(c.matrix.matrix().entries()));
  result["steps"] = c.steps;
  result["distance"] = hs_distance(phi.matrix(), c.matrix.matrix());
  out << render(result);
  return kOk;
}

int cmd_estimate(const Options& o, std::ostream& out) {
  if (o.input_path.empty()) throw ConfigError("--counts is required");
  const json j = read_json_file(o.input_path);
  if (!j.is_object()) throw ConfigError("counts file must be a JSON object");
  for (const auto& item : j.items()) {
    if (item.key() != "scheme" && item.key() != "dim" && item.key() != "counts" && item.key() != "directions") {
      throw ConfigError("unknown key '" + item.key() + "' in counts file");
    }
  }
  std::string scheme = o.scheme;
  if (scheme.empty()) scheme = j.contains("scheme") ? j["scheme"].get<std::string>() : "klevel-pairs";
  const auto kind = parse_scheme_kind(scheme);
  if (!kind) throw ConfigError("unknown scheme '" + scheme + "'");
  if (!j.contains("counts")) throw ConfigError("counts file is missing 'counts'");
  const json& counts = j["counts"];

  ordered result;
  result["scheme"] = scheme_kind_name(*kind);
  if (*kind == SchemeKind::KLevelPairs) {
    if (!j.contains("dim") || !j["dim"].is_number_integer()) throw ConfigError("klevel-pairs counts need integer 'dim'");
    const int k = j["dim"].get<int>();
    if (k < 2) throw ConfigError("dim must be at least 2");
    if (!counts.is_object()) throw ConfigError("klevel-pairs counts must map labels such as Z11, X12 to arrays");
    const MeasurementPlan labels(k, 1);
    std::set<std::string> expected;
    for (const auto& e : labels.entries()) expected.insert(e.label());
    for (const auto& item : counts.items()) {
      if (!expected.contains(item.key())) throw ConfigError("unexpected observable label '" + item.key() + "'");
    }
    std::vector<OutcomeCounts> tallies;
    for (const auto& e : labels.entries()) {
      if (!counts.contains(e.label())) throw ConfigError("missing counts for " + e.label());
      const std::vector<std::uint64_t> c = count_array(counts[e.label()], e.label());
      if (c.size() != e.observable.size()) {
        throw ConfigError(e.label() + " needs " + std::to_string(e.observable.size()) + " outcome counts");
      }
      tallies.emplace_back(c);
    }
    const MeasurementPlan plan(k, tallies.front().total());
    const UnconstrainedEstimate un = unconstrained_estimate(plan, tallies);
    result["dim"] = k;
    result["repetitions"] = plan.repetitions();
    add_estimates(result, un.matrix, constrained_estimate(un));
  } else {
    SchemeEstimate est{};
    if (*kind == SchemeKind::ThreeDirection) {
      if (!counts.is_array() || counts.size() != 3) throw ConfigError("three-direction counts are three [plus, minus] pairs");
      std::vector<OutcomeCounts> tallies;
      for (const auto& c : counts) {
        const std::vector<std::uint64_t> v = count_array(c, "direction counts");
        if (v.size() != 2) throw ConfigError("three-direction counts are three [plus, minus] pairs");
        tallies.emplace_back(v);
      }
      std::vector<double> dirs = o.directions;
      if (dirs.empty() && j.contains("directions")) {
        for (const auto& row : j["directions"])
          for (const auto& x : row) dirs.push_back(x.get<double>());
      }
      est = three_direction_estimate(tallies, directions_from(dirs));
    } else if (*kind == SchemeKind::Standard) {
      est = standard_estimate(OutcomeCounts(count_array(counts, "standard counts")));
    } else {
      est = minimal_estimate(OutcomeCounts(count_array(counts, "minimal counts")));
    }
    const TraceOneHermitian un = est.matrix();
    result["theta_hat"] = {est.theta_hat[0], est.theta_hat[1], est.theta_hat[2]};
    add_estimates(result, un, constrained_estimate(un));
  }
  out << render(result);
  return kOk;
}

int cmd_simulate(const Options& o, std::ostream& out, const CLI::App& sub) {
  if (o.config_path.empty()) throw ConfigError("--config is required");
  const json j = read_json_file(o.config_path);
  SimulateSettings s;
  try {
    s = parse_simulate_config(j);
    if (sub.count("--seed") > 0) s.experiment.seed = o.seed;
    if (sub.count("--trials") > 0) s.experiment.trials = o.trials;
    if (sub.count("--scheme") > 0) {
      const auto kind = parse_scheme_kind(o.scheme);
      if (!kind) throw ConfigError("unknown scheme '" + o.scheme + "'");
      s.experiment.scheme.kind = *kind;
    }
    if (sub.count("--out") > 0) s.out_dir = o.out;
    if (sub.count("--workers") > 0) s.workers = o.workers;
    if (o.svg) s.svg = true;
    validate(s.experiment);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }

  const TrajectoryRecord record = run_trajectory(s.experiment, s.workers);
  std::error_code ec;
  std::filesystem::create_directories(s.out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + s.out_dir.string());
  for (Metric m : s.experiment.metrics) {
    const std::filesystem::path csv = s.out_dir / (std::string(metric_name(m)) + ".csv");
    write_file_atomic(csv, format_csv(record, m));
    out << "wrote " << csv.string() << '\n';
    if (s.svg) {
      const std::filesystem::path svg = s.out_dir / (std::string(metric_name(m)) + ".svg");
      write_file_atomic(svg, format_svg(record, m));
      out << "wrote " << svg.string() << '\n';
    }
  }
  return kOk;
}

int cmd_mse(const Options& o, std::ostream& out) {
  const BlochVector theta = theta_from(o.theta);
  if (o.n == 0) throw ConfigError("--n must be a positive integer");
  const auto n = static_cast<double>(o.n);
  MseMatrix m{};
  std::string name = o.scheme;
  if (o.scheme == "comp" || o.scheme == "complementary") {
    name = "comp";
    m = mse_complementary(theta, n);
  } else if (o.scheme == "three-direction") {
    if (o.n % 3 != 0) throw DomainError("three-direction needs n divisible by 3");
    m = mse_three_direction(theta, directions_from(o.directions), o.n / 3);
  } else if (o.scheme == "standard") {
    m = mse_standard(theta, n);
  } else if (o.scheme == "minimal") {
    m = mse_minimal(theta, n);
  } else {
    throw ConfigError("unknown scheme '" + o.scheme + "' (comp, three-direction, standard, minimal)");
  }
  ordered result;
  result["scheme"] = name;
  result["theta"] = {theta[0], theta[1], theta[2]};
  result["n"] = o.n;
  ordered rows = ordered::array();
  for (int i = 0; i < 3; ++i) rows.push_back({m.entries(i, 0), m.entries(i, 1), m.entries(i, 2)});
  result["matrix"] = rows;
  result["trace"] = m.trace();
  result["determinant"] = m.determinant();
  out << render(result);
  return kOk;
}

int cmd_compare(const Options& o, std::ostream& out) {
  if (o.grid < 1) throw ConfigError("--grid must be at least 1");
  const std::uint64_t n = o.n == 0 ? 30 : o.n;
  if (n % 3 != 0) throw ConfigError("--n must be a multiple of 3 for the trace comparison");
  std::string csv =
      "theta1,theta2,theta3,min_eig_standard_minus_comp,standard_minus_comp_psd,trace_comp,trace_minimal,"
      "comp_trace_not_worse\n";
  std::size_t points = 0, psd = 0, not_worse = 0;
  for (const BlochVector& t : ball_grid(o.grid)) {
    const StandardVsComplementary sc = compare_standard_vs_complementary(t, static_cast<double>(n));
    const TraceComparison tc = compare_traces_min_vs_comp(t, n);
    csv += format_double(t[0]) + ',' + format_double(t[1]) + ',' + format_double(t[2]) + ',' +
           format_double(sc.min_eigenvalue) + ',' + (sc.is_psd ? "1" : "0") + ',' +
           format_double(tc.trace_complementary) + ',' + format_double(tc.trace_minimal) + ',' +
           (tc.complementary_not_worse ? "1" : "0") + '\n';
    ++points;
    psd += sc.is_psd ? 1 : 0;
    not_worse += tc.complementary_not_worse ? 1 : 0;
  }
  if (o.out.empty()) {
    out << csv;
  } else {
    write_file_atomic(o.out, csv);
    out << "wrote " << o.out << ": " << points << " points, standard-minus-comp PSD at " << psd
        << ", comp trace not worse at " << not_worse << '\n';
  }
  return kOk;
}

ordered measurement_json(const std::string& label, const std::vector<double>& values, const std::vector<double>& probs) {
  ordered m;
  m["label"] = label;
  if (!values.empty()) m["values"] = values;
  m["probabilities"] = probs;
  double sum = 0.0;
  for (double p : probs) sum += p;
  m["probability_sum"] = sum;
  return m;
}

std::vector<double> values_of(const Observable& obs) {
  std::vector<double> v;
  for (const auto& outcome : obs.outcomes()) v.push_back(outcome.value);
  return v;
}

double completeness_residual(const std::vector<HermitianMatrix>& parts) {
  ComplexMatrix sum = ComplexMatrix::Zero(parts.front().dim(), parts.front().dim());
  for (const auto& p : parts) sum += p.entries();
  return (sum - ComplexMatrix::Identity(sum.rows(), sum.cols())).norm();
}

int cmd_povm_check(const Options& o, std::ostream& out) {
  const auto kind = parse_scheme_kind(o.scheme.empty() ? "klevel-pairs" : o.scheme);
  if (!kind) throw ConfigError("unknown scheme '" + o.scheme + "'");
  const DensityMatrix rho = !o.theta.empty() ? DensityMatrix(bloch_to_matrix(theta_from(o.theta)).matrix())
                                             : DensityMatrix(HermitianMatrix(matrix_input(o)));
  if (*kind != SchemeKind::KLevelPairs && rho.dim() != 2) throw DomainError("qubit schemes need a 2 x 2 state");

  ordered result;
  result["scheme"] = scheme_kind_name(*kind);
  result["dim"] = rho.dim();
  ordered measurements = ordered::array();
  double worst = 0.0;
  const auto observable = [&](const std::string& label, const Observable& obs) {
    std::vector<HermitianMatrix> projectors;
    for (const auto& outcome : obs.outcomes()) projectors.push_back(outcome.projector);
    worst = std::max(worst, completeness_residual(projectors));
    measurements.push_back(measurement_json(label, values_of(obs), outcome_probabilities(obs, rho)));
  };
  if (*kind == SchemeKind::KLevelPairs) {
    const MeasurementPlan plan(rho.dim(), 1);
    for (const auto& e : plan.entries()) observable(e.label(), e.observable);
  } else if (*kind == SchemeKind::ThreeDirection) {
    const DirectionTriple dirs = directions_from(o.directions);
    dirs.inverse();
    for (int i = 0; i < 3; ++i) observable("u" + std::to_string(i + 1), direction_observable(dirs.direction(i)));
  } else {
    const Povm povm = *kind == SchemeKind::Standard ? standard_povm() : minimal_povm();
    worst = completeness_residual(povm.effects());
    measurements.push_back(measurement_json(std::string(scheme_kind_name(*kind)), {}, outcome_probabilities(povm, rho)));
  }
  result["valid"] = true;
  result["completeness_residual"] = worst;
  result["measurements"] = measurements;
  out << render(result);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum state estimation simulator", "stateest"};
  app.require_subcommand(1);
  Options o;

  auto* project = app.add_subcommand("project", "Project a trace-one Hermitian matrix onto the density matrices");
  project->add_option("--matrix", o.matrix_text, "Matrix as JSON rows of [re, im] entries");
  project->add_option("--input", o.input_path, "JSON file holding the matrix");

  auto* estimate = app.add_subcommand("estimate", "Unconstrained and constrained estimates from a counts file");
  estimate->add_option("--counts,--input", o.input_path, "JSON counts file")->required();
  estimate->add_option("--scheme", o.scheme, "Override the scheme named in the counts file");
  estimate->add_option("--directions", o.directions, "Rows of T for three-direction, nine numbers")->delimiter(',');

  auto* simulate = app.add_subcommand("simulate", "Run a seeded Monte Carlo experiment and write CSV per metric");
  simulate->add_option("--config", o.config_path, "JSON experiment config")->required();
  simulate->add_option("--seed", o.seed, "Master seed");
  simulate->add_option("--trials", o.trials, "Trials per schedule point")->check(CLI::PositiveNumber);
  simulate->add_option("--scheme", o.scheme, "klevel-pairs, three-direction, standard or minimal");
  simulate->add_option("--out", o.out, "Output directory");
  simulate->add_option("--workers", o.workers, "Worker threads (0 = all cores)");
  simulate->add_flag("--svg", o.svg, "Also write an SVG plot per metric");

  auto* mse = app.add_subcommand("mse", "Analytic mean quadratic error matrix of a qubit scheme");
  mse->add_option("--scheme", o.scheme, "comp, three-direction, standard or minimal")->required();
  mse->add_option("--theta", o.theta, "Bloch vector, e.g. 0.3,0.4,0.5")->delimiter(',')->required();
  mse->add_option("--n", o.n, "Total number of copies")->required();
  mse->add_option("--directions", o.directions, "Rows of T, nine numbers")->delimiter(',');

  auto* compare = app.add_subcommand("compare", "Compare standard, complementary and minimal schemes on a ball grid");
  compare->add_option("--grid", o.grid, "Subdivisions per axis of the cube grid")->capture_default_str();
  compare->add_option("--n", o.n, "Total number of copies (multiple of 3), default 30");
  compare->add_option("--out", o.out, "CSV output path (default stdout)");

  auto* povm = app.add_subcommand("povm-check", "Check measurement invariants and print outcome probabilities");
  povm->add_option("--scheme", o.scheme, "klevel-pairs, three-direction, standard or minimal");
  povm->add_option("--theta", o.theta, "Qubit state as a Bloch vector")->delimiter(',');
  povm->add_option("--matrix", o.matrix_text, "State as JSON rows of [re, im] entries");
  povm->add_option("--input", o.input_path, "JSON file holding the state matrix");
  povm->add_option("--directions", o.directions, "Rows of T, nine numbers")->delimiter(',');

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (project->parsed()) return cmd_project(o, out);
    if (estimate->parsed()) return cmd_estimate(o, out);
    if (simulate->parsed()) return cmd_simulate(o, out, *simulate);
    if (mse->parsed()) return cmd_mse(o, out);
    if (compare->parsed()) return cmd_compare(o, out);
    return cmd_povm_check(o, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  }
}

}  // namespace stateest::cli
