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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include "stateest/errors.hpp"
#include "stateest_cli.hpp"

namespace stateest::cli {
namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& item : obj.items()) {
    if (!allowed.contains(item.key())) throw ConfigError("unknown key '" + item.key() + "' in " + where);
  }
}

double as_double(const json& j, const std::string& what) {
  if (!j.is_number()) throw ConfigError(what + " must be a number");
  return j.get<double>();
}

std::uint64_t as_u64(const json& j, const std::string& what) {
  if (!j.is_number_unsigned()) {
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return j.get<std::uint64_t>();
    throw ConfigError(what + " must be a nonnegative integer");
  }
  return j.get<std::uint64_t>();
}

std::vector<double> as_double_array(const json& j, const std::string& what) {
  if (!j.is_array()) throw ConfigError(what + " must be an array of numbers");
  std::vector<double> v;
  for (const auto& x : j) v.push_back(as_double(x, what + " entry"));
  return v;
}

Eigen::Matrix3d parse_directions(const json& j) {
  if (!j.is_array() || j.size() != 3) throw ConfigError("directions must be three rows of three numbers");
  Eigen::Matrix3d t;
  for (int i = 0; i < 3; ++i) {
    const std::vector<double> row = as_double_array(j[static_cast<std::size_t>(i)], "directions row");
    if (row.size() != 3) throw ConfigError("directions must be three rows of three numbers");
    for (int c = 0; c < 3; ++c) t(i, c) = row[static_cast<std::size_t>(c)];
  }
  return t;
}

StateSpec parse_state(const json& j) {
  if (!j.is_object() || j.size() != 1) {
    throw ConfigError("state must be an object with exactly one of 'bloch', 'matrix', 'random_spectrum'");
  }
  reject_unknown_keys(j, {"bloch", "matrix", "random_spectrum"}, "state");
  if (j.contains("bloch")) {
    const std::vector<double> v = as_double_array(j["bloch"], "state.bloch");
    if (v.size() != 3) throw ConfigError("state.bloch must have three entries");
    return BlochVector{{v[0], v[1], v[2]}};
  }
  if (j.contains("matrix")) return HermitianMatrix(parse_matrix(j["matrix"]));
  return RandomSpectrumState{as_double_array(j["random_spectrum"], "state.random_spectrum")};
}

}  // namespace

ComplexMatrix parse_matrix(const json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("matrix must be a nonempty array of rows");
  const std::size_t k = j.size();
  ComplexMatrix m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  for (std::size_t r = 0; r < k; ++r) {
    if (!j[r].is_array() || j[r].size() != k) throw ConfigError("matrix must be square");
    for (std::size_t c = 0; c < k; ++c) {
      const json& e = j[r][c];
      Complex value;
      if (e.is_number()) {
        value = e.get<double>();
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        value = Complex(e[0].get<double>(), e[1].get<double>());
      } else {
        throw ConfigError("matrix entries must be numbers or [re, im] pairs");
      }
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = value;
    }
  }
  return m;
}

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    // Adding 0.0 turns -0.0 into 0.0.
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real() + 0.0, m(r, c).imag() + 0.0});
    rows.push_back(row);
  }
  return rows;
}

SimulateSettings parse_simulate_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown_keys(j, {"state", "scheme", "directions", "schedule", "trials", "seed", "metrics", "out", "svg", "workers"},
                      "config");
  for (const char* required : {"state", "schedule", "metrics"}) {
    if (!j.contains(required)) throw ConfigError(std::string("config is missing '") + required + "'");
  }
  SimulateSettings s;
  ExperimentConfig& e = s.experiment;
  e.state = parse_state(j["state"]);
  if (j.contains("scheme")) {
    if (!j["scheme"].is_string()) throw ConfigError("scheme must be a string");
    const auto kind = parse_scheme_kind(j["scheme"].get<std::string>());
    if (!kind) throw ConfigError("unknown scheme '" + j["scheme"].get<std::string>() + "'");
    e.scheme.kind = *kind;
  }
  if (j.contains("directions")) e.scheme.directions = DirectionTriple(parse_directions(j["directions"]));
  if (!j["schedule"].is_array()) throw ConfigError("schedule must be an array of positive integers");
  for (const auto& v : j["schedule"]) e.schedule.push_back(as_u64(v, "schedule entry"));
  if (j.contains("trials")) e.trials = as_u64(j["trials"], "trials");
  if (j.contains("seed")) e.seed = as_u64(j["seed"], "seed");
  if (!j["metrics"].is_array()) throw ConfigError("metrics must be an array of names");
  for (const auto& m : j["metrics"]) {
    if (!m.is_string()) throw ConfigError("metric names must be strings");
    const auto metric = parse_metric(m.get<std::string>());
    if (!metric) throw ConfigError("unknown metric '" + m.get<std::string>() + "'");
    e.metrics.push_back(*metric);
  }
  if (j.contains("out")) {
    if (!j["out"].is_string()) throw ConfigError("out must be a string path");
    s.out_dir = j["out"].get<std::string>();
  }
  if (j.contains("svg")) {
    if (!j["svg"].is_boolean()) throw ConfigError("svg must be true or false");
    s.svg = j["svg"].get<bool>();
  }
  if (j.contains("workers")) s.workers = static_cast<unsigned>(as_u64(j["workers"], "workers"));
  return s;
}

json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(what + " is not valid JSON: " + e.what());
  }
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str(), path.string());
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_csv(const TrajectoryRecord& record, Metric metric) {
  std::string csv = "n,metric,mean,stderr,trials,seed\n";
  for (const TrajectoryPoint& p : record.points) {
    if (p.metric != metric) continue;
    csv += std::to_string(p.copies) + ',' + std::string(metric_name(metric)) + ',' + format_double(p.mean) + ',' +
           format_double(p.standard_error) + ',' + std::to_string(p.trials) + ',' + std::to_string(record.seed) + '\n';
  }
  return csv;
}

std::string format_svg(const TrajectoryRecord& record, Metric metric) {
  std::vector<const TrajectoryPoint*> pts;
  for (const TrajectoryPoint& p : record.points) {
    if (p.metric == metric) pts.push_back(&p);
  }
  const double w = 640, h = 400, left = 70, right = 20, top = 30, bottom = 50;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto* p : pts) {
    const double n = static_cast<double>(p->copies);
    xmin = std::min(xmin, n);
    xmax = std::max(xmax, n);
    ymin = std::min(ymin, p->mean - p->standard_error);
    ymax = std::max(ymax, p->mean + p->standard_error);
  }
  const bool log_x = !pts.empty() && xmin > 0 && xmax / xmin >= 10.0;
  const auto fx = [&](double n) {
    const double a = log_x ? std::log10(xmin) : xmin, b = log_x ? std::log10(xmax) : xmax;
    const double v = log_x ? std::log10(n) : n;
    return left + (b > a ? (v - a) / (b - a) : 0.5) * (w - left - right);
  };
  if (ymax <= ymin) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const auto fy = [&](double v) { return top + (ymax - v) / (ymax - ymin) * (h - top - bottom); };

  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << w << "\" height=\"" << h << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<line x1=\"" << left << "\" y1=\"" << h - bottom << "\" x2=\"" << w - right << "\" y2=\"" << h - bottom
    << "\" stroke=\"black\"/>\n"
    << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << h - bottom
    << "\" stroke=\"black\"/>\n"
    << "<text x=\"" << (w + left) / 2 << "\" y=\"" << h - 12 << "\" text-anchor=\"middle\" font-size=\"13\">n"
    << (log_x ? " (log scale)" : "") << "</text>\n"
    << "<text x=\"" << left << "\" y=\"" << top - 10 << "\" font-size=\"13\">" << metric_name(metric) << "</text>\n"
    << "<text x=\"" << left - 6 << "\" y=\"" << fy(ymax) + 4 << "\" text-anchor=\"end\" font-size=\"11\">"
    << format_double(ymax).substr(0, 8) << "</text>\n"
    << "<text x=\"" << left - 6 << "\" y=\"" << fy(ymin) + 4 << "\" text-anchor=\"end\" font-size=\"11\">"
    << format_double(ymin).substr(0, 8) << "</text>\n";
  if (!pts.empty()) {
    s << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
    for (const auto* p : pts) s << fx(static_cast<double>(p->copies)) << ',' << fy(p->mean) << ' ';
    s << "\"/>\n";
    for (const auto* p : pts) {
      const double x = fx(static_cast<double>(p->copies));
      s << "<line x1=\"" << x << "\" y1=\"" << fy(p->mean - p->standard_error) << "\" x2=\"" << x << "\" y2=\""
        << fy(p->mean + p->standard_error) << "\" stroke=\"steelblue\"/>\n"
        << "<circle cx=\"" << x << "\" cy=\"" << fy(p->mean) << "\" r=\"3\" fill=\"steelblue\"/>\n"
        << "<text x=\"" << x << "\" y=\"" << h - bottom + 16 << "\" text-anchor=\"middle\" font-size=\"11\">"
        << p->copies << "</text>\n";
    }
  }
  s << "<text x=\"" << w - right << "\" y=\"" << top - 10 << "\" text-anchor=\"end\" font-size=\"11\" "
    << "fill=\"steelblue\">mean +/- stderr, seed " << record.seed << "</text>\n"
    << "</svg>\n";
  return s.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << contents;
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw IoError("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot rename into " + path.string());
  }
}

}  // namespace stateest::cli
