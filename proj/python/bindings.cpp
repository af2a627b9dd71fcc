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

#include <map>
#include <string>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "stateest/error_analysis.hpp"
#include "stateest/errors.hpp"
#include "stateest/estimators.hpp"
#include "stateest/matrix.hpp"
#include "stateest/measurement.hpp"
#include "stateest/simulation.hpp"
#include "stateest/states.hpp"

namespace py = pybind11;
using namespace stateest;

namespace {

BlochVector bloch(const std::array<double, 3>& t) { return BlochVector{t}; }

DirectionTriple directions_or_default(const std::optional<Eigen::Matrix3d>& rows) {
  return rows ? DirectionTriple(*rows) : DirectionTriple::orthonormal();
}

py::dict estimate_dict(const TraceOneHermitian& un, const ConstrainedEstimate& con) {
  py::dict d;
  d["unconstrained"] = un.matrix().entries();
  d["constrained"] = con.matrix.matrix().entries();
  d["steps"] = con.steps;
  d["unconstrained_psd"] = is_psd(un.matrix(), DensityMatrix::kPsdTolerance);
  d["constrained_psd"] = is_psd(con.matrix.matrix(), DensityMatrix::kPsdTolerance);
  d["distance"] = hs_distance(un.matrix(), con.matrix.matrix());
  return d;
}

SchemeSpec scheme_spec(const std::string& name, const std::optional<Eigen::Matrix3d>& directions) {
  const auto kind = parse_scheme_kind(name);
  if (!kind) throw UnsupportedInput("unknown scheme '" + name + "'");
  return SchemeSpec{*kind, directions_or_default(directions)};
}

StateSpec state_spec(const py::object& state) {
  if (py::isinstance<py::dict>(state)) {
    const auto d = state.cast<py::dict>();
    if (d.size() == 1 && d.contains("random_spectrum")) {
      return RandomSpectrumState{d["random_spectrum"].cast<std::vector<double>>()};
    }
    throw UnsupportedInput("state dict must be {'random_spectrum': [...]}");
  }
  const auto m = state.cast<ComplexMatrix>();
  if (m.size() == 3 && (m.rows() == 1 || m.cols() == 1)) {
    return BlochVector{{m(0).real(), m(1).real(), m(2).real()}};
  }
  return HermitianMatrix(m);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Quantum state estimation from finite measurement records";

  auto domain = py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<UnsupportedInput>(m, "UnsupportedInput", domain.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

  m.def(
      "eigh",
      [](const ComplexMatrix& h) {
        const Spectrum s = hermitian_eig(HermitianMatrix(h));
        return py::make_tuple(s.eigenvalues, s.eigenvectors);
      },
      py::arg("matrix"), "Eigenvalues (descending) and eigenvectors of a Hermitian matrix.");
  m.def(
      "hs_distance",
      [](const ComplexMatrix& a, const ComplexMatrix& b) { return hs_distance(HermitianMatrix(a), HermitianMatrix(b)); },
      py::arg("a"), py::arg("b"));
  m.def(
      "fidelity",
      [](const ComplexMatrix& a, const ComplexMatrix& b) { return fidelity(HermitianMatrix(a), HermitianMatrix(b)); },
      py::arg("a"), py::arg("b"));

  m.def(
      "bloch_to_matrix", [](const std::array<double, 3>& t) { return bloch_to_matrix(bloch(t)).matrix().entries(); },
      py::arg("theta"));
  m.def(
      "matrix_to_bloch", [](const ComplexMatrix& a) { return matrix_to_bloch(HermitianMatrix(a)).theta; },
      py::arg("matrix"));

  m.def(
      "project",
      [](const ComplexMatrix& phi) {
        const TraceOneHermitian t{HermitianMatrix(phi)};
        const ConstrainedEstimate c = constrained_estimate(t);
        return py::make_tuple(c.matrix.matrix().entries(), c.steps, hs_distance(t.matrix(), c.matrix.matrix()));
      },
      py::arg("matrix"), "Closest density matrix; returns (matrix, steps, distance).");
  m.def(
      "project_simplex",
      [](const std::vector<double>& x) {
        const SimplexProjection p = project_nonneg_simplex(x);
        return py::make_tuple(p.values, p.steps);
      },
      py::arg("values"));

  m.def(
      "plan_outcomes",
      [](int dim) {
        const MeasurementPlan plan(dim, 1);
        std::map<std::string, std::vector<double>> out;
        for (const auto& e : plan.entries()) {
          std::vector<double> values;
          for (const auto& o : e.observable.outcomes()) values.push_back(o.value);
          out[e.label()] = values;
        }
        return out;
      },
      py::arg("dim"), "Observable labels and their outcome values in count order.");
  m.def(
      "outcome_probabilities",
      [](const ComplexMatrix& rho) {
        const DensityMatrix d{HermitianMatrix(rho)};
        const MeasurementPlan plan(d.dim(), 1);
        std::map<std::string, std::vector<double>> out;
        for (const auto& e : plan.entries()) out[e.label()] = outcome_probabilities(e.observable, d);
        return out;
      },
      py::arg("rho"));

  m.def(
      "estimate",
      [](int dim, const std::map<std::string, std::vector<std::uint64_t>>& counts) {
        const MeasurementPlan labels(dim, 1);
        if (counts.size() != labels.size()) throw DomainError("counts must cover every observable exactly once");
        std::vector<OutcomeCounts> tallies;
        for (const auto& e : labels.entries()) {
          const auto it = counts.find(e.label());
          if (it == counts.end()) throw DomainError("missing counts for " + e.label());
          tallies.emplace_back(it->second);
        }
        const MeasurementPlan plan(dim, tallies.front().total());
        const UnconstrainedEstimate un = unconstrained_estimate(plan, tallies);
        return estimate_dict(un.matrix, constrained_estimate(un));
      },
      py::arg("dim"), py::arg("counts"), "Estimates from pairwise-observable counts keyed by label.");
  m.def(
      "estimate_qubit",
      [](const std::string& scheme, const std::vector<std::vector<std::uint64_t>>& counts,
         const std::optional<Eigen::Matrix3d>& directions) {
        SchemeEstimate est{};
        if (scheme == "three-direction") {
          std::vector<OutcomeCounts> tallies(counts.begin(), counts.end());
          est = three_direction_estimate(tallies, directions_or_default(directions));
        } else if (scheme == "standard" || scheme == "minimal") {
          if (counts.size() != 1) throw DomainError(scheme + " takes a single list of counts");
          const OutcomeCounts c(counts.front());
          est = scheme == "standard" ? standard_estimate(c) : minimal_estimate(c);
        } else {
          throw UnsupportedInput("unknown qubit scheme '" + scheme + "'");
        }
        const TraceOneHermitian un = est.matrix();
        py::dict d = estimate_dict(un, constrained_estimate(un));
        d["theta_hat"] = est.theta_hat.theta;
        return d;
      },
      py::arg("scheme"), py::arg("counts"), py::arg("directions") = py::none());

  m.def(
      "mse",
      [](const std::string& scheme, const std::array<double, 3>& theta, double n,
         const std::optional<Eigen::Matrix3d>& directions) {
        if (scheme == "comp" || scheme == "complementary") return mse_complementary(bloch(theta), n).entries;
        if (scheme == "standard") return mse_standard(bloch(theta), n).entries;
        if (scheme == "minimal") return mse_minimal(bloch(theta), n).entries;
        if (scheme == "three-direction") {
          if (n < 3 || std::fmod(n, 3.0) != 0.0) throw DomainError("three-direction needs n divisible by 3");
          return mse_three_direction(bloch(theta), directions_or_default(directions),
                                     static_cast<std::uint64_t>(n / 3))
              .entries;
        }
        throw UnsupportedInput("unknown scheme '" + scheme + "'");
      },
      py::arg("scheme"), py::arg("theta"), py::arg("n"), py::arg("directions") = py::none());
  m.def(
      "empirical_mse",
      [](const std::string& scheme, const std::array<double, 3>& theta, std::uint64_t n, std::uint64_t trials,
         std::uint64_t seed, const std::optional<Eigen::Matrix3d>& directions, unsigned workers) {
        QubitScheme s;
        if (scheme == "three-direction") {
          s = ThreeDirectionScheme{directions_or_default(directions)};
        } else if (scheme == "standard") {
          s = StandardScheme{};
        } else if (scheme == "minimal") {
          s = MinimalScheme{};
        } else {
          throw UnsupportedInput("unknown scheme '" + scheme + "'");
        }
        const EmpiricalMse e = empirical_mse(s, bloch(theta), n, trials, RngStream(seed), workers);
        return py::make_tuple(e.mse.entries, e.standard_error);
      },
      py::arg("scheme"), py::arg("theta"), py::arg("n"), py::arg("trials"), py::arg("seed") = kDefaultSeed,
      py::arg("directions") = py::none(), py::arg("workers") = 1);
  m.def(
      "average_mse_over_ball",
      [](const Eigen::Matrix3d& directions) {
        const BallAverage b = average_mse_over_ball(DirectionTriple(directions));
        return py::make_tuple(b.matrix, b.determinant);
      },
      py::arg("directions"));
  m.def(
      "compare_standard_vs_complementary",
      [](const std::array<double, 3>& theta, double n) {
        const auto c = compare_standard_vs_complementary(bloch(theta), n);
        return py::make_tuple(c.difference, c.min_eigenvalue, c.is_psd);
      },
      py::arg("theta"), py::arg("n"));
  m.def(
      "compare_traces",
      [](const std::array<double, 3>& theta, std::uint64_t n) {
        const auto c = compare_traces_min_vs_comp(bloch(theta), n);
        return py::make_tuple(c.trace_complementary, c.trace_minimal, c.complementary_not_worse);
      },
      py::arg("theta"), py::arg("n"));
  m.def("ball_average_factor", [] { return kBallAverageFactor; });

  m.def(
      "simulate",
      [](const py::object& state, const std::vector<std::uint64_t>& schedule, const std::vector<std::string>& metrics,
         std::uint64_t trials, std::uint64_t seed, const std::string& scheme,
         const std::optional<Eigen::Matrix3d>& directions, unsigned workers) {
        ExperimentConfig cfg{state_spec(state), scheme_spec(scheme, directions), schedule, trials, seed, {}};
        for (const auto& name : metrics) {
          const auto metric = parse_metric(name);
          if (!metric) throw UnsupportedInput("unknown metric '" + name + "'");
          cfg.metrics.push_back(*metric);
        }
        TrajectoryRecord rec;
        {
          py::gil_scoped_release release;
          rec = run_trajectory(cfg, workers);
        }
        py::list rows;
        for (const auto& p : rec.points) {
          py::dict row;
          row["n"] = p.copies;
          row["schedule_value"] = p.schedule_value;
          row["metric"] = std::string(metric_name(p.metric));
          row["mean"] = p.mean;
          row["stderr"] = p.standard_error;
          row["trials"] = p.trials;
          row["seed"] = rec.seed;
          rows.append(row);
        }
        return rows;
      },
      py::arg("state"), py::arg("schedule"), py::arg("metrics"), py::arg("trials") = 1, py::arg("seed") = kDefaultSeed,
      py::arg("scheme") = "klevel-pairs", py::arg("directions") = py::none(), py::arg("workers") = 1,
      "Monte Carlo trajectory. state is a Bloch vector, a density matrix, or {'random_spectrum': [...]}.");
}
