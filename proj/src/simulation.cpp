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

#include "stateest/simulation.hpp"

#include <cmath>
#include <sstream>

#include "parallel.hpp"
#include "stateest/errors.hpp"

namespace stateest {
namespace {

constexpr double kPsdIndicatorTolerance = 1e-12;
// Stream reserved for drawing a random true state, disjoint from trial streams.
constexpr std::uint64_t kStateStream = 0x5354415445ULL;

struct TrialEstimates {
  TraceOneHermitian unconstrained;
  DensityMatrix constrained;
};

// One end-to-end estimation at a fixed schedule value.
class Pipeline {
 public:
  Pipeline(const DensityMatrix& rho, const SchemeSpec& scheme, std::uint64_t schedule_value)
      : kind_(scheme.kind), directions_(scheme.directions), shots_(schedule_value) {
    switch (kind_) {
      case SchemeKind::KLevelPairs:
        plan_.emplace(rho.dim(), schedule_value);
        for (const auto& e : plan_->entries()) probs_.push_back(outcome_probabilities(e.observable, rho));
        break;
      case SchemeKind::ThreeDirection:
        for (int i = 0; i < 3; ++i) {
          probs_.push_back(outcome_probabilities(direction_observable(directions_.direction(i)), rho));
        }
        break;
      case SchemeKind::Standard:
        probs_.push_back(outcome_probabilities(standard_povm(), rho));
        break;
      case SchemeKind::Minimal:
        probs_.push_back(outcome_probabilities(minimal_povm(), rho));
        break;
    }
  }

  TrialEstimates run(RngStream& rng) const {
    std::vector<OutcomeCounts> counts;
    counts.reserve(probs_.size());
    for (const auto& p : probs_) counts.push_back(sample_counts(p, shots_, rng));

    if (kind_ == SchemeKind::KLevelPairs) {
      const UnconstrainedEstimate un = unconstrained_estimate(*plan_, counts);
      ConstrainedEstimate con = constrained_estimate(un);
      return {un.matrix, std::move(con.matrix)};
    }
    SchemeEstimate est{};
    switch (kind_) {
      case SchemeKind::ThreeDirection: est = three_direction_estimate(counts, directions_); break;
      case SchemeKind::Standard: est = standard_estimate(counts[0]); break;
      default: est = minimal_estimate(counts[0]); break;
    }
    const BlochVector projected = qubit_constrain_bloch(est.theta_hat);
    return {bloch_to_matrix(est.theta_hat), DensityMatrix(bloch_to_matrix(projected).matrix())};
  }

 private:
  SchemeKind kind_;
  DirectionTriple directions_;
  std::uint64_t shots_;
  std::optional<MeasurementPlan> plan_;
  std::vector<std::vector<double>> probs_;
};

double metric_value(Metric m, const DensityMatrix& rho, const TrialEstimates& est) {
  const HermitianMatrix& un = est.unconstrained.matrix();
  const HermitianMatrix& con = est.constrained.matrix();
  switch (m) {
    case Metric::HsUnconstrained: return hs_distance(rho.matrix(), un);
    case Metric::HsConstrained: return hs_distance(rho.matrix(), con);
    case Metric::FidelityUnconstrained: return fidelity(rho.matrix(), un);
    case Metric::FidelityConstrained: return fidelity(rho.matrix(), con);
    case Metric::PsdFraction: return is_psd(un, kPsdIndicatorTolerance) ? 1.0 : 0.0;
    case Metric::DetMean: return determinant(un);
  }
  return 0.0;
}

MeanWithError summarize(const std::vector<double>& values) {
  const auto n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

bool is_qubit_scheme(SchemeKind k) { return k != SchemeKind::KLevelPairs; }

}  // namespace

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::HsUnconstrained: return "hs-unconstrained";
    case Metric::HsConstrained: return "hs-constrained";
    case Metric::FidelityUnconstrained: return "fidelity-unconstrained";
    case Metric::FidelityConstrained: return "fidelity-constrained";
    case Metric::PsdFraction: return "psd-fraction";
    case Metric::DetMean: return "det-mean";
  }
  return "unknown";
}

std::optional<Metric> parse_metric(std::string_view name) {
  for (Metric m : {Metric::HsUnconstrained, Metric::HsConstrained, Metric::FidelityUnconstrained,
                   Metric::FidelityConstrained, Metric::PsdFraction, Metric::DetMean}) {
    if (metric_name(m) == name) return m;
  }
  return std::nullopt;
}

std::string_view scheme_kind_name(SchemeKind s) {
  switch (s) {
    case SchemeKind::KLevelPairs: return "klevel-pairs";
    case SchemeKind::ThreeDirection: return "three-direction";
    case SchemeKind::Standard: return "standard";
    case SchemeKind::Minimal: return "minimal";
  }
  return "unknown";
}

std::optional<SchemeKind> parse_scheme_kind(std::string_view name) {
  for (SchemeKind s : {SchemeKind::KLevelPairs, SchemeKind::ThreeDirection, SchemeKind::Standard,
                       SchemeKind::Minimal}) {
    if (scheme_kind_name(s) == name) return s;
  }
  if (name == "comp" || name == "complementary") return SchemeKind::ThreeDirection;
  return std::nullopt;
}

DensityMatrix resolve_state(const ExperimentConfig& cfg) {
  if (const auto* theta = std::get_if<BlochVector>(&cfg.state)) {
    if (!theta->is_state()) throw DomainError("true Bloch vector lies outside the unit ball");
    return DensityMatrix(bloch_to_matrix(*theta).matrix());
  }
  if (const auto* m = std::get_if<HermitianMatrix>(&cfg.state)) return DensityMatrix(*m);
  const auto& requested = std::get<RandomSpectrumState>(cfg.state);
  RngStream rng(cfg.seed, kStateStream);
  return random_density(static_cast<int>(requested.eigenvalues.size()), rng, FixedSpectrum{requested.eigenvalues});
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.schedule.empty()) throw DomainError("schedule must not be empty");
  for (std::size_t i = 0; i < cfg.schedule.size(); ++i) {
    if (cfg.schedule[i] == 0) throw DomainError("schedule values must be positive");
    if (i > 0 && cfg.schedule[i] <= cfg.schedule[i - 1]) {
      throw DomainError("schedule must be strictly increasing");
    }
  }
  if (cfg.trials < 1) throw DomainError("trials must be at least 1");
  if (cfg.metrics.empty()) throw DomainError("at least one metric is required");
  const int k = resolve_state(cfg).dim();
  if (is_qubit_scheme(cfg.scheme.kind) && k != 2) {
    throw DomainError(std::string(scheme_kind_name(cfg.scheme.kind)) + " scheme requires a qubit state");
  }
  if (cfg.scheme.kind == SchemeKind::ThreeDirection) cfg.scheme.directions.inverse();
  for (Metric m : cfg.metrics) {
    if (m == Metric::FidelityUnconstrained && k != 2) {
      throw DomainError("fidelity-unconstrained is only defined for qubits (estimates may be indefinite)");
    }
  }
}

std::uint64_t copies_for(const ExperimentConfig& cfg, int dim, std::uint64_t schedule_value) {
  switch (cfg.scheme.kind) {
    case SchemeKind::KLevelPairs:
      return schedule_value * static_cast<std::uint64_t>(dim * dim - 1);
    case SchemeKind::ThreeDirection: return 3 * schedule_value;
    default: return schedule_value;
  }
}

TrajectoryRecord run_trajectory(const ExperimentConfig& cfg, unsigned workers) {
  validate(cfg);
  const DensityMatrix rho = resolve_state(cfg);
  const RngStream base(cfg.seed);
  const std::size_t metric_count = cfg.metrics.size();

  TrajectoryRecord record{cfg.seed, {}};
  for (std::size_t s = 0; s < cfg.schedule.size(); ++s) {
    const Pipeline pipeline(rho, cfg.scheme, cfg.schedule[s]);
    const RngStream point_stream = base.derive(s);
    std::vector<double> values(cfg.trials * metric_count);
    detail::parallel_for(cfg.trials, workers, [&](std::uint64_t t) {
      RngStream stream = point_stream.derive(t);
      const TrialEstimates est = pipeline.run(stream);
      for (std::size_t m = 0; m < metric_count; ++m) {
        values[t * metric_count + m] = metric_value(cfg.metrics[m], rho, est);
      }
    });
    for (std::size_t m = 0; m < metric_count; ++m) {
      std::vector<double> column(cfg.trials);
      for (std::uint64_t t = 0; t < cfg.trials; ++t) column[t] = values[t * metric_count + m];
      const MeanWithError stats = summarize(column);
      record.points.push_back({s, cfg.schedule[s], copies_for(cfg, rho.dim(), cfg.schedule[s]),
                               cfg.metrics[m], stats.mean, stats.standard_error, cfg.trials});
    }
  }
  return record;
}

DecayFit indefinite_decay_rate(const DensityMatrix& rho, const std::vector<std::uint64_t>& schedule,
                               std::uint64_t trials, const RngStream& rng, unsigned workers) {
  if (min_eigenvalue(rho.matrix()) < 0.01) {
    throw DomainError("decay experiment requires an invertible state (smallest eigenvalue >= 0.01)");
  }
  if (schedule.empty() || trials == 0) throw DomainError("schedule and trials must be nonempty");

  DecayFit fit;
  const SchemeSpec scheme{};
  const auto block = static_cast<std::uint64_t>(rho.dim() * rho.dim() - 1);
  for (std::size_t s = 0; s < schedule.size(); ++s) {
    const Pipeline pipeline(rho, scheme, schedule[s]);
    const RngStream point_stream = rng.derive(s);
    std::vector<unsigned char> indefinite(trials, 0);
    detail::parallel_for(trials, workers, [&](std::uint64_t t) {
      RngStream stream = point_stream.derive(t);
      indefinite[t] = is_psd(pipeline.run(stream).unconstrained.matrix(), kPsdIndicatorTolerance) ? 0 : 1;
    });
    std::uint64_t hits = 0;
    for (unsigned char v : indefinite) hits += v;
    fit.points.push_back({schedule[s], schedule[s] * block,
                          static_cast<double>(hits) / static_cast<double>(trials)});
  }

  std::vector<double> xs, ys;
  for (const auto& p : fit.points) {
    if (p.indefinite_fraction > 0.0) {
      xs.push_back(static_cast<double>(p.copies));
      ys.push_back(std::log(p.indefinite_fraction));
    }
  }
  fit.fitted_points = xs.size();
  if (xs.size() < 2) {
    fit.partial = true;
    fit.slope = fit.intercept = fit.r_squared = std::nan("");
    return fit;
  }
  const auto n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  fit.partial = fit.fitted_points < fit.points.size();
  return fit;
}

DensityMatrix plus_state() { return DensityMatrix(bloch_to_matrix(BlochVector{{1.0, 0.0, 0.0}}).matrix()); }

MeanWithError pure_state_det_mean(std::uint64_t repetitions, std::uint64_t trials, const RngStream& rng,
                                  unsigned workers) {
  if (trials == 0) throw DomainError("trials must be positive");
  const Pipeline pipeline(plus_state(), SchemeSpec{}, repetitions);
  std::vector<double> dets(trials);
  detail::parallel_for(trials, workers, [&](std::uint64_t t) {
    RngStream stream = rng.derive(t);
    dets[t] = determinant(pipeline.run(stream).unconstrained.matrix());
  });
  return summarize(dets);
}

EstimateMeans klevel_estimate_means(const DensityMatrix& rho, std::uint64_t repetitions,
                                    std::uint64_t trials, const RngStream& rng, unsigned workers) {
  if (trials < 2) throw DomainError("need at least two trials for standard errors");
  const int k = rho.dim();
  const Pipeline pipeline(rho, SchemeSpec{}, repetitions);
  std::vector<ComplexMatrix> un(trials), con(trials);
  detail::parallel_for(trials, workers, [&](std::uint64_t t) {
    RngStream stream = rng.derive(t);
    const TrialEstimates est = pipeline.run(stream);
    un[t] = est.unconstrained.matrix().entries();
    con[t] = est.constrained.matrix().entries();
  });

  const auto aggregate = [&](const std::vector<ComplexMatrix>& samples) {
    const auto n = static_cast<double>(samples.size());
    ComplexMatrix mean = ComplexMatrix::Zero(k, k);
    for (const auto& m : samples) mean += m;
    mean /= n;
    Eigen::MatrixXd var_re = Eigen::MatrixXd::Zero(k, k), var_im = Eigen::MatrixXd::Zero(k, k);
    for (const auto& m : samples) {
      const ComplexMatrix d = m - mean;
      var_re += d.real().cwiseAbs2();
      var_im += d.imag().cwiseAbs2();
    }
    const double scale = 1.0 / ((n - 1.0) * n);
    ComplexMatrix se(k, k);
    se.real() = (var_re * scale).cwiseSqrt();
    se.imag() = (var_im * scale).cwiseSqrt();
    return EntrywiseMean{mean, se};
  };
  return {aggregate(un), aggregate(con)};
}

}  // namespace stateest
