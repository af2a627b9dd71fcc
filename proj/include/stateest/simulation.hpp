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

#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "stateest/estimators.hpp"
#include "stateest/measurement.hpp"
#include "stateest/rng.hpp"
#include "stateest/states.hpp"

namespace stateest {

/// Random state with a prescribed spectrum, drawn from the experiment seed.
struct RandomSpectrumState {
  std::vector<double> eigenvalues;
};
using StateSpec = std::variant<BlochVector, HermitianMatrix, RandomSpectrumState>;

enum class SchemeKind { KLevelPairs, ThreeDirection, Standard, Minimal };

struct SchemeSpec {
  SchemeKind kind = SchemeKind::KLevelPairs;
  DirectionTriple directions = DirectionTriple::orthonormal();
};

enum class Metric {
  HsUnconstrained,
  HsConstrained,
  FidelityUnconstrained,
  FidelityConstrained,
  PsdFraction,
  DetMean,
};

std::string_view metric_name(Metric m);
std::optional<Metric> parse_metric(std::string_view name);
std::string_view scheme_kind_name(SchemeKind s);
std::optional<SchemeKind> parse_scheme_kind(std::string_view name);

inline constexpr std::uint64_t kDefaultSeed = 42;

/// Schedule values are repetitions per observable for klevel-pairs and
/// three-direction, and total shots for the two POVM schemes.
struct ExperimentConfig {
  StateSpec state;
  SchemeSpec scheme;
  std::vector<std::uint64_t> schedule;
  std::uint64_t trials = 1;
  std::uint64_t seed = kDefaultSeed;
  std::vector<Metric> metrics;
};

struct TrajectoryPoint {
  std::size_t schedule_index;
  std::uint64_t schedule_value;
  std::uint64_t copies;  // total copies n consumed per trial
  Metric metric;
  double mean;
  double standard_error;
  std::uint64_t trials;
};

struct TrajectoryRecord {
  std::uint64_t seed;
  std::vector<TrajectoryPoint> points;  // schedule-major, metrics in config order
};

/// Throws DomainError describing the first problem found.
void validate(const ExperimentConfig& cfg);

/// The true state the experiment samples from.
DensityMatrix resolve_state(const ExperimentConfig& cfg);

/// Copies consumed per trial at a schedule value.
std::uint64_t copies_for(const ExperimentConfig& cfg, int dim, std::uint64_t schedule_value);

/// Runs `trials` sample -> unconstrained -> constrained pipelines at every
/// schedule point and aggregates the requested metrics. Trial t at schedule
/// index s draws from RngStream(seed).derive(s).derive(t), so the record is
/// bit-identical for any worker count (0 = hardware concurrency).
TrajectoryRecord run_trajectory(const ExperimentConfig& cfg, unsigned workers = 1);

struct DecayPoint {
  std::uint64_t repetitions;
  std::uint64_t copies;
  double indefinite_fraction;
};

struct DecayFit {
  std::vector<DecayPoint> points;
  double slope = 0.0;  // d log(p) / d n
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t fitted_points = 0;
  bool partial = false;  // fewer than two points with p > 0
};

/// Fraction of k-level unconstrained estimates that are not PSD at each
/// repetition count, and a least-squares fit of log(fraction) against n.
/// Requires the smallest eigenvalue of rho to be at least 0.01.
DecayFit indefinite_decay_rate(const DensityMatrix& rho, const std::vector<std::uint64_t>& schedule,
                               std::uint64_t trials, const RngStream& rng, unsigned workers = 1);

/// The pure qubit state 1/2 [[1, 1], [1, 1]].
DensityMatrix plus_state();

struct MeanWithError {
  double mean;
  double standard_error;
};

/// Monte Carlo mean of det of the k-level unconstrained estimate for
/// plus_state() at r repetitions per observable.
MeanWithError pure_state_det_mean(std::uint64_t repetitions, std::uint64_t trials,
                                  const RngStream& rng, unsigned workers = 1);

struct EntrywiseMean {
  ComplexMatrix mean;
  ComplexMatrix standard_error;  // real / imaginary parts separately
};

struct EstimateMeans {
  EntrywiseMean unconstrained;
  EntrywiseMean constrained;
};

/// Entrywise Monte Carlo means of the k-level estimators.
EstimateMeans klevel_estimate_means(const DensityMatrix& rho, std::uint64_t repetitions,
                                    std::uint64_t trials, const RngStream& rng, unsigned workers = 1);

}  // namespace stateest
