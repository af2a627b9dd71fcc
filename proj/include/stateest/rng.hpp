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
#include <random>

namespace stateest {

/// Seeded pseudo-random stream identified by (master seed, stream id).
///
/// Equal identifiers produce identical sequences; distinct identifiers are
/// seeded through std::seed_seq so their sequences are decorrelated. The
/// engine and all transforms below are fully specified by the standard, so
/// streams are reproducible across platforms and standard libraries.
/// Copying a stream copies its position.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  /// Child stream for sub-task `index` (trial, schedule point, worker, ...).
  /// Depends only on this stream's identifiers, not on its position.
  RngStream derive(std::uint64_t index) const;

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  /// Standard normal variate (Box-Muller, no cached second value).
  double normal();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

}  // namespace stateest
