// Copyright 2026 The SampLNS Authors
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

#ifndef SAMPLNS_UPPER_BOUND_H_
#define SAMPLNS_UPPER_BOUND_H_

#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "samplns/interactions.h"
#include "samplns/lower_bound.h"
#include "samplns/sat.h"

namespace samplns {

// Removal threshold control for SampLNS: phi bounds the number of
// interactions left uncovered when configurations are removed.
struct UbTuning {
  double phi = 250;
  double grow_factor = 1.25;
  double shrink_factor = 0.75;
};

// Greedy full-coverage sample: each configuration packs as many uncovered
// interactions as the model allows, then is completed by the SAT oracle.
Sample InitialSample(const InteractionUniverse& universe, uint64_t seed = 0);

struct OptSampleResult {
  std::optional<Sample> sample;
  bool optimal = false;     // sample has minimum size for `required`
  bool infeasible = false;  // proven: no cover with at most k configurations
  int64_t conflicts = 0;
};

// Minimum set of valid configurations covering `required`, using k copies of
// the model. Copy j is pinned to cover symmetry[j]; `symmetry` must be a
// subset of `required` and should be pairwise exclusive. `warm` (at most k
// configurations covering `required`) is the fallback and the phase hint.
// Throws std::invalid_argument on malformed pins or warm starts.
OptSampleResult OptSample(const FeatureModel& model,
                          std::span<const Interaction> required, int k,
                          const Sample* warm = nullptr,
                          std::span<const Interaction> symmetry = {},
                          const SolveBudget& budget = {}, uint64_t seed = 0);

// Indices of configurations to remove: random draws are added while the
// number of interactions left uncovered stays at most phi. Never empty for a
// non-empty sample.
std::vector<int> SelectRemoval(const Sample& sample,
                               const InteractionUniverse& universe, double phi,
                               std::mt19937_64& rng);

struct SampleCheck {
  bool ok = false;
  std::string message;
  std::optional<int> invalid_configuration;  // index into the sample
  std::optional<Interaction> missing;
};

// Every configuration valid and every valid interaction covered.
SampleCheck VerifySample(const Sample& sample, const FeatureModel& model,
                         const InteractionUniverse& universe);

enum class RunMode { kDeterministic, kParallel };
enum class BoundStatus { kOptimal, kFeasible };

struct UbIterationRecord {
  int iteration = 0;
  int ub = 0;
  int lb = 0;
  int removed = 0;
  int missing = 0;
  bool skipped = false;   // symmetry set proved no improvement possible
  bool optimal = false;   // subproblem solved to optimality
  double phi = 0;
};

struct SamplnsOptions {
  double total_time_s = 900;
  double iteration_time_s = 60;
  RunMode mode = RunMode::kDeterministic;
  uint64_t seed = 0;
  // Upper-bound iterations; negative means unlimited.
  int max_iterations = -1;
  // Deterministic work limits per iteration (conflicts for the sample
  // subsolver, branch-and-bound nodes for lower-bound subproblems). Applied in
  // both modes when positive.
  int64_t iteration_conflicts = 20000;
  int64_t lb_iteration_nodes = 50000;
  UbTuning ub;
  LbTuning lb;
  LbSearchOptions lb_search;
  MutexLevel q = MutexLevel::kLevel0;
  // Re-verify coverage after every iteration (throws std::logic_error on a
  // violation).
  bool verify_every_iteration = false;
  std::optional<Clock::time_point> start;
  std::optional<Sample> initial;
  std::function<void(const UbIterationRecord&)> on_iteration;
};

struct SamplnsResult {
  Sample sample;
  MutexSet lower_bound;
  BoundStatus status = BoundStatus::kFeasible;
  int initial_size = 0;
  bool ub_proven_optimal = false;
  bool lb_proven_optimal = false;
  int iterations = 0;
  double t_last_ub_s = 0;
  double t_last_lb_s = 0;
  std::vector<UbIterationRecord> history;
  std::vector<int> lb_history;  // published bound after each update
};

SamplnsResult Samplns(const InteractionUniverse& universe,
                      const SamplnsOptions& options = {});

}  // namespace samplns

#endif  // SAMPLNS_UPPER_BOUND_H_
