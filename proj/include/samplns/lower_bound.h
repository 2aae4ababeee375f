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

// Lower bounds on the size of any full-coverage sample.
//
// A set of valid interactions that are pairwise mutually exclusive needs one
// configuration per member, so its size bounds every sample from below. The
// largest such set is a maximum clique of the "exclusivity" graph (edges
// between exclusive pairs), equivalently a maximum independent set of the
// compatibility graph.

#ifndef SAMPLNS_LOWER_BOUND_H_
#define SAMPLNS_LOWER_BOUND_H_

#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "samplns/interactions.h"
#include "samplns/max_clique.h"
#include "samplns/mutex.h"

namespace samplns {

struct MutexSet {
  std::vector<Interaction> interactions;  // sorted
  MutexLevel level = MutexLevel::kLevel0;

  int size() const { return static_cast<int>(interactions.size()); }
  static MutexSet FromIds(std::span<const InteractionId> ids,
                          const InteractionUniverse& universe,
                          MutexLevel level);
  std::vector<InteractionId> Ids(const InteractionUniverse& universe) const;
};

// Neighborhood size control for LB-LNS. The threshold grows when an iteration
// finishes quickly and shrinks when it nearly exhausts its limit.
struct LbTuning {
  double gamma = 1000;
  double grow_factor = 1.10;
  double shrink_factor = 0.90;
  double fast_fraction = 0.50;
  double slow_fraction = 0.95;
  // Per-iteration limits for the exact subproblem. A non-positive value
  // disables that limit.
  double iteration_time_s = 6.0;
  int64_t iteration_nodes = -1;
};

struct OptLbResult {
  std::vector<InteractionId> ids;  // sorted
  bool optimal = false;
  int64_t nodes = 0;
};

// Maximum subset of `candidates` that is pairwise exclusive under `q`. `warm`
// (a subset of candidates that is already exclusive) seeds the incumbent, so
// the result is never smaller than it.
OptLbResult OptLb(std::span<const InteractionId> candidates, MutexChecker& q,
                  const WorkBudget& budget = {},
                  std::span<const InteractionId> warm = {});

// Maximized exclusive set whose members all contain `l`.
OptLbResult FeatureFixedSet(Literal l, MutexChecker& q,
                            const WorkBudget& budget = {});

struct LbSearchOptions {
  int merge_attempts = 16;
  double restart_probability = 0.25;
  double evict_quantile = 0.75;    // evict members at or above this quantile
  int64_t feature_fixed_nodes = 20000;
};

// Constructive heuristic combining feature-fixed sets along invalid pairs.
// Returns the largest exclusive set seen.
std::vector<InteractionId> LbSearch(MutexChecker& q,
                                    const LbSearchOptions& options,
                                    const WorkBudget& budget, uint64_t seed);

struct LbIteration {
  int size_before = 0;
  int size_after = 0;
  int removed = 0;       // |E'|
  int neighborhood = 0;  // |I'|
  bool subproblem_optimal = false;
  double fraction_used = 0;
};

// Large neighborhood search over exclusive sets. Each step removes part of the
// current set, collects every pool interaction exclusive to what remains, and
// refills optimally.
class LbLns {
 public:
  // `pool` lists the candidate ids; empty means the whole universe.
  LbLns(MutexChecker& q, std::vector<InteractionId> pool, LbTuning tuning,
        uint64_t seed);

  // Replaces the current set; must be exclusive under q.
  void SetSolution(std::vector<InteractionId> ids);
  const std::vector<InteractionId>& solution() const { return solution_; }

  // One iteration with randomized removal. In deterministic mode only node
  // counts drive the threshold adaptation.
  LbIteration Step(bool deterministic = false);
  // One iteration that removes exactly `removed` (must be members).
  LbIteration StepWithRemoval(std::span<const InteractionId> removed,
                              bool deterministic = false);

  double gamma() const { return tuning_.gamma; }
  // True once a step solved the whole pool to optimality.
  bool proven_optimal() const { return proven_optimal_; }

  // Budget applied to each subproblem; the caller may tighten it.
  void set_deadline(std::optional<Clock::time_point> d) { deadline_ = d; }
  void set_interrupt(const std::atomic<bool>* flag) { interrupt_ = flag; }

 private:
  LbIteration Solve(std::vector<InteractionId> kept,
                    std::vector<InteractionId> removed,
                    std::vector<InteractionId> neighborhood,
                    bool deterministic);
  std::vector<InteractionId> Filter(const std::vector<InteractionId>& from,
                                    InteractionId against);

  MutexChecker* q_;
  std::vector<InteractionId> pool_;
  LbTuning tuning_;
  std::mt19937_64 rng_;
  std::vector<InteractionId> solution_;
  bool proven_optimal_ = false;
  std::optional<Clock::time_point> deadline_;
  const std::atomic<bool>* interrupt_ = nullptr;
};

// Runs LB-LNS from `initial` until the deadline (or `max_iterations`, when
// non-negative) and returns the best set.
MutexSet RunLbLns(const MutexSet& initial, const InteractionUniverse& universe,
                  MutexChecker& q, const LbTuning& tuning,
                  Clock::time_point deadline, uint64_t seed,
                  int max_iterations = -1);

struct CertificateCheck {
  bool ok = false;
  std::string message;
  std::optional<Interaction> invalid_member;
  std::optional<std::pair<Interaction, Interaction>> compatible_pair;
};

// Independent check of a lower-bound certificate: every member is a valid
// interaction on concrete features and every pair is jointly unsatisfiable.
// Uses only the model and a fresh SAT oracle with unlimited budget.
CertificateCheck VerifyMutexCertificate(const MutexSet& set,
                                        const FeatureModel& model);

}  // namespace samplns

#endif  // SAMPLNS_LOWER_BOUND_H_
