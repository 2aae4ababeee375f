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

// Incremental CDCL satisfiability solver.
//
// Variables are 1-based and literals use DIMACS signed integers at the API
// boundary. Internally a literal is 2*var + sign. Learned clauses persist
// across Solve() calls on the same solver, so a sequence of queries that only
// differ in their assumptions share all derived knowledge.

#ifndef SAMPLNS_SAT_H_
#define SAMPLNS_SAT_H_

#include <atomic>
#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "samplns/model.h"

namespace samplns {

using Clock = std::chrono::steady_clock;

// Limits for a single query. Unlimited by default.
struct SolveBudget {
  int64_t max_conflicts = -1;
  std::optional<Clock::time_point> deadline;
  const std::atomic<bool>* interrupt = nullptr;

  static SolveBudget Unlimited() { return {}; }
  static SolveBudget Conflicts(int64_t n) { return {n, std::nullopt, nullptr}; }
};

inline constexpr int64_t kDefaultConflictBudget = 100000;

enum class SatOutcome { kSatisfiable, kUnsatisfiable, kTimeout };

struct SatStats {
  int64_t solves = 0;
  int64_t conflicts = 0;
  int64_t decisions = 0;
  int64_t propagations = 0;
  int64_t restarts = 0;
};

class SatSolver {
 public:
  explicit SatSolver(uint64_t seed = 0);

  int NewVar();
  void EnsureVars(int n);
  int num_vars() const { return static_cast<int>(assigns_.size()); }

  // Adds a clause of DIMACS literals over existing variables. Returns false if
  // the solver is now known to be unsatisfiable without assumptions.
  bool AddClause(std::span<const int32_t> lits);
  bool AddClause(std::initializer_list<int32_t> lits) {
    return AddClause(std::span<const int32_t>(lits.begin(), lits.size()));
  }

  SatOutcome Solve(std::span<const int32_t> assumptions = {},
                   const SolveBudget& budget = {});

  // Valid after kSatisfiable until the next Solve/AddClause.
  bool ModelValue(int var) const { return model_[var - 1]; }
  const std::vector<bool>& model() const { return model_; }

  // Preferred polarity for the next decision on `var` (warm starts).
  void SetPhase(int var, bool value) { polarity_[var - 1] = value; }

  bool okay() const { return ok_; }
  const SatStats& stats() const { return stats_; }
  int64_t conflicts_in_last_solve() const { return last_conflicts_; }

 private:
  using Lit = uint32_t;
  static constexpr uint32_t kNoReason = UINT32_MAX;
  static constexpr int8_t kUndef = 0, kTrue = 1, kFalse = -1;

  struct ClauseRec {
    std::vector<Lit> lits;
    double activity = 0;
    bool learnt = false;
    bool deleted = false;
  };
  struct Watcher {
    uint32_t cref;
    Lit blocker;
  };

  static Lit FromDimacs(int32_t l) {
    return l > 0 ? 2u * (l - 1) : 2u * (-l - 1) + 1;
  }
  static uint32_t VarOf(Lit l) { return l >> 1; }
  static Lit Neg(Lit l) { return l ^ 1u; }
  int8_t Value(Lit l) const {
    int8_t v = assigns_[l >> 1];
    return (l & 1u) ? static_cast<int8_t>(-v) : v;
  }
  int level() const { return static_cast<int>(trail_lim_.size()); }

  void Enqueue(Lit l, uint32_t reason);
  uint32_t Propagate();  // returns conflicting clause or kNoReason
  void Analyze(uint32_t confl, std::vector<Lit>& learnt, int& bt_level);
  bool LitRedundant(Lit l);
  void CancelUntil(int lvl);
  std::optional<Lit> PickBranch();
  uint32_t AttachClause(std::vector<Lit> lits, bool learnt);
  void ReduceLearnts();
  void RebuildWatches();
  void BumpVar(uint32_t v);
  void BumpClause(ClauseRec& c);

  // Binary max-heap keyed by activity.
  void HeapInsert(uint32_t v);
  uint32_t HeapPop();
  void HeapUp(int i);
  void HeapDown(int i);
  bool HeapLess(uint32_t a, uint32_t b) const;

  bool ok_ = true;
  std::vector<ClauseRec> clauses_;
  std::vector<uint32_t> learnts_;
  std::vector<std::vector<Watcher>> watches_;
  std::vector<int8_t> assigns_;
  std::vector<bool> polarity_;
  std::vector<int> levels_;
  std::vector<uint32_t> reasons_;
  std::vector<double> activity_;
  std::vector<Lit> trail_;
  std::vector<int> trail_lim_;
  size_t qhead_ = 0;
  std::vector<uint8_t> seen_;
  std::vector<uint32_t> heap_;
  std::vector<int> heap_index_;
  std::vector<bool> model_;
  double var_inc_ = 1.0;
  double clause_inc_ = 1.0;
  double max_learnts_ = 0;
  uint64_t rng_state_;
  SatStats stats_;
  int64_t last_conflicts_ = 0;
  int64_t deleted_since_rebuild_ = 0;
};

// A self-contained instance for one-shot queries.
struct SatInstance {
  int n_vars = 0;
  std::vector<std::vector<int32_t>> clauses;
};

struct SatResult {
  SatOutcome outcome = SatOutcome::kTimeout;
  std::vector<bool> model;  // filled iff satisfiable; model[v-1] for var v
};

SatResult Solve(const SatInstance& instance,
                std::span<const int32_t> assumptions = {},
                const SolveBudget& budget = {}, uint64_t seed = 0);

// A solver pre-loaded with a feature model's clauses; variable f is feature f.
// Each handle is single-threaded; create one per worker.
class ModelOracle {
 public:
  explicit ModelOracle(const FeatureModel& model, uint64_t seed = 0);

  // Satisfiability of the model under the given literals.
  SatOutcome Check(std::span<const Literal> assumptions,
                   const SolveBudget& budget = {});
  // A valid configuration extending `assumptions`, or nullopt if none exists.
  // Throws std::runtime_error if the budget runs out.
  std::optional<Configuration> Extend(std::span<const Literal> assumptions,
                                      const SolveBudget& budget = {});
  Configuration LastModel() const;

  SatSolver& solver() { return solver_; }
  const FeatureModel& model() const { return *model_; }

 private:
  const FeatureModel* model_;
  SatSolver solver_;
  std::vector<int32_t> scratch_;
};

// One-shot completion of a partial assignment to a valid configuration.
std::optional<Configuration> Extend(const FeatureModel& model,
                                    const PartialAssignment& partial);

// Exact satisfiability check of a model (unlimited budget).
bool IsSatisfiable(const FeatureModel& model);

}  // namespace samplns

#endif  // SAMPLNS_SAT_H_
