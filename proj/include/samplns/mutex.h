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

// Predicates deciding whether two valid interactions can never appear in the
// same valid configuration. Every predicate is sound: a `true` answer is a
// proof of mutual exclusiveness. Weaker levels may answer `false` for pairs
// that are in fact exclusive.

#ifndef SAMPLNS_MUTEX_H_
#define SAMPLNS_MUTEX_H_

#include <memory>
#include <shared_mutex>
#include <string_view>
#include <unordered_map>

#include "samplns/interactions.h"
#include "samplns/sat.h"

namespace samplns {

enum class MutexLevel {
  kLevel0,     // complementary literals or an invalid cross pair
  kBlocking1,  // blocking feature sets of size <= 1
  kBlocking2,  // blocking feature sets of size <= 2
  kExact,      // joint unsatisfiability
};

std::string_view MutexLevelName(MutexLevel level);
MutexLevel ParseMutexLevel(std::string_view name);

// True iff I and J hold complementary literals, or some p in I and q in J on
// distinct features form an invalid pair.
bool MutexLevel0(const Interaction& i, const Interaction& j,
                 const InteractionUniverse& universe);

// True iff MutexLevel0 holds, or some set F of at most `max_block` concrete
// features not assigned by I and J has every assignment create an invalid
// pair within F's literals and I and J.
bool MutexBlocking(const Interaction& i, const Interaction& j,
                   const InteractionUniverse& universe, int max_block);

// True iff no valid configuration contains both I and J. Timeouts are
// reported as std::nullopt.
std::optional<bool> MutexExact(const Interaction& i, const Interaction& j,
                               ModelOracle& oracle,
                               const SolveBudget& budget = {});
bool MutexExact(const Interaction& i, const Interaction& j,
                const FeatureModel& model);

// Memo of pair answers keyed by unordered id pair. Safe for concurrent use.
class MutexMemo {
 public:
  std::optional<bool> Find(InteractionId a, InteractionId b) const;
  void Insert(InteractionId a, InteractionId b, bool exclusive);
  size_t size() const;

 private:
  static uint64_t Key(InteractionId a, InteractionId b);
  mutable std::shared_mutex mu_;
  std::unordered_map<uint64_t, bool> table_;
};

// The working predicate Q over universe ids at a fixed level. One checker per
// thread; the memo may be shared.
class MutexChecker {
 public:
  MutexChecker(const InteractionUniverse& universe, MutexLevel level,
               uint64_t seed = 0, std::shared_ptr<MutexMemo> memo = nullptr);

  bool Exclusive(InteractionId a, InteractionId b);
  MutexLevel level() const { return level_; }
  const InteractionUniverse& universe() const { return *universe_; }

  // Conflict budget per exact query; a timeout counts as "not exclusive".
  void set_exact_budget(int64_t conflicts) { exact_budget_ = conflicts; }

 private:
  const InteractionUniverse* universe_;
  MutexLevel level_;
  std::shared_ptr<MutexMemo> memo_;
  std::unique_ptr<ModelOracle> oracle_;
  int64_t exact_budget_ = kDefaultConflictBudget;
};

}  // namespace samplns

#endif  // SAMPLNS_MUTEX_H_
