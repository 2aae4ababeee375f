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

#include "samplns/mutex.h"

#include <algorithm>
#include <mutex>
#include <stdexcept>
#include <string>

namespace samplns {

std::string_view MutexLevelName(MutexLevel level) {
  switch (level) {
    case MutexLevel::kLevel0:
      return "L0";
    case MutexLevel::kBlocking1:
      return "P1";
    case MutexLevel::kBlocking2:
      return "P2";
    case MutexLevel::kExact:
      return "EXACT";
  }
  return "?";
}

MutexLevel ParseMutexLevel(std::string_view name) {
  for (MutexLevel l : {MutexLevel::kLevel0, MutexLevel::kBlocking1,
                       MutexLevel::kBlocking2, MutexLevel::kExact}) {
    if (MutexLevelName(l) == name) return l;
  }
  throw std::invalid_argument("unknown mutex level: " + std::string(name));
}

bool MutexLevel0(const Interaction& i, const Interaction& j,
                 const InteractionUniverse& universe) {
  for (Literal p : i) {
    for (Literal q : j) {
      if (p == -q) return true;
      if (p.feature() != q.feature() && !universe.PairValid(p, q)) return true;
    }
  }
  return false;
}

bool MutexBlocking(const Interaction& i, const Interaction& j,
                   const InteractionUniverse& universe, int max_block) {
  if (MutexLevel0(i, j, universe)) return true;
  if (max_block <= 0) return false;

  std::vector<Literal> joint(i.begin(), i.end());
  joint.insert(joint.end(), j.begin(), j.end());
  // A literal set containing an invalid pair already; handled by level 0 for
  // cross pairs, and within I or J pairs are valid by precondition.
  auto assigned = [&](int f) {
    return std::any_of(joint.begin(), joint.end(),
                       [f](Literal l) { return l.feature() == f; });
  };
  auto hits = [&](Literal v) {
    return std::any_of(joint.begin(), joint.end(),
                       [&](Literal l) { return !universe.PairValid(v, l); });
  };

  struct Free {
    int feature;
    bool bad_pos, bad_neg;
  };
  std::vector<Free> free;
  for (int f : universe.concrete()) {
    if (assigned(f)) continue;
    Free fr{f, hits(Literal(f)), hits(Literal(-f))};
    if (fr.bad_pos && fr.bad_neg) return true;  // |F| = 1
    free.push_back(fr);
  }
  if (max_block < 2) return false;
  for (size_t a = 0; a < free.size(); ++a) {
    for (size_t b = a + 1; b < free.size(); ++b) {
      bool blocked = true;
      for (int code = 0; code < 4 && blocked; ++code) {
        bool pa = code & 1, pb = code & 2;
        if (pa ? free[a].bad_pos : free[a].bad_neg) continue;
        if (pb ? free[b].bad_pos : free[b].bad_neg) continue;
        Literal la(pa ? free[a].feature : -free[a].feature);
        Literal lb(pb ? free[b].feature : -free[b].feature);
        if (!universe.PairValid(la, lb)) continue;
        blocked = false;
      }
      if (blocked) return true;
    }
  }
  return false;
}

std::optional<bool> MutexExact(const Interaction& i, const Interaction& j,
                               ModelOracle& oracle,
                               const SolveBudget& budget) {
  std::vector<Literal> joint(i.begin(), i.end());
  for (Literal q : j) {
    if (std::find(joint.begin(), joint.end(), -q) != joint.end()) return true;
    if (std::find(joint.begin(), joint.end(), q) == joint.end()) {
      joint.push_back(q);
    }
  }
  switch (oracle.Check(joint, budget)) {
    case SatOutcome::kSatisfiable:
      return false;
    case SatOutcome::kUnsatisfiable:
      return true;
    case SatOutcome::kTimeout:
      break;
  }
  return std::nullopt;
}

bool MutexExact(const Interaction& i, const Interaction& j,
                const FeatureModel& model) {
  ModelOracle oracle(model);
  return *MutexExact(i, j, oracle);
}

uint64_t MutexMemo::Key(InteractionId a, InteractionId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<uint64_t>(static_cast<uint32_t>(a)) << 32) |
         static_cast<uint32_t>(b);
}

std::optional<bool> MutexMemo::Find(InteractionId a, InteractionId b) const {
  std::shared_lock lock(mu_);
  auto it = table_.find(Key(a, b));
  if (it == table_.end()) return std::nullopt;
  return it->second;
}

void MutexMemo::Insert(InteractionId a, InteractionId b, bool exclusive) {
  std::unique_lock lock(mu_);
  table_.emplace(Key(a, b), exclusive);
}

size_t MutexMemo::size() const {
  std::shared_lock lock(mu_);
  return table_.size();
}

MutexChecker::MutexChecker(const InteractionUniverse& universe,
                           MutexLevel level, uint64_t seed,
                           std::shared_ptr<MutexMemo> memo)
    : universe_(&universe), level_(level), memo_(std::move(memo)) {
  if (level_ != MutexLevel::kLevel0 && !memo_) {
    memo_ = std::make_shared<MutexMemo>();
  }
  if (level_ == MutexLevel::kExact) {
    oracle_ = std::make_unique<ModelOracle>(universe.model(), seed);
  }
}

bool MutexChecker::Exclusive(InteractionId a, InteractionId b) {
  if (a == b) return false;
  const Interaction& i = (*universe_)[a];
  const Interaction& j = (*universe_)[b];
  // Level 0 is a handful of table lookups; memoizing it costs more.
  if (MutexLevel0(i, j, *universe_)) return true;
  if (level_ == MutexLevel::kLevel0) return false;
  if (auto hit = memo_->Find(a, b)) return *hit;
  bool result = false;
  switch (level_) {
    case MutexLevel::kBlocking1:
      result = MutexBlocking(i, j, *universe_, 1);
      break;
    case MutexLevel::kBlocking2:
      result = MutexBlocking(i, j, *universe_, 2);
      break;
    case MutexLevel::kExact:
      result = MutexExact(i, j, *oracle_, SolveBudget::Conflicts(exact_budget_))
                   .value_or(false);
      break;
    case MutexLevel::kLevel0:
      break;
  }
  memo_->Insert(a, b, result);
  return result;
}

}  // namespace samplns
