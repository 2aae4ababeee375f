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

#include "samplns/lower_bound.h"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <unordered_map>

namespace samplns {

MutexSet MutexSet::FromIds(std::span<const InteractionId> ids,
                           const InteractionUniverse& universe,
                           MutexLevel level) {
  MutexSet s;
  s.level = level;
  for (InteractionId id : ids) s.interactions.push_back(universe[id]);
  std::sort(s.interactions.begin(), s.interactions.end());
  return s;
}

std::vector<InteractionId> MutexSet::Ids(
    const InteractionUniverse& universe) const {
  std::vector<InteractionId> ids;
  for (const Interaction& i : interactions) {
    InteractionId id = universe.IdOf(i);
    if (id < 0) {
      throw ModelError("interaction " + i.ToString() +
                       " is not valid in this universe");
    }
    ids.push_back(id);
  }
  return ids;
}

OptLbResult OptLb(std::span<const InteractionId> candidates, MutexChecker& q,
                  const WorkBudget& budget,
                  std::span<const InteractionId> warm) {
  OptLbResult out;
  if (candidates.empty()) {
    out.optimal = true;
    return out;
  }
  const int n = static_cast<int>(candidates.size());
  BitGraph g(n);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (q.Exclusive(candidates[a], candidates[b])) g.AddEdge(a, b);
    }
  }
  std::vector<int> seed;
  if (!warm.empty()) {
    std::unordered_map<InteractionId, int> pos;
    for (int i = 0; i < n; ++i) pos.emplace(candidates[i], i);
    for (InteractionId id : warm) {
      auto it = pos.find(id);
      if (it != pos.end()) seed.push_back(it->second);
    }
  }
  CliqueResult r = MaxClique(g, seed, budget);
  for (int v : r.vertices) out.ids.push_back(candidates[v]);
  std::sort(out.ids.begin(), out.ids.end());
  out.optimal = r.optimal;
  out.nodes = r.nodes;
  return out;
}

OptLbResult FeatureFixedSet(Literal l, MutexChecker& q,
                            const WorkBudget& budget) {
  const InteractionUniverse& u = q.universe();
  std::vector<InteractionId> candidates;
  for (InteractionId id = 0; id < u.size(); ++id) {
    if (u[id].Contains(l)) candidates.push_back(id);
  }
  return OptLb(candidates, q, budget);
}

namespace {

bool Expired(const WorkBudget& b) {
  if (b.interrupt && b.interrupt->load(std::memory_order_relaxed)) return true;
  return b.deadline && Clock::now() >= *b.deadline;
}

}  // namespace

std::vector<InteractionId> LbSearch(MutexChecker& q,
                                    const LbSearchOptions& options,
                                    const WorkBudget& budget, uint64_t seed) {
  const InteractionUniverse& u = q.universe();
  std::mt19937_64 rng(seed);
  std::vector<Literal> literals;
  for (int f : u.concrete()) {
    literals.emplace_back(f);
    literals.emplace_back(-f);
  }
  std::shuffle(literals.begin(), literals.end(), rng);

  WorkBudget fixed_budget = budget;
  fixed_budget.max_nodes = options.feature_fixed_nodes;
  std::unordered_map<int32_t, std::vector<InteractionId>> fixed_cache;
  auto fixed_set = [&](Literal l) -> const std::vector<InteractionId>& {
    auto it = fixed_cache.find(l.value());
    if (it == fixed_cache.end()) {
      it = fixed_cache.emplace(l.value(), FeatureFixedSet(l, q, fixed_budget).ids)
               .first;
    }
    return it->second;
  };

  std::vector<InteractionId> current;
  std::vector<bool> member(u.size(), false);
  std::vector<int> conflicts(u.size(), 0);
  std::vector<InteractionId> best;
  int operations = 0;
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  auto perturb = [&]() {
    if (coin(rng) < options.restart_probability) {
      for (InteractionId id : current) member[id] = false;
      current.clear();
    } else {
      std::vector<int> counts;
      for (InteractionId id : current) {
        if (conflicts[id] > 0) counts.push_back(conflicts[id]);
      }
      if (!counts.empty()) {
        std::sort(counts.begin(), counts.end());
        int threshold = counts[static_cast<size_t>(
            options.evict_quantile * (counts.size() - 1))];
        std::erase_if(current, [&](InteractionId id) {
          if (conflicts[id] > 0 && conflicts[id] >= threshold) {
            member[id] = false;
            return true;
          }
          return false;
        });
      }
    }
    for (InteractionId id = 0; id < u.size(); ++id) conflicts[id] = 0;
  };

  auto try_add = [&](const std::vector<InteractionId>& set) {
    for (InteractionId cand : set) {
      if (member[cand]) continue;
      bool ok = true;
      for (InteractionId j : current) {
        if (!q.Exclusive(cand, j)) {
          ++conflicts[j];
          ok = false;
        }
      }
      if (ok) {
        current.push_back(cand);
        member[cand] = true;
      }
    }
    if (current.size() > best.size()) best = current;
    if (++operations % options.merge_attempts == 0) perturb();
  };

  for (Literal p : literals) {
    if (Expired(budget)) break;
    const std::vector<InteractionId>& ep = fixed_set(p);
    if (ep.empty()) continue;
    try_add(ep);
    for (Literal r : literals) {
      if (Expired(budget)) break;
      if (r == p) continue;
      if (u.PairValid(p, r)) continue;
      const std::vector<InteractionId>& er = fixed_set(r);
      if (!er.empty()) try_add(er);
    }
  }
  std::sort(best.begin(), best.end());
  return best;
}

LbLns::LbLns(MutexChecker& q, std::vector<InteractionId> pool, LbTuning tuning,
             uint64_t seed)
    : q_(&q), pool_(std::move(pool)), tuning_(tuning), rng_(seed) {
  if (pool_.empty()) {
    pool_.resize(q.universe().size());
    std::iota(pool_.begin(), pool_.end(), 0);
  }
}

void LbLns::SetSolution(std::vector<InteractionId> ids) {
  std::sort(ids.begin(), ids.end());
  solution_ = std::move(ids);
}

std::vector<InteractionId> LbLns::Filter(const std::vector<InteractionId>& from,
                                         InteractionId against) {
  std::vector<InteractionId> out;
  out.reserve(from.size());
  for (InteractionId c : from) {
    if (c != against && q_->Exclusive(c, against)) out.push_back(c);
  }
  return out;
}

LbIteration LbLns::Step(bool deterministic) {
  // Start from E' = E (everything removed, I' = pool) and move random members
  // back into the kept part until I' is small enough.
  std::vector<InteractionId> order = solution_;
  std::shuffle(order.begin(), order.end(), rng_);
  std::vector<InteractionId> neighborhood = pool_;
  std::vector<InteractionId> kept;
  const size_t threshold =
      static_cast<size_t>(std::max(1.0, tuning_.gamma));
  std::vector<InteractionId> removed;
  size_t i = 0;
  for (; i < order.size() && neighborhood.size() > threshold; ++i) {
    std::vector<InteractionId> next = Filter(neighborhood, order[i]);
    if (next.empty()) {
      removed.push_back(order[i]);
      continue;
    }
    kept.push_back(order[i]);
    neighborhood = std::move(next);
  }
  for (; i < order.size(); ++i) removed.push_back(order[i]);
  return Solve(std::move(kept), std::move(removed), std::move(neighborhood),
               deterministic);
}

LbIteration LbLns::StepWithRemoval(std::span<const InteractionId> removed,
                                   bool deterministic) {
  std::vector<InteractionId> rem(removed.begin(), removed.end());
  std::sort(rem.begin(), rem.end());
  std::vector<InteractionId> kept;
  for (InteractionId id : solution_) {
    if (!std::binary_search(rem.begin(), rem.end(), id)) kept.push_back(id);
  }
  if (kept.size() + rem.size() != solution_.size()) {
    throw std::invalid_argument("removed interactions must be members");
  }
  std::vector<InteractionId> neighborhood = pool_;
  for (InteractionId k : kept) neighborhood = Filter(neighborhood, k);
  return Solve(std::move(kept), std::move(rem), std::move(neighborhood),
               deterministic);
}

LbIteration LbLns::Solve(std::vector<InteractionId> kept,
                         std::vector<InteractionId> removed,
                         std::vector<InteractionId> neighborhood,
                         bool deterministic) {
  LbIteration it;
  it.size_before = static_cast<int>(solution_.size());
  it.removed = static_cast<int>(removed.size());
  it.neighborhood = static_cast<int>(neighborhood.size());

  WorkBudget budget;
  budget.interrupt = interrupt_;
  budget.max_nodes = tuning_.iteration_nodes > 0 ? tuning_.iteration_nodes : -1;
  const auto start = Clock::now();
  std::optional<Clock::time_point> local_deadline;
  if (!deterministic && tuning_.iteration_time_s > 0) {
    local_deadline = start + std::chrono::duration_cast<Clock::duration>(
                                 std::chrono::duration<double>(
                                     tuning_.iteration_time_s));
  }
  budget.deadline = local_deadline;
  if (deadline_ && (!budget.deadline || *deadline_ < *budget.deadline)) {
    budget.deadline = deadline_;
  }

  OptLbResult sub = OptLb(neighborhood, *q_, budget, removed);
  it.subproblem_optimal = sub.optimal;
  if (sub.ids.size() >= removed.size()) {
    std::vector<InteractionId> next = kept;
    next.insert(next.end(), sub.ids.begin(), sub.ids.end());
    std::sort(next.begin(), next.end());
    solution_ = std::move(next);
  }
  it.size_after = static_cast<int>(solution_.size());
  if (kept.empty() && sub.optimal) proven_optimal_ = true;

  double fraction = 0;
  if (budget.max_nodes > 0) {
    fraction = std::max(fraction, static_cast<double>(sub.nodes) /
                                      static_cast<double>(budget.max_nodes));
  }
  if (!deterministic && tuning_.iteration_time_s > 0) {
    double elapsed =
        std::chrono::duration<double>(Clock::now() - start).count();
    fraction = std::max(fraction, elapsed / tuning_.iteration_time_s);
  }
  if (!sub.optimal) fraction = std::max(fraction, 1.0);
  it.fraction_used = fraction;
  if (fraction < tuning_.fast_fraction) {
    tuning_.gamma *= tuning_.grow_factor;
  } else if (fraction > tuning_.slow_fraction) {
    tuning_.gamma = std::max(1.0, tuning_.gamma * tuning_.shrink_factor);
  }
  return it;
}

MutexSet RunLbLns(const MutexSet& initial, const InteractionUniverse& universe,
                  MutexChecker& q, const LbTuning& tuning,
                  Clock::time_point deadline, uint64_t seed,
                  int max_iterations) {
  LbLns lns(q, {}, tuning, seed);
  lns.SetSolution(initial.Ids(universe));
  lns.set_deadline(deadline);
  for (int i = 0; max_iterations < 0 || i < max_iterations; ++i) {
    if (Clock::now() >= deadline || lns.proven_optimal()) break;
    lns.Step();
  }
  return MutexSet::FromIds(lns.solution(), universe, q.level());
}

CertificateCheck VerifyMutexCertificate(const MutexSet& set,
                                        const FeatureModel& model) {
  CertificateCheck out;
  ModelOracle oracle(model);
  const int t = set.interactions.empty() ? 0 : set.interactions[0].size();
  for (size_t a = 0; a < set.interactions.size(); ++a) {
    const Interaction& i = set.interactions[a];
    bool well_formed = i.size() == t;
    for (Literal l : i) well_formed &= model.is_concrete(l.feature());
    if (!well_formed) {
      out.invalid_member = i;
      out.message = "member " + i.ToString() +
                    " is not a t-wise interaction on concrete features";
      return out;
    }
    std::vector<Literal> lits(i.begin(), i.end());
    if (oracle.Check(lits) != SatOutcome::kSatisfiable) {
      out.invalid_member = i;
      out.message = "member " + i.ToString() + " is not a valid interaction";
      return out;
    }
    for (size_t b = 0; b < a; ++b) {
      if (set.interactions[b] == i) {
        out.compatible_pair = {set.interactions[b], i};
        out.message = "duplicate member " + i.ToString();
        return out;
      }
    }
  }
  for (size_t a = 0; a < set.interactions.size(); ++a) {
    for (size_t b = a + 1; b < set.interactions.size(); ++b) {
      const Interaction& i = set.interactions[a];
      const Interaction& j = set.interactions[b];
      if (!*MutexExact(i, j, oracle)) {
        out.compatible_pair = {i, j};
        out.message = "interactions {" + i.ToString() + "} and {" +
                      j.ToString() + "} can share a configuration";
        return out;
      }
    }
  }
  out.ok = true;
  out.message = "ok";
  return out;
}

}  // namespace samplns
