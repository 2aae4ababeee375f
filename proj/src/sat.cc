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

#include "samplns/sat.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace samplns {

namespace {

constexpr double kVarDecay = 0.95;
constexpr double kClauseDecay = 0.999;
constexpr int kRestartBase = 100;

// Finite Luby sequence value for index i (0-based), scaled by base.
double Luby(double y, int x) {
  int size = 1, seq = 0;
  while (size < x + 1) {
    seq++;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    seq--;
    x = x % size;
  }
  return std::pow(y, seq);
}

uint64_t SplitMix(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

SatSolver::SatSolver(uint64_t seed) : rng_state_(seed) {}

int SatSolver::NewVar() {
  uint32_t v = static_cast<uint32_t>(assigns_.size());
  assigns_.push_back(kUndef);
  polarity_.push_back(false);
  levels_.push_back(0);
  reasons_.push_back(kNoReason);
  // Tiny seeded perturbation gives reproducible, seed-dependent tie-breaks.
  activity_.push_back((SplitMix(rng_state_) >> 11) * 0x1.0p-53 * 1e-5);
  seen_.push_back(0);
  watches_.emplace_back();
  watches_.emplace_back();
  heap_index_.push_back(-1);
  model_.push_back(false);
  HeapInsert(v);
  return static_cast<int>(v) + 1;
}

void SatSolver::EnsureVars(int n) {
  while (num_vars() < n) NewVar();
}

bool SatSolver::AddClause(std::span<const int32_t> dimacs) {
  if (!ok_) return false;
  CancelUntil(0);
  std::vector<Lit> lits;
  lits.reserve(dimacs.size());
  for (int32_t d : dimacs) {
    if (d == 0 || std::abs(d) > num_vars()) {
      throw std::out_of_range("SAT literal out of range: " + std::to_string(d));
    }
    lits.push_back(FromDimacs(d));
  }
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  size_t j = 0;
  for (size_t i = 0; i < lits.size(); ++i) {
    if (i + 1 < lits.size() && lits[i + 1] == Neg(lits[i])) return true;
    int8_t v = Value(lits[i]);
    if (v == kTrue) return true;
    if (v == kUndef) lits[j++] = lits[i];
  }
  lits.resize(j);
  if (lits.empty()) {
    ok_ = false;
    return false;
  }
  if (lits.size() == 1) {
    Enqueue(lits[0], kNoReason);
    if (Propagate() != kNoReason) ok_ = false;
    return ok_;
  }
  AttachClause(std::move(lits), false);
  return true;
}

uint32_t SatSolver::AttachClause(std::vector<Lit> lits, bool learnt) {
  uint32_t cref = static_cast<uint32_t>(clauses_.size());
  watches_[Neg(lits[0])].push_back({cref, lits[1]});
  watches_[Neg(lits[1])].push_back({cref, lits[0]});
  clauses_.push_back(ClauseRec{std::move(lits), 0.0, learnt, false});
  if (learnt) learnts_.push_back(cref);
  return cref;
}

void SatSolver::Enqueue(Lit l, uint32_t reason) {
  uint32_t v = VarOf(l);
  assigns_[v] = (l & 1u) ? kFalse : kTrue;
  levels_[v] = level();
  reasons_[v] = reason;
  trail_.push_back(l);
}

// Watch lists are indexed by the literal whose falsification triggers a visit:
// a clause watching literal w sits in watches_[Neg(w)].
uint32_t SatSolver::Propagate() {
  uint32_t confl = kNoReason;
  while (qhead_ < trail_.size()) {
    Lit p = trail_[qhead_++];
    std::vector<Watcher>& ws = watches_[p];
    stats_.propagations++;
    Lit false_lit = Neg(p);
    size_t i = 0, j = 0;
    const size_t end = ws.size();
    while (i < end) {
      Watcher w = ws[i];
      if (Value(w.blocker) == kTrue) {
        ws[j++] = ws[i++];
        continue;
      }
      ClauseRec& c = clauses_[w.cref];
      if (c.deleted) {
        ++i;
        continue;
      }
      std::vector<Lit>& lits = c.lits;
      if (lits[0] == false_lit) std::swap(lits[0], lits[1]);
      ++i;
      Lit first = lits[0];
      Watcher nw{w.cref, first};
      if (first != w.blocker && Value(first) == kTrue) {
        ws[j++] = nw;
        continue;
      }
      bool found = false;
      for (size_t k = 2; k < lits.size(); ++k) {
        if (Value(lits[k]) != kFalse) {
          std::swap(lits[1], lits[k]);
          watches_[Neg(lits[1])].push_back(nw);
          found = true;
          break;
        }
      }
      if (found) continue;
      ws[j++] = nw;
      if (Value(first) == kFalse) {
        confl = w.cref;
        qhead_ = trail_.size();
        while (i < end) ws[j++] = ws[i++];
      } else {
        Enqueue(first, w.cref);
      }
    }
    ws.resize(j);
    if (confl != kNoReason) break;
  }
  return confl;
}

void SatSolver::BumpVar(uint32_t v) {
  if ((activity_[v] += var_inc_) > 1e100) {
    for (double& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_index_[v] >= 0) HeapUp(heap_index_[v]);
}

void SatSolver::BumpClause(ClauseRec& c) {
  if ((c.activity += clause_inc_) > 1e20) {
    for (uint32_t cr : learnts_) clauses_[cr].activity *= 1e-20;
    clause_inc_ *= 1e-20;
  }
}

void SatSolver::Analyze(uint32_t confl, std::vector<Lit>& learnt,
                        int& bt_level) {
  learnt.clear();
  learnt.push_back(0);  // placeholder for the asserting literal
  int path = 0;
  Lit p = 0;
  bool have_p = false;
  size_t index = trail_.size();
  do {
    ClauseRec& c = clauses_[confl];
    if (c.learnt) BumpClause(c);
    for (size_t k = have_p ? 1 : 0; k < c.lits.size(); ++k) {
      Lit q = c.lits[k];
      uint32_t v = VarOf(q);
      if (!seen_[v] && levels_[v] > 0) {
        BumpVar(v);
        seen_[v] = 1;
        if (levels_[v] >= level()) {
          path++;
        } else {
          learnt.push_back(q);
        }
      }
    }
    while (!seen_[VarOf(trail_[--index])]) {
    }
    p = trail_[index];
    have_p = true;
    confl = reasons_[VarOf(p)];
    seen_[VarOf(p)] = 0;
    path--;
    // The reason clause of p has p at position 0.
    if (confl != kNoReason && clauses_[confl].lits[0] != p) {
      auto& ls = clauses_[confl].lits;
      auto it = std::find(ls.begin(), ls.end(), p);
      std::swap(*it, ls[0]);
    }
  } while (path > 0);
  learnt[0] = Neg(p);

  // Local minimization: drop literals implied by the rest of the clause.
  std::vector<Lit> kept{learnt[0]};
  for (size_t k = 1; k < learnt.size(); ++k) {
    if (!LitRedundant(learnt[k])) kept.push_back(learnt[k]);
  }
  for (Lit l : learnt) seen_[VarOf(l)] = 0;
  learnt = std::move(kept);

  if (learnt.size() == 1) {
    bt_level = 0;
  } else {
    size_t max_i = 1;
    for (size_t k = 2; k < learnt.size(); ++k) {
      if (levels_[VarOf(learnt[k])] > levels_[VarOf(learnt[max_i])]) max_i = k;
    }
    std::swap(learnt[1], learnt[max_i]);
    bt_level = levels_[VarOf(learnt[1])];
  }
}

bool SatSolver::LitRedundant(Lit l) {
  uint32_t r = reasons_[VarOf(l)];
  if (r == kNoReason) return false;
  const auto& lits = clauses_[r].lits;
  for (size_t k = 1; k < lits.size(); ++k) {
    uint32_t v = VarOf(lits[k]);
    if (!seen_[v] && levels_[v] > 0) return false;
  }
  return true;
}

void SatSolver::CancelUntil(int lvl) {
  if (level() <= lvl) return;
  for (size_t c = trail_.size(); c-- > static_cast<size_t>(trail_lim_[lvl]);) {
    uint32_t v = VarOf(trail_[c]);
    assigns_[v] = kUndef;
    polarity_[v] = !(trail_[c] & 1u);
    if (heap_index_[v] < 0) HeapInsert(v);
  }
  qhead_ = trail_lim_[lvl];
  trail_.resize(trail_lim_[lvl]);
  trail_lim_.resize(lvl);
}

std::optional<SatSolver::Lit> SatSolver::PickBranch() {
  while (!heap_.empty()) {
    uint32_t v = HeapPop();
    if (assigns_[v] == kUndef) return polarity_[v] ? 2 * v : 2 * v + 1;
  }
  return std::nullopt;
}

void SatSolver::ReduceLearnts() {
  std::vector<uint32_t> order = learnts_;
  std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
    return clauses_[a].activity < clauses_[b].activity;
  });
  std::vector<uint8_t> locked(clauses_.size(), 0);
  for (Lit l : trail_) {
    uint32_t r = reasons_[VarOf(l)];
    if (r != kNoReason) locked[r] = 1;
  }
  size_t target = order.size() / 2;
  size_t removed = 0;
  for (uint32_t cr : order) {
    if (removed >= target) break;
    ClauseRec& c = clauses_[cr];
    if (c.lits.size() > 2 && !locked[cr]) {
      c.deleted = true;
      c.lits.clear();
      c.lits.shrink_to_fit();
      ++removed;
    }
  }
  std::erase_if(learnts_, [&](uint32_t cr) { return clauses_[cr].deleted; });
  deleted_since_rebuild_ += static_cast<int64_t>(removed);
  if (deleted_since_rebuild_ > static_cast<int64_t>(clauses_.size()) / 4) {
    RebuildWatches();
  }
}

void SatSolver::RebuildWatches() {
  for (auto& ws : watches_) {
    std::erase_if(ws, [&](const Watcher& w) { return clauses_[w.cref].deleted; });
  }
  deleted_since_rebuild_ = 0;
}

SatOutcome SatSolver::Solve(std::span<const int32_t> dimacs_assumptions,
                            const SolveBudget& budget) {
  stats_.solves++;
  last_conflicts_ = 0;
  if (!ok_) return SatOutcome::kUnsatisfiable;
  CancelUntil(0);
  std::vector<Lit> assumptions;
  assumptions.reserve(dimacs_assumptions.size());
  for (int32_t d : dimacs_assumptions) {
    if (d == 0 || std::abs(d) > num_vars()) {
      throw std::out_of_range("assumption out of range: " + std::to_string(d));
    }
    assumptions.push_back(FromDimacs(d));
  }
  if (max_learnts_ == 0) {
    max_learnts_ = std::max<double>(clauses_.size() / 3.0, 2000.0);
  }

  std::vector<Lit> learnt;
  int restart_index = 0;
  int64_t conflicts = 0;
  auto out_of_budget = [&]() {
    if (budget.max_conflicts >= 0 && conflicts >= budget.max_conflicts) {
      return true;
    }
    if (budget.interrupt && budget.interrupt->load(std::memory_order_relaxed)) {
      return true;
    }
    if (budget.deadline && Clock::now() >= *budget.deadline) return true;
    return false;
  };

  SatOutcome result = SatOutcome::kTimeout;
  bool done = false;
  while (!done) {
    const int64_t restart_limit =
        static_cast<int64_t>(Luby(2, restart_index++) * kRestartBase);
    int64_t conflicts_this_restart = 0;
    int64_t decisions_since_check = 0;
    for (;;) {
      uint32_t confl = Propagate();
      if (confl != kNoReason) {
        ++conflicts;
        ++conflicts_this_restart;
        stats_.conflicts++;
        if (level() == 0) {
          ok_ = false;
          result = SatOutcome::kUnsatisfiable;
          done = true;
          break;
        }
        int bt_level;
        Analyze(confl, learnt, bt_level);
        CancelUntil(bt_level);
        if (learnt.size() == 1) {
          Enqueue(learnt[0], kNoReason);
        } else {
          uint32_t cr = AttachClause(learnt, true);
          BumpClause(clauses_[cr]);
          Enqueue(learnt[0], cr);
        }
        var_inc_ /= kVarDecay;
        clause_inc_ /= kClauseDecay;
        if ((conflicts & 63) == 0 && out_of_budget()) {
          done = true;
          break;
        }
        if (budget.max_conflicts >= 0 && conflicts >= budget.max_conflicts) {
          done = true;
          break;
        }
        continue;
      }
      if (conflicts_this_restart >= restart_limit) {
        stats_.restarts++;
        CancelUntil(0);
        break;
      }
      if (static_cast<double>(learnts_.size()) - trail_.size() >=
          max_learnts_) {
        ReduceLearnts();
        max_learnts_ *= 1.1;
      }
      if (++decisions_since_check >= 4096) {
        decisions_since_check = 0;
        if (out_of_budget()) {
          done = true;
          break;
        }
      }
      std::optional<Lit> next;
      while (level() < static_cast<int>(assumptions.size())) {
        Lit a = assumptions[level()];
        int8_t v = Value(a);
        if (v == kTrue) {
          trail_lim_.push_back(static_cast<int>(trail_.size()));
        } else if (v == kFalse) {
          result = SatOutcome::kUnsatisfiable;
          done = true;
          break;
        } else {
          next = a;
          break;
        }
      }
      if (done) break;
      if (!next) {
        stats_.decisions++;
        next = PickBranch();
        if (!next) {
          for (size_t v = 0; v < assigns_.size(); ++v) {
            model_[v] = assigns_[v] == kTrue;
          }
          result = SatOutcome::kSatisfiable;
          done = true;
          break;
        }
      }
      trail_lim_.push_back(static_cast<int>(trail_.size()));
      Enqueue(*next, kNoReason);
    }
  }
  last_conflicts_ = conflicts;
  CancelUntil(0);
  return result;
}

bool SatSolver::HeapLess(uint32_t a, uint32_t b) const {
  return activity_[a] > activity_[b];
}

void SatSolver::HeapInsert(uint32_t v) {
  heap_index_[v] = static_cast<int>(heap_.size());
  heap_.push_back(v);
  HeapUp(heap_index_[v]);
}

uint32_t SatSolver::HeapPop() {
  uint32_t top = heap_[0];
  heap_[0] = heap_.back();
  heap_index_[heap_[0]] = 0;
  heap_index_[top] = -1;
  heap_.pop_back();
  if (!heap_.empty()) HeapDown(0);
  return top;
}

void SatSolver::HeapUp(int i) {
  uint32_t v = heap_[i];
  while (i > 0) {
    int parent = (i - 1) >> 1;
    if (!HeapLess(v, heap_[parent])) break;
    heap_[i] = heap_[parent];
    heap_index_[heap_[i]] = i;
    i = parent;
  }
  heap_[i] = v;
  heap_index_[v] = i;
}

void SatSolver::HeapDown(int i) {
  uint32_t v = heap_[i];
  const int n = static_cast<int>(heap_.size());
  for (;;) {
    int child = 2 * i + 1;
    if (child >= n) break;
    if (child + 1 < n && HeapLess(heap_[child + 1], heap_[child])) ++child;
    if (!HeapLess(heap_[child], v)) break;
    heap_[i] = heap_[child];
    heap_index_[heap_[i]] = i;
    i = child;
  }
  heap_[i] = v;
  heap_index_[v] = i;
}

SatResult Solve(const SatInstance& instance,
                std::span<const int32_t> assumptions,
                const SolveBudget& budget, uint64_t seed) {
  SatSolver solver(seed);
  solver.EnsureVars(instance.n_vars);
  for (const auto& c : instance.clauses) {
    if (c.empty()) throw std::invalid_argument("empty clause in SAT instance");
    solver.AddClause(c);
  }
  SatResult r;
  r.outcome = solver.Solve(assumptions, budget);
  if (r.outcome == SatOutcome::kSatisfiable) r.model = solver.model();
  return r;
}

ModelOracle::ModelOracle(const FeatureModel& model, uint64_t seed)
    : model_(&model), solver_(seed) {
  solver_.EnsureVars(model.n_features());
  std::vector<int32_t> lits;
  for (const Clause& c : model.clauses()) {
    lits.clear();
    for (Literal l : c) lits.push_back(l.value());
    solver_.AddClause(lits);
  }
}

SatOutcome ModelOracle::Check(std::span<const Literal> assumptions,
                              const SolveBudget& budget) {
  scratch_.clear();
  for (Literal l : assumptions) scratch_.push_back(l.value());
  return solver_.Solve(scratch_, budget);
}

std::optional<Configuration> ModelOracle::Extend(
    std::span<const Literal> assumptions, const SolveBudget& budget) {
  switch (Check(assumptions, budget)) {
    case SatOutcome::kSatisfiable:
      return LastModel();
    case SatOutcome::kUnsatisfiable:
      return std::nullopt;
    case SatOutcome::kTimeout:
      break;
  }
  throw std::runtime_error("SAT budget exhausted while extending assignment");
}

Configuration ModelOracle::LastModel() const {
  std::vector<bool> values(solver_.model().begin(),
                           solver_.model().begin() + model_->n_features());
  return Configuration(std::move(values));
}

std::optional<Configuration> Extend(const FeatureModel& model,
                                    const PartialAssignment& partial) {
  ModelOracle oracle(model);
  return oracle.Extend(partial.literals());
}

bool IsSatisfiable(const FeatureModel& model) {
  ModelOracle oracle(model);
  return oracle.Check({}) == SatOutcome::kSatisfiable;
}

}  // namespace samplns
