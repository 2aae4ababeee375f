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

#include "samplns/upper_bound.h"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace samplns {

namespace {

constexpr int kSeederSatCallsPerConfiguration = 2000;
constexpr int64_t kSeederConflictBudget = 2000;

std::optional<Clock::time_point> EarlierOf(
    std::optional<Clock::time_point> a, std::optional<Clock::time_point> b) {
  if (!a) return b;
  if (!b) return a;
  return std::min(*a, *b);
}

Clock::time_point After(Clock::time_point t, double seconds) {
  return t + std::chrono::duration_cast<Clock::duration>(
                 std::chrono::duration<double>(seconds));
}

}  // namespace

Sample InitialSample(const InteractionUniverse& universe, uint64_t seed) {
  const FeatureModel& model = universe.model();
  ModelOracle oracle(model, seed);
  std::vector<InteractionId> order(universe.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<bool> covered(universe.size(), false);
  int remaining = universe.size();
  Sample sample;
  std::vector<Literal> assumptions;
  while (remaining > 0) {
    PartialAssignment partial;
    std::optional<Configuration> witness;
    int sat_calls = 0;
    for (InteractionId id : order) {
      if (covered[id]) continue;
      const Interaction& inter = universe[id];
      bool consistent = std::all_of(
          inter.begin(), inter.end(),
          [&](Literal l) { return partial.Consistent(l); });
      if (!consistent) continue;
      if (witness && inter.CoveredBy(*witness)) {
        for (Literal l : inter) partial.Assign(l);
        continue;
      }
      if (witness && sat_calls >= kSeederSatCallsPerConfiguration) continue;
      assumptions = partial.literals();
      for (Literal l : inter) {
        if (!partial.value(l.feature())) assumptions.push_back(l);
      }
      ++sat_calls;
      // The first uncovered interaction is valid, so it always gets a
      // witness; later ones may time out and are simply skipped.
      SolveBudget budget = witness ? SolveBudget::Conflicts(kSeederConflictBudget)
                                   : SolveBudget::Unlimited();
      if (oracle.Check(assumptions, budget) == SatOutcome::kSatisfiable) {
        witness = oracle.LastModel();
        for (Literal l : inter) partial.Assign(l);
      }
    }
    if (!witness) {
      throw std::logic_error("greedy seeder found no witness configuration");
    }
    universe.ForEachCovered(*witness, [&](InteractionId id) {
      if (!covered[id]) {
        covered[id] = true;
        --remaining;
      }
    });
    sample.push_back(std::move(*witness));
  }
  return sample;
}

namespace {

// Drops configurations whose required interactions are all covered elsewhere.
Sample PruneRedundant(Sample configs, std::span<const Interaction> required) {
  std::vector<int> counts(required.size(), 0);
  std::vector<std::vector<int>> covers(configs.size());
  for (size_t c = 0; c < configs.size(); ++c) {
    for (size_t r = 0; r < required.size(); ++r) {
      if (required[r].CoveredBy(configs[c])) {
        covers[c].push_back(static_cast<int>(r));
        ++counts[r];
      }
    }
  }
  std::vector<bool> keep(configs.size(), true);
  for (size_t c = configs.size(); c-- > 0;) {
    bool needed = std::any_of(covers[c].begin(), covers[c].end(),
                              [&](int r) { return counts[r] == 1; });
    if (!needed) {
      keep[c] = false;
      for (int r : covers[c]) --counts[r];
    }
  }
  Sample out;
  for (size_t c = 0; c < configs.size(); ++c) {
    if (keep[c]) out.push_back(std::move(configs[c]));
  }
  return out;
}

}  // namespace

OptSampleResult OptSample(const FeatureModel& model,
                          std::span<const Interaction> required, int k,
                          const Sample* warm,
                          std::span<const Interaction> symmetry,
                          const SolveBudget& budget, uint64_t seed) {
  OptSampleResult result;
  if (required.empty()) {
    result.sample = Sample{};
    result.optimal = true;
    return result;
  }
  if (k <= 0) {
    result.infeasible = true;
    return result;
  }
  std::unordered_map<Interaction, int, InteractionHash> required_index;
  for (size_t r = 0; r < required.size(); ++r) {
    required_index.emplace(required[r], static_cast<int>(r));
  }
  std::vector<int> pins;
  for (const Interaction& s : symmetry) {
    auto it = required_index.find(s);
    if (it == required_index.end()) {
      throw std::invalid_argument("symmetry interaction " + s.ToString() +
                                  " is not required");
    }
    if (std::find(pins.begin(), pins.end(), it->second) != pins.end()) {
      throw std::invalid_argument("symmetry interaction " + s.ToString() +
                                  " pinned twice");
    }
    pins.push_back(it->second);
  }
  if (static_cast<int>(pins.size()) > k) {
    result.infeasible = true;
    return result;
  }
  if (warm != nullptr && static_cast<int>(warm->size()) > k) {
    throw std::invalid_argument("warm start has more than k configurations");
  }

  const int n = model.n_features();
  const int m = static_cast<int>(required.size());
  SatSolver solver(seed);
  solver.EnsureVars(k * n + k + k * m);
  auto x = [n](int copy, Literal l) {
    int32_t v = copy * n + l.feature();
    return l.positive() ? v : -v;
  };
  auto u = [n, k](int copy) { return k * n + copy + 1; };
  auto y = [n, k, m](int copy, int r) { return k * n + k + copy * m + r + 1; };

  std::vector<int32_t> lits;
  for (int i = 0; i < k; ++i) {
    for (const Clause& c : model.clauses()) {
      lits.clear();
      for (Literal l : c) lits.push_back(x(i, l));
      solver.AddClause(lits);
    }
    for (int r = 0; r < m; ++r) {
      solver.AddClause({u(i), -y(i, r)});
      for (Literal l : required[r]) solver.AddClause({-y(i, r), x(i, l)});
    }
    if (i + 1 < k) solver.AddClause({-u(i + 1), u(i)});
  }
  for (int r = 0; r < m; ++r) {
    lits.clear();
    for (int i = 0; i < k; ++i) lits.push_back(y(i, r));
    solver.AddClause(lits);
  }
  for (size_t j = 0; j < pins.size(); ++j) {
    solver.AddClause({y(static_cast<int>(j), pins[j])});
  }

  std::optional<Sample> incumbent;
  if (warm != nullptr) {
    for (const Interaction& r : required) {
      bool hit = std::any_of(warm->begin(), warm->end(), [&](const auto& c) {
        return r.CoveredBy(c);
      });
      if (!hit) {
        throw std::invalid_argument("warm start misses interaction " +
                                    r.ToString());
      }
    }
    incumbent = *warm;
    // Align warm configurations with pinned copies so the phase hint agrees
    // with the pins.
    std::vector<int> slot_of(warm->size(), -1);
    std::vector<int> order;
    bool aligned = true;
    for (size_t j = 0; j < pins.size() && aligned; ++j) {
      aligned = false;
      for (size_t c = 0; c < warm->size(); ++c) {
        if (slot_of[c] < 0 && required[pins[j]].CoveredBy((*warm)[c])) {
          slot_of[c] = static_cast<int>(j);
          order.push_back(static_cast<int>(c));
          aligned = true;
          break;
        }
      }
    }
    if (aligned) {
      for (size_t c = 0; c < warm->size(); ++c) {
        if (slot_of[c] < 0) order.push_back(static_cast<int>(c));
      }
      for (size_t i = 0; i < order.size(); ++i) {
        const Configuration& cfg = (*warm)[order[i]];
        for (int f = 1; f <= n; ++f) {
          solver.SetPhase(static_cast<int>(i) * n + f, cfg.value(f));
        }
        solver.SetPhase(u(static_cast<int>(i)), true);
        for (int r = 0; r < m; ++r) {
          solver.SetPhase(y(static_cast<int>(i), r), required[r].CoveredBy(cfg));
        }
      }
    }
  }

  const int lower = static_cast<int>(pins.size());
  SolveBudget step_budget = budget;
  int64_t used = 0;
  for (;;) {
    std::vector<int32_t> assumptions;
    if (incumbent) {
      const int target = static_cast<int>(incumbent->size()) - 1;
      if (target < lower) {
        result.optimal = true;
        break;
      }
      if (target < k) assumptions.push_back(-u(target));
    }
    if (budget.max_conflicts >= 0) {
      step_budget.max_conflicts = std::max<int64_t>(0, budget.max_conflicts - used);
      if (step_budget.max_conflicts == 0) break;
    }
    SatOutcome r = solver.Solve(assumptions, step_budget);
    used += solver.conflicts_in_last_solve();
    if (r == SatOutcome::kTimeout) break;
    if (r == SatOutcome::kUnsatisfiable) {
      if (incumbent) {
        result.optimal = true;
      } else {
        result.infeasible = true;
      }
      break;
    }
    Sample configs;
    bool prefix_ended = false;
    for (int i = 0; i < k; ++i) {
      bool used_copy = solver.ModelValue(u(i));
      if (used_copy && prefix_ended) {
        throw std::logic_error("used copies do not form a prefix");
      }
      if (!used_copy) {
        prefix_ended = true;
        continue;
      }
      Configuration cfg(n);
      for (int f = 1; f <= n; ++f) cfg.set(f, solver.ModelValue(i * n + f));
      configs.push_back(std::move(cfg));
    }
    configs = PruneRedundant(std::move(configs), required);
    if (!incumbent || configs.size() < incumbent->size()) {
      incumbent = std::move(configs);
    } else {
      // The assumption forbids reaching the incumbent's size again.
      throw std::logic_error("descending search did not shrink the sample");
    }
  }
  result.conflicts = used;
  result.sample = std::move(incumbent);
  return result;
}

std::vector<int> SelectRemoval(const Sample& sample,
                               const InteractionUniverse& universe, double phi,
                               std::mt19937_64& rng) {
  std::vector<int> order(sample.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> counts = CoverageCounts(sample, universe);
  std::vector<int> removed;
  int64_t missing = 0;
  std::vector<InteractionId> touched;
  for (int c : order) {
    touched.clear();
    int64_t extra = 0;
    universe.ForEachCovered(sample[c], [&](InteractionId id) {
      touched.push_back(id);
      if (--counts[id] == 0) ++extra;
    });
    if (static_cast<double>(missing + extra) > phi) {
      if (removed.empty()) {
        removed.push_back(c);
      }
      break;
    }
    missing += extra;
    removed.push_back(c);
  }
  return removed;
}

SampleCheck VerifySample(const Sample& sample, const FeatureModel& model,
                         const InteractionUniverse& universe) {
  SampleCheck out;
  for (size_t i = 0; i < sample.size(); ++i) {
    if (sample[i].size() != model.n_features() ||
        !IsValidConfiguration(model, sample[i])) {
      out.invalid_configuration = static_cast<int>(i);
      out.message = "configuration " + std::to_string(i) + " (" +
                    sample[i].ToString() + ") is not valid";
      return out;
    }
  }
  CoverageSet covered = Coverage(sample, universe);
  for (InteractionId id = 0; id < universe.size(); ++id) {
    if (!covered[id]) {
      out.missing = universe[id];
      out.message = "interaction {" + universe[id].ToString() +
                    "} is not covered";
      return out;
    }
  }
  out.ok = true;
  out.message = "ok";
  return out;
}

namespace {

// Best lower bound published by any producer. Readers see a monotone size.
class BoundCell {
 public:
  bool Publish(const std::vector<InteractionId>& ids, double t) {
    std::lock_guard lock(mu_);
    if (ids.size() <= best_.size()) return false;
    best_ = ids;
    t_ = t;
    history_.push_back(static_cast<int>(ids.size()));
    size_.store(static_cast<int>(ids.size()), std::memory_order_release);
    return true;
  }
  int size() const { return size_.load(std::memory_order_acquire); }
  std::vector<InteractionId> best() const {
    std::lock_guard lock(mu_);
    return best_;
  }
  double time() const {
    std::lock_guard lock(mu_);
    return t_;
  }
  std::vector<int> history() const {
    std::lock_guard lock(mu_);
    return history_;
  }

 private:
  mutable std::mutex mu_;
  std::vector<InteractionId> best_;
  std::vector<int> history_;
  std::atomic<int> size_{0};
  double t_ = 0;
};

// LBSearch followed by LB-LNS steps, publishing every improvement.
class LowerBoundDriver {
 public:
  LowerBoundDriver(const InteractionUniverse& universe,
                   const SamplnsOptions& options, BoundCell& cell,
                   std::function<double()> elapsed,
                   const std::atomic<bool>* stop,
                   std::optional<Clock::time_point> deadline)
      : options_(options),
        cell_(cell),
        elapsed_(std::move(elapsed)),
        stop_(stop),
        deadline_(deadline),
        checker_(universe, options.q, options.seed + 11),
        lns_(checker_, {}, Tuning(options), options.seed + 13) {
    lns_.set_interrupt(stop);
    lns_.set_deadline(deadline);
  }

  void Initialize() {
    WorkBudget budget;
    budget.interrupt = stop_;
    budget.deadline = deadline_;
    LbSearchOptions search = options_.lb_search;
    std::vector<InteractionId> start =
        LbSearch(checker_, search, budget, options_.seed + 17);
    lns_.SetSolution(start);
    cell_.Publish(start, elapsed_());
  }

  void Step() {
    lns_.Step(options_.mode == RunMode::kDeterministic);
    cell_.Publish(lns_.solution(), elapsed_());
  }

  bool proven_optimal() const { return lns_.proven_optimal(); }

 private:
  static LbTuning Tuning(const SamplnsOptions& o) {
    LbTuning t = o.lb;
    if (o.lb_iteration_nodes > 0) t.iteration_nodes = o.lb_iteration_nodes;
    return t;
  }

  const SamplnsOptions& options_;
  BoundCell& cell_;
  std::function<double()> elapsed_;
  const std::atomic<bool>* stop_;
  std::optional<Clock::time_point> deadline_;
  MutexChecker checker_;
  LbLns lns_;
};

// Exclusive subset of the uncovered interactions used to pin copies: greedy by
// ascending number of appearances in the current sample, then refined by a
// short LB-LNS run on that pool.
std::vector<InteractionId> SymmetrySet(const std::vector<InteractionId>& pool,
                                       const std::vector<int>& appearances,
                                       MutexChecker& q,
                                       const SamplnsOptions& options,
                                       std::optional<Clock::time_point> deadline,
                                       uint64_t seed) {
  std::vector<InteractionId> sorted = pool;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [&](InteractionId a, InteractionId b) {
                     return appearances[a] < appearances[b];
                   });
  std::vector<InteractionId> chosen;
  for (InteractionId c : sorted) {
    bool ok = std::all_of(chosen.begin(), chosen.end(),
                          [&](InteractionId j) { return q.Exclusive(c, j); });
    if (ok) chosen.push_back(c);
  }
  LbTuning tuning = options.lb;
  tuning.iteration_time_s = 0.1 * options.iteration_time_s;
  if (options.lb_iteration_nodes > 0) {
    tuning.iteration_nodes = options.lb_iteration_nodes;
  }
  LbLns lns(q, pool, tuning, seed);
  lns.SetSolution(chosen);
  const bool deterministic = options.mode == RunMode::kDeterministic;
  std::optional<Clock::time_point> local;
  if (!deterministic) {
    local = EarlierOf(After(Clock::now(), tuning.iteration_time_s), deadline);
    lns.set_deadline(local);
  }
  for (int step = 0; step < 3 && !lns.proven_optimal(); ++step) {
    if (local && Clock::now() >= *local) break;
    lns.Step(deterministic);
  }
  return lns.solution();
}

}  // namespace

SamplnsResult Samplns(const InteractionUniverse& universe,
                      const SamplnsOptions& options) {
  const auto start = options.start.value_or(Clock::now());
  const auto deadline = After(start, options.total_time_s);
  auto elapsed = [start]() {
    return std::chrono::duration<double>(Clock::now() - start).count();
  };
  const bool deterministic = options.mode == RunMode::kDeterministic;
  const FeatureModel& model = universe.model();

  SamplnsResult result;
  Sample sample = options.initial ? *options.initial
                                  : InitialSample(universe, options.seed);
  result.initial_size = static_cast<int>(sample.size());
  result.t_last_ub_s = elapsed();

  BoundCell cell;
  std::atomic<bool> stop{false};
  // Deterministic runs never consult the clock inside subsolvers.
  std::optional<Clock::time_point> lb_deadline;
  if (!deterministic) lb_deadline = deadline;
  LowerBoundDriver lb(universe, options, cell, elapsed, &stop, lb_deadline);
  std::atomic<bool> lb_proven{false};
  std::thread worker;
  if (deterministic) {
    lb.Initialize();
    lb_proven = lb.proven_optimal();
  } else {
    worker = std::thread([&]() {
      lb.Initialize();
      while (!stop.load() && !lb.proven_optimal() && Clock::now() < deadline) {
        lb.Step();
      }
      lb_proven = lb.proven_optimal();
    });
  }

  MutexChecker q(universe, options.q, options.seed + 7);
  std::mt19937_64 rng(options.seed * 0x9e3779b97f4a7c15ull + 1);
  double phi = options.ub.phi;
  int iteration = 0;
  bool ub_proven = false;

  for (;;) {
    if (static_cast<int>(sample.size()) <= cell.size()) break;
    if (Clock::now() >= deadline) break;
    if (options.max_iterations >= 0 && iteration >= options.max_iterations) {
      break;
    }
    if (ub_proven) {
      // Only the lower bound can still move.
      if (deterministic) {
        if (lb.proven_optimal()) break;
        ++iteration;
        lb.Step();
        continue;
      }
      if (lb_proven.load()) break;
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
      continue;
    }
    ++iteration;
    UbIterationRecord rec;
    rec.iteration = iteration;
    rec.phi = phi;

    std::vector<int> removal = SelectRemoval(sample, universe, phi, rng);
    std::vector<InteractionId> missing =
        MissingAfterRemoval(sample, removal, universe);
    rec.removed = static_cast<int>(removal.size());
    rec.missing = static_cast<int>(missing.size());
    const bool whole = removal.size() == sample.size();

    std::vector<bool> is_removed(sample.size(), false);
    for (int c : removal) is_removed[c] = true;
    Sample kept, removed;
    for (size_t c = 0; c < sample.size(); ++c) {
      (is_removed[c] ? removed : kept).push_back(sample[c]);
    }

    std::optional<Sample> replacement;
    if (missing.empty()) {
      replacement = Sample{};
      rec.optimal = true;
    } else {
      std::vector<int> appearances = CoverageCounts(sample, universe);
      std::optional<Clock::time_point> iter_deadline;
      if (!deterministic) {
        iter_deadline =
            EarlierOf(After(Clock::now(), options.iteration_time_s), deadline);
      }
      std::vector<InteractionId> sym = SymmetrySet(
          missing, appearances, q, options, iter_deadline,
          options.seed + static_cast<uint64_t>(iteration) * 31);
      // Any exclusive subset of valid interactions bounds the whole problem.
      cell.Publish(sym, elapsed());
      if (sym.size() >= removal.size()) {
        rec.skipped = true;
        rec.optimal = true;
      } else {
        std::vector<Interaction> required, pins;
        for (InteractionId id : missing) required.push_back(universe[id]);
        for (InteractionId id : sym) pins.push_back(universe[id]);
        SolveBudget budget;
        budget.max_conflicts =
            options.iteration_conflicts > 0 ? options.iteration_conflicts : -1;
        budget.deadline = iter_deadline;
        budget.interrupt = nullptr;
        OptSampleResult sub =
            OptSample(model, required, static_cast<int>(removal.size()),
                      &removed, pins, budget,
                      options.seed + static_cast<uint64_t>(iteration));
        rec.optimal = sub.optimal;
        if (sub.sample && sub.sample->size() < removed.size()) {
          replacement = std::move(sub.sample);
        }
      }
    }
    const size_t before = sample.size();
    if (replacement) {
      kept.insert(kept.end(), replacement->begin(), replacement->end());
      sample = std::move(kept);
      result.t_last_ub_s = elapsed();
    }
    if (whole && rec.optimal) ub_proven = true;
    if (rec.optimal) {
      phi *= options.ub.grow_factor;
    } else if (sample.size() >= before) {
      phi = std::max(1.0, phi * options.ub.shrink_factor);
    }
    if (options.verify_every_iteration) {
      SampleCheck check = VerifySample(sample, model, universe);
      if (!check.ok) throw std::logic_error("coverage lost: " + check.message);
    }
    if (deterministic && !lb.proven_optimal()) lb.Step();
    rec.ub = static_cast<int>(sample.size());
    rec.lb = cell.size();
    result.history.push_back(rec);
    if (options.on_iteration) options.on_iteration(rec);
  }

  stop = true;
  if (worker.joinable()) worker.join();

  std::vector<InteractionId> best = cell.best();
  result.lower_bound = MutexSet::FromIds(best, universe, options.q);
  result.lb_history = cell.history();
  result.t_last_lb_s = cell.time();
  result.sample = std::move(sample);
  result.iterations = iteration;
  result.ub_proven_optimal = ub_proven;
  result.lb_proven_optimal = lb.proven_optimal();
  result.status = result.lower_bound.size() == static_cast<int>(result.sample.size())
                      ? BoundStatus::kOptimal
                      : BoundStatus::kFeasible;
  return result;
}

}  // namespace samplns
