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


// Acceptance suite: prints one PASS/FAIL/SKIP line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "fixtures.h"
#include "oracle.h"
#include "samplns/certification.h"

namespace {

using namespace samplns;
using fixtures::Set;

double Since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

struct Verdict {
  bool pass = true;
  bool skipped = false;
  std::ostringstream detail;
  void Require(bool cond, const std::string& what) {
    if (!cond) {
      if (!pass) detail << "; ";
      detail << "failed: " << what;
      pass = false;
    }
  }
};

Verdict WorkedUpperBound() {
  Verdict v;
  const auto start = Clock::now();
  FeatureModel m = fixtures::Toy4();
  InteractionUniverse u = EnumerateUniverse(m, 2);
  auto configs = oracle::ValidConfigurations(m);
  v.Require(u.size() == 22, "22 valid interactions");
  auto sorted = u.valid();
  std::sort(sorted.begin(), sorted.end());
  v.Require(sorted == oracle::ValidInteractions(m, 2, configs),
            "universe matches enumeration");
  SamplnsResult r = Samplns(u, SamplnsOptions{});
  const double secs = Since(start);
  v.Require(r.sample.size() == 5, "UB = 5");
  v.Require(VerifySample(r.sample, m, u).ok, "sample verifies");
  v.Require(secs < 10, "within 10 s");
  v.Require(configs.size() == 9, "9 valid configurations");
  v.Require(!oracle::CoverExists(u.valid(), configs, 4), "no covering 4-subset");
  v.Require(oracle::CoverExists(u.valid(), configs, 5), "covering 5-subset");
  if (v.pass) {
    v.detail << "|valid|=22, UB=" << r.sample.size() << " in " << secs
             << " s, brute force: no 4 of 9 configurations cover, 5 do";
  }
  return v;
}

Verdict WorkedLowerBound() {
  Verdict v;
  const auto start = Clock::now();
  FeatureModel m = fixtures::Lb3();
  InteractionUniverse u = EnumerateUniverse(m, 2);
  MutexChecker q(u, MutexLevel::kLevel0);
  MutexSet initial;
  initial.interactions = Set({{1, 2}, {1, -2}, {-1, 3}, {-1, -3}});
  MutexSet removed;
  removed.interactions = Set({{-1, 3}, {-1, -3}});
  LbLns lns(q, {}, LbTuning{}, 0);
  lns.SetSolution(initial.Ids(u));
  LbIteration it = lns.StepWithRemoval(removed.Ids(u), true);
  MutexSet result = MutexSet::FromIds(lns.solution(), u, MutexLevel::kLevel0);
  const double secs = Since(start);
  v.Require(it.size_before == 4 && result.size() == 5, "one iteration 4 -> 5");
  v.Require(result.interactions ==
                Set({{1, 2}, {1, -2}, {-1, -3}, {2, 3}, {-2, 3}}),
            "expected set");
  v.Require(VerifyMutexCertificate(result, m).ok, "certificate verifies");
  const int mis =
      oracle::MaxExclusiveSet(u.valid(), oracle::ValidConfigurations(m));
  v.Require(u.size() == 11 && mis == 5, "brute-force maximum is 5");
  v.Require(secs < 1, "under 1 s");
  if (v.pass) {
    v.detail << "4 -> " << result.size() << " in one iteration, brute-force "
             << "maximum over 11 vertices = " << mis << ", " << secs << " s";
  }
  return v;
}

Verdict MatchingBounds() {
  Verdict v;
  const auto start = Clock::now();
  FeatureModel m = fixtures::Free(3);
  InteractionUniverse u = EnumerateUniverse(m, 2);
  SamplnsResult r = Samplns(u, SamplnsOptions{});
  const double secs = Since(start);
  DualityCheck d = CheckDuality(r.sample, r.lower_bound, m, u);
  v.Require(d.ok(), "duality check: " + d.message);
  v.Require(d.ok() && d.report->ub == 4 && d.report->lb == 4, "UB = LB = 4");
  v.Require(d.ok() && d.report->status == "optimal", "status optimal");
  v.Require(r.status == BoundStatus::kOptimal, "early termination");
  v.Require(secs < 5, "under 5 s");
  if (v.pass) v.detail << "UB = LB = 4, optimal after " << secs << " s";
  return v;
}

Verdict UnconstrainedScaling() {
  Verdict v;
  const auto start = Clock::now();
  std::ostringstream ubs;
  for (int n = 4; n <= 10; ++n) {
    FeatureModel m = fixtures::Free(n);
    InteractionUniverse u = EnumerateUniverse(m, 2);
    SamplnsOptions o;
    o.total_time_s = 20;
    SamplnsResult r = Samplns(u, o);
    const int ub = static_cast<int>(r.sample.size());
    ubs << (n > 4 ? " " : "") << "n=" << n << ":" << ub;
    v.Require(VerifySample(r.sample, m, u).ok,
              "coverage n=" + std::to_string(n));
    v.Require(ub >= 4, "UB >= 4 for n=" + std::to_string(n));
    if (n <= 5) {
      auto configs = oracle::ValidConfigurations(m);
      if (n == 4) {
        v.Require(u.size() == 24, "24 interactions for n=4");
        v.Require(!oracle::CoverExists(u.valid(), configs, 4),
                  "no 4 of 16 configurations cover");
        v.Require(oracle::CoverExists(u.valid(), configs, 5), "5 cover");
        v.Require(ub == 5, "UB = 5 for n=4");
      }
      auto opt = oracle::MinCoverSize(u.valid(), configs);
      v.Require(opt.has_value(), "exhaustive optimum n=" + std::to_string(n));
      v.Require(opt && ub == *opt,
                "UB equals exhaustive optimum for n=" + std::to_string(n));
    }
  }
  const double secs = Since(start);
  v.Require(secs < 60, "under 60 s");
  if (v.pass) v.detail << ubs.str() << " in " << secs << " s";
  return v;
}

struct SuiteStats {
  int runs = 0;
  int optimal = 0;
  int optimal_checked = 0;
  int gaps = 0;
  int ub_checked = 0;  // gap runs whose UB the subsolver proved optimal
  int determinism_checked = 0;
};

void RandomSuite(Verdict& duality, Verdict& monotone) {
  const auto start = Clock::now();
  std::mt19937_64 rng(2024);
  SuiteStats stats;
  for (int trial = 0; trial < 200; ++trial) {
    FeatureModel m = oracle::RandomSatisfiableModel(rng, 4, 12, 0.5, 2.5);
    const std::string tag = " (model " + std::to_string(trial) + ")";
    InteractionUniverse u = EnumerateUniverse(m, 2);
    SamplnsOptions o;
    o.seed = trial;
    o.max_iterations = 15;
    o.total_time_s = 300;
    std::vector<UbIterationRecord> history;
    o.on_iteration = [&](const UbIterationRecord& r) { history.push_back(r); };
    SamplnsResult r = Samplns(u, o);
    ++stats.runs;

    const int ub = static_cast<int>(r.sample.size());
    const int lb = r.lower_bound.size();
    duality.Require(lb <= ub, "LB <= UB" + tag);
    duality.Require(VerifySample(r.sample, m, u).ok, "verify_sample" + tag);
    duality.Require(VerifyMutexCertificate(r.lower_bound, m).ok,
                    "verify_mutex_certificate" + tag);
    DualityCheck d = CheckDuality(r.sample, r.lower_bound, m, u);
    duality.Require(d.ok(), "check_duality" + tag);
    if (d.ok() && d.report->status == "optimal") {
      ++stats.optimal;
      if (m.n_features() <= 10) {
        auto opt = oracle::MinCoverSize(u.valid(), oracle::ValidConfigurations(m));
        duality.Require(opt.has_value(), "min-cover oracle finished" + tag);
        duality.Require(opt && *opt == ub, "min-cover oracle agrees" + tag);
        ++stats.optimal_checked;
      }
    } else {
      ++stats.gaps;
      if (r.ub_proven_optimal && m.n_features() <= 10) {
        auto opt = oracle::MinCoverSize(u.valid(), oracle::ValidConfigurations(m));
        duality.Require(opt && *opt == ub, "proven UB agrees with oracle" + tag);
        ++stats.ub_checked;
      }
    }

    int prev = r.initial_size;
    for (const UbIterationRecord& h : history) {
      monotone.Require(h.ub <= prev, "UB nonincreasing" + tag);
      prev = h.ub;
    }
    monotone.Require(std::is_sorted(r.lb_history.begin(), r.lb_history.end()),
                     "LB nondecreasing" + tag);
    o.on_iteration = nullptr;
    SamplnsResult again = Samplns(u, o);
    DualityCheck d2 = CheckDuality(again.sample, again.lower_bound, m, u);
    monotone.Require(d.ok() && d2.ok() &&
                         d.report->ToJson().dump() == d2.report->ToJson().dump(),
                     "identical GapReports" + tag);
    ++stats.determinism_checked;
  }
  const double secs = Since(start);
  if (duality.pass) {
    duality.detail << stats.runs << " models, " << stats.optimal
                   << " optimal (" << stats.optimal_checked
                   << " confirmed by exhaustive minimum cover), " << stats.gaps
                   << " with a gap (" << stats.ub_checked
                   << " of them with a proven UB confirmed by the same "
                      "oracle), "
                   << secs << " s";
  }
  if (monotone.pass) {
    monotone.detail << stats.determinism_checked
                    << " models: UB nonincreasing, LB nondecreasing, reruns "
                       "byte-identical";
  }
}

Verdict PredicateOracles() {
  Verdict v;
  const auto start = Clock::now();
  std::mt19937_64 rng(77);
  int64_t pairs = 0, exclusive = 0, l0_hits = 0, p2_hits = 0;
  for (int trial = 0; trial < 50; ++trial) {
    FeatureModel m = oracle::RandomSatisfiableModel(rng, 3, 9, 0.5, 2.5);
    auto configs = oracle::ValidConfigurations(m);
    InteractionUniverse u = EnumerateUniverse(m, 2);
    ModelOracle o(m);
    for (InteractionId a = 0; a < u.size(); ++a) {
      for (InteractionId b = a + 1; b < u.size(); ++b) {
        const bool truth = !oracle::Compatible(u[a], u[b], configs);
        const bool l0 = MutexLevel0(u[a], u[b], u);
        const bool p1 = MutexBlocking(u[a], u[b], u, 1);
        const bool p2 = MutexBlocking(u[a], u[b], u, 2);
        const std::optional<bool> ex = MutexExact(u[a], u[b], o);
        ++pairs;
        exclusive += truth;
        l0_hits += l0;
        p2_hits += p2;
        if (!ex || *ex != truth || (l0 && !p1) || (p1 && !p2) ||
            (p2 && !truth)) {
          v.Require(false, "pair " + u[a].ToString() + " / " + u[b].ToString() +
                               " in " + ToDimacs(m));
          return v;
        }
      }
    }
  }
  const double secs = Since(start);
  v.Require(secs < 120, "under 120 s");
  if (v.pass) {
    v.detail << pairs << " pairs on 50 models, " << exclusive
             << " exclusive; L0 found " << l0_hits << ", P2 " << p2_hits
             << ", exact agrees everywhere; " << secs << " s";
  }
  return v;
}

Verdict CarFixture() {
  Verdict v;
  std::string path;
  if (const char* env = std::getenv("SAMPLNS_CAR_MODEL")) path = env;
  for (const char* candidate :
       {SAMPLNS_SOURCE_DIR "/tests/data/car.dimacs",
        SAMPLNS_SOURCE_DIR "/tests/data/car.cnf",
        SAMPLNS_SOURCE_DIR "/tests/data/car.json"}) {
    if (path.empty() && std::filesystem::exists(candidate)) path = candidate;
  }
  if (path.empty()) {
    v.skipped = true;
    v.detail << "car fixture not supplied";
    return v;
  }
  const auto start = Clock::now();
  FeatureModel m = LoadModelFile(path);
  InteractionUniverse u = EnumerateUniverse(m, 2);
  SamplnsOptions o;
  o.start = start;
  SamplnsResult r = Samplns(u, o);
  DualityCheck d = CheckDuality(r.sample, r.lower_bound, m, u);
  v.Require(d.ok(), "duality check: " + d.message);
  v.Require(d.ok() && d.report->ub == 5 && d.report->lb == 5, "UB = LB = 5");
  v.Require(Since(start) < 900, "within 900 s");
  if (d.ok()) v.detail << " UB=" << d.report->ub << " LB=" << d.report->lb;
  return v;
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const std::string& name, Verdict& v) {
    const char* tag = v.skipped ? "SKIP" : v.pass ? "PASS" : "FAIL";
    std::cout << "[" << tag << "] criterion " << id << " - " << name << ": "
              << v.detail.str() << std::endl;
    if (!v.pass && !v.skipped) ++failures;
  };
  Verdict c1 = WorkedUpperBound();
  report(1, "worked upper-bound example", c1);
  Verdict c2 = WorkedLowerBound();
  report(2, "worked lower-bound example", c2);
  Verdict c3 = MatchingBounds();
  report(3, "matching bounds", c3);
  Verdict c4 = UnconstrainedScaling();
  report(4, "unconstrained scaling", c4);
  Verdict c5, c6;
  RandomSuite(c5, c6);
  report(5, "duality invariants on random models", c5);
  report(6, "monotonicity and determinism", c6);
  Verdict c7 = PredicateOracles();
  report(7, "exclusivity predicates against enumeration", c7);
  Verdict c8 = CarFixture();
  report(8, "car fixture", c8);
  std::cout << (failures ? "acceptance: FAILED" : "acceptance: all criteria met")
            << std::endl;
  return failures ? 1 : 0;
}
