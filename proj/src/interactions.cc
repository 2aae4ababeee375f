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

#include "samplns/interactions.h"

#include <algorithm>
#include <sstream>

#include "samplns/sat.h"

namespace samplns {

Interaction::Interaction(std::span<const Literal> literals) {
  if (literals.empty() || literals.size() > kMaxStrength) {
    throw ModelError("interaction strength out of range: " +
                     std::to_string(literals.size()));
  }
  size_ = static_cast<uint8_t>(literals.size());
  std::copy(literals.begin(), literals.end(), literals_.begin());
  std::sort(literals_.begin(), literals_.begin() + size_);
  for (int i = 0; i < size_; ++i) {
    if (literals_[i].value() == 0) throw ModelError("zero literal");
    if (i > 0 && literals_[i].feature() == literals_[i - 1].feature()) {
      throw ModelError("interaction repeats feature " +
                       std::to_string(literals_[i].feature()));
    }
  }
}

Interaction::Interaction(std::initializer_list<int32_t> literals) {
  std::vector<Literal> lits;
  for (int32_t v : literals) lits.emplace_back(v);
  *this = Interaction(std::span<const Literal>(lits));
}

bool Interaction::Contains(Literal l) const {
  return std::find(begin(), end(), l) != end();
}

bool Interaction::CoveredBy(const Configuration& c) const {
  return std::all_of(begin(), end(),
                     [&](Literal l) { return c.satisfies(l); });
}

std::string Interaction::ToString() const {
  std::string out;
  for (int i = 0; i < size_; ++i) {
    if (i > 0) out += ' ';
    out += std::to_string(literals_[i].value());
  }
  return out;
}

bool Interaction::operator==(const Interaction& o) const {
  return size_ == o.size_ && std::equal(begin(), end(), o.begin());
}

bool Interaction::operator<(const Interaction& o) const {
  return std::lexicographical_compare(begin(), end(), o.begin(), o.end());
}

size_t InteractionHash::operator()(const Interaction& i) const {
  uint64_t h = 0x84222325cbf29ce4ull;
  for (Literal l : i) {
    h ^= static_cast<uint32_t>(l.value());
    h *= 0x100000001b3ull;
    h ^= h >> 29;
  }
  return static_cast<size_t>(h);
}

Interaction ParseInteraction(std::string_view line) {
  std::istringstream in{std::string(line)};
  std::vector<Literal> lits;
  int64_t v;
  while (in >> v) {
    if (v == 0 || v > INT32_MAX || v < -INT32_MAX) {
      throw ModelError("bad literal in interaction line: '" +
                       std::string(line) + "'");
    }
    lits.emplace_back(static_cast<int32_t>(v));
  }
  if (!in.eof()) {
    throw ModelError("bad interaction line: '" + std::string(line) + "'");
  }
  return Interaction(std::span<const Literal>(lits));
}

int64_t InteractionUniverse::IndexOf(const Interaction& i) const {
  if (i.size() != t_) return -1;
  int64_t rank = 0;
  int code = 0;
  for (int k = 0; k < t_; ++k) {
    int f = i[k].feature();
    if (f > model_.n_features() || rank_of_[f] < 0) return -1;
    rank += binom_[rank_of_[f]][k + 1];
    if (i[k].positive()) code |= 1 << k;
  }
  return (rank << t_) + code;
}

int64_t InteractionUniverse::PairIndex(int rank_a, int rank_b, bool pos_a,
                                       bool pos_b) const {
  if (rank_a > rank_b) {
    std::swap(rank_a, rank_b);
    std::swap(pos_a, pos_b);
  }
  return (binom_[rank_b][2] + rank_a) * 4 + (pos_a ? 1 : 0) + (pos_b ? 2 : 0);
}

InteractionId InteractionUniverse::IdOf(const Interaction& i) const {
  int64_t idx = IndexOf(i);
  return idx < 0 ? -1 : id_by_index_[idx];
}

bool InteractionUniverse::PairValid(Literal p, Literal q) const {
  if (p.feature() == q.feature()) return p == q;
  const int fp = p.feature(), fq = q.feature();
  if (fp > model_.n_features() || fq > model_.n_features()) return true;
  int rp = rank_of_[fp], rq = rank_of_[fq];
  if (rp < 0 || rq < 0) return true;
  return pair_valid_[PairIndex(rp, rq, p.positive(), q.positive())] != 0;
}

std::vector<InteractionId> InteractionUniverse::Covered(
    const Configuration& config) const {
  std::vector<InteractionId> out;
  ForEachCovered(config, [&](InteractionId id) { out.push_back(id); });
  return out;
}

// Builds a universe; kept as a class so it can reach the private fields.
class UniverseBuilder {
 public:
  static InteractionUniverse Build(const FeatureModel& model, int t,
                                   const Sample* seed_sample, uint64_t seed) {
    if (t < 1 || t > kMaxStrength) {
      throw ModelError("interaction strength must be in [1, " +
                       std::to_string(kMaxStrength) + "]");
    }
    InteractionUniverse u;
    u.t_ = t;
    u.model_ = model;
    u.concrete_ = model.concrete_features();
    u.rank_of_.assign(model.n_features() + 1, -1);
    for (size_t r = 0; r < u.concrete_.size(); ++r) {
      u.rank_of_[u.concrete_[r]] = static_cast<int>(r);
    }
    const int c = static_cast<int>(u.concrete_.size());
    const int kmax = std::max(t, 2);
    u.binom_.assign(c + 1, std::vector<int64_t>(kmax + 1, 0));
    for (int n = 0; n <= c; ++n) {
      u.binom_[n][0] = 1;
      for (int k = 1; k <= std::min(n, kmax); ++k) {
        u.binom_[n][k] = u.binom_[n - 1][k - 1] +
                         (k <= n - 1 ? u.binom_[n - 1][k] : 0);
      }
    }

    ModelOracle oracle(model, seed);
    if (oracle.Check({}) != SatOutcome::kSatisfiable) {
      throw UnsatisfiableModel("model '" + model.name() +
                               "' has no valid configuration");
    }

    // Pair table: needed by mutual-exclusiveness predicates at every t.
    const int64_t n_pairs = c >= 2 ? u.binom_[c][2] * 4 : 0;
    std::vector<int8_t> pair_state(n_pairs, 0);  // 0 unknown, 1 valid, -1 not
    std::vector<Configuration> witnesses;
    if (seed_sample != nullptr) {
      for (const Configuration& cfg : *seed_sample) {
        if (IsValidConfiguration(model, cfg)) witnesses.push_back(cfg);
      }
    }
    witnesses.push_back(oracle.LastModel());
    auto harvest_pairs = [&](const Configuration& cfg) {
      for (int b = 1; b < c; ++b) {
        const bool vb = cfg.value(u.concrete_[b]);
        for (int a = 0; a < b; ++a) {
          pair_state[u.PairIndex(a, b, cfg.value(u.concrete_[a]), vb)] = 1;
        }
      }
    };
    for (const Configuration& cfg : witnesses) harvest_pairs(cfg);
    for (int b = 1; b < c; ++b) {
      for (int a = 0; a < b; ++a) {
        for (int code = 0; code < 4; ++code) {
          int64_t idx = (u.binom_[b][2] + a) * 4 + code;
          if (pair_state[idx] != 0) continue;
          Literal la((code & 1) ? u.concrete_[a] : -u.concrete_[a]);
          Literal lb((code & 2) ? u.concrete_[b] : -u.concrete_[b]);
          std::array<Literal, 2> assumption{la, lb};
          SatOutcome r = oracle.Check(assumption);
          if (r == SatOutcome::kSatisfiable) {
            Configuration w = oracle.LastModel();
            harvest_pairs(w);
            witnesses.push_back(std::move(w));
          } else if (r == SatOutcome::kUnsatisfiable) {
            pair_state[idx] = -1;
          } else {
            throw ModelError("oracle gave up classifying an interaction");
          }
        }
      }
    }
    u.pair_valid_.resize(n_pairs);
    for (int64_t i = 0; i < n_pairs; ++i) u.pair_valid_[i] = pair_state[i] > 0;

    // Candidates of strength t. For t == 2 the pair table is the answer.
    const int64_t n_comb = t <= c ? u.binom_[c][t] : 0;
    const int64_t n_index = n_comb << t;
    u.id_by_index_.assign(n_index, -1);
    std::vector<int8_t> state(n_index, 0);
    auto for_each_candidate = [&](auto&& fn) {
      if (t > c) return;
      std::array<int, kMaxStrength> idx{};
      for (int i = 0; i < t; ++i) idx[i] = i;
      for (;;) {
        int64_t rank = 0;
        for (int i = 0; i < t; ++i) rank += u.binom_[idx[i]][i + 1];
        for (int code = 0; code < (1 << t); ++code) {
          fn(idx, rank, code);
        }
        int i = t - 1;
        while (i >= 0 && idx[i] == c - t + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < t; ++j) idx[j] = idx[j - 1] + 1;
      }
    };
    auto literals_of = [&](const std::array<int, kMaxStrength>& idx,
                           int code) {
      std::vector<Literal> lits;
      for (int i = 0; i < t; ++i) {
        int f = u.concrete_[idx[i]];
        lits.emplace_back((code >> i) & 1 ? f : -f);
      }
      return lits;
    };
    if (t == 2) {
      for (int64_t i = 0; i < n_index; ++i) state[i] = pair_state[i];
    } else {
      auto harvest = [&](const Configuration& cfg) {
        for_each_candidate([&](const auto& idx, int64_t rank, int code) {
          int cc = 0;
          for (int i = 0; i < t; ++i) {
            if (cfg.value(u.concrete_[idx[i]])) cc |= 1 << i;
          }
          if (cc == code) state[(rank << t) + code] = 1;
        });
      };
      for (const Configuration& w : witnesses) harvest(w);
      for_each_candidate([&](const auto& idx, int64_t rank, int code) {
        int64_t i = (rank << t) + code;
        if (state[i] != 0) return;
        // Any invalid sub-pair settles it without a solver call.
        std::vector<Literal> lits = literals_of(idx, code);
        for (size_t a = 0; a < lits.size() && state[i] == 0; ++a) {
          for (size_t b = a + 1; b < lits.size(); ++b) {
            if (!u.PairValid(lits[a], lits[b])) {
              state[i] = -1;
              break;
            }
          }
        }
        if (state[i] != 0) return;
        SatOutcome r = oracle.Check(lits);
        if (r == SatOutcome::kSatisfiable) {
          state[i] = 1;
          // Harvesting every model costs a full candidate scan; only the
          // direct hit is recorded here.
        } else if (r == SatOutcome::kUnsatisfiable) {
          state[i] = -1;
        } else {
          throw ModelError("oracle gave up classifying an interaction");
        }
      });
    }
    for_each_candidate([&](const auto& idx, int64_t rank, int code) {
      int64_t i = (rank << t) + code;
      Interaction inter(literals_of(idx, code));
      if (state[i] > 0) {
        u.id_by_index_[i] = static_cast<InteractionId>(u.valid_.size());
        u.valid_.push_back(inter);
      } else {
        u.invalid_.push_back(inter);
      }
    });
    return u;
  }
};

InteractionUniverse EnumerateUniverse(const FeatureModel& model, int t,
                                      const Sample* seed_sample,
                                      uint64_t seed) {
  return UniverseBuilder::Build(model, t, seed_sample, seed);
}

CoverageSet Coverage(std::span<const Configuration> sample,
                     const InteractionUniverse& universe) {
  CoverageSet covered(universe.size(), false);
  for (const Configuration& c : sample) {
    universe.ForEachCovered(c, [&](InteractionId id) { covered[id] = true; });
  }
  return covered;
}

std::vector<InteractionId> CoveredIds(std::span<const Configuration> sample,
                                      const InteractionUniverse& universe) {
  CoverageSet covered = Coverage(sample, universe);
  std::vector<InteractionId> out;
  for (InteractionId id = 0; id < universe.size(); ++id) {
    if (covered[id]) out.push_back(id);
  }
  return out;
}

std::vector<int> CoverageCounts(std::span<const Configuration> sample,
                                const InteractionUniverse& universe) {
  std::vector<int> counts(universe.size(), 0);
  for (const Configuration& c : sample) {
    universe.ForEachCovered(c, [&](InteractionId id) { ++counts[id]; });
  }
  return counts;
}

std::vector<InteractionId> MissingAfterRemoval(
    std::span<const Configuration> sample, std::span<const int> removed,
    const InteractionUniverse& universe) {
  std::vector<bool> is_removed(sample.size(), false);
  for (int i : removed) is_removed.at(i) = true;
  CoverageSet kept(universe.size(), false);
  for (size_t i = 0; i < sample.size(); ++i) {
    if (is_removed[i]) continue;
    universe.ForEachCovered(sample[i],
                            [&](InteractionId id) { kept[id] = true; });
  }
  CoverageSet lost(universe.size(), false);
  for (int i : removed) {
    universe.ForEachCovered(sample[i], [&](InteractionId id) {
      if (!kept[id]) lost[id] = true;
    });
  }
  std::vector<InteractionId> out;
  for (InteractionId id = 0; id < universe.size(); ++id) {
    if (lost[id]) out.push_back(id);
  }
  return out;
}

std::string FormatInteractions(std::vector<Interaction> interactions) {
  std::sort(interactions.begin(), interactions.end());
  std::string out;
  for (const Interaction& i : interactions) out += i.ToString() + "\n";
  return out;
}

}  // namespace samplns
