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


#include "oracle.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <unordered_set>

namespace oracle {

using samplns::Clause;
using samplns::Literal;

namespace {

using Bits = std::vector<uint64_t>;

Bits MakeBits(int n) { return Bits((n + 63) / 64, 0); }
void SetBit(Bits& b, int i) { b[i >> 6] |= uint64_t{1} << (i & 63); }
bool TestBit(const Bits& b, int i) { return (b[i >> 6] >> (i & 63)) & 1u; }
int Count(const Bits& b) {
  int c = 0;
  for (uint64_t w : b) c += std::popcount(w);
  return c;
}
bool Empty(const Bits& b) {
  return std::all_of(b.begin(), b.end(), [](uint64_t w) { return w == 0; });
}
bool SubsetOf(const Bits& a, const Bits& b) {
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] & ~b[i]) return false;
  }
  return true;
}

struct BitsHash {
  size_t operator()(const Bits& b) const {
    uint64_t h = 1469598103934665603ull;
    for (uint64_t w : b) h = (h ^ w) * 1099511628211ull;
    return h;
  }
};

bool Satisfies(const FeatureModel& model, const Configuration& c) {
  for (const Clause& clause : model.clauses()) {
    bool sat = false;
    for (Literal l : clause) sat = sat || c.satisfies(l);
    if (!sat) return false;
  }
  return true;
}

}  // namespace

std::vector<Configuration> ValidConfigurations(const FeatureModel& model) {
  const int n = model.n_features();
  std::vector<Configuration> out;
  for (uint64_t mask = 0; mask < (uint64_t{1} << n); ++mask) {
    Configuration c(n);
    for (int f = 1; f <= n; ++f) c.set(f, (mask >> (f - 1)) & 1u);
    if (Satisfies(model, c)) out.push_back(c);
  }
  return out;
}

std::vector<Interaction> ValidInteractions(
    const FeatureModel& model, int t, const std::vector<Configuration>& configs) {
  const std::vector<int>& conc = model.concrete_features();
  std::vector<Interaction> out;
  std::vector<int> idx(t);
  std::function<void(int, int)> rec = [&](int pos, int from) {
    if (pos == t) {
      for (int code = 0; code < (1 << t); ++code) {
        std::vector<Literal> lits;
        for (int i = 0; i < t; ++i) {
          const int f = conc[idx[i]];
          lits.emplace_back((code >> i) & 1 ? f : -f);
        }
        Interaction inter(lits);
        for (const Configuration& c : configs) {
          if (inter.CoveredBy(c)) {
            out.push_back(inter);
            break;
          }
        }
      }
      return;
    }
    for (int i = from; i < static_cast<int>(conc.size()); ++i) {
      idx[pos] = i;
      rec(pos + 1, i + 1);
    }
  };
  rec(0, 0);
  std::sort(out.begin(), out.end());
  return out;
}

bool Compatible(const Interaction& a, const Interaction& b,
                const std::vector<Configuration>& configs) {
  for (const Configuration& c : configs) {
    if (a.CoveredBy(c) && b.CoveredBy(c)) return true;
  }
  return false;
}

bool CoversAll(const std::vector<Configuration>& sample,
               const std::vector<Interaction>& interactions) {
  for (const Interaction& i : interactions) {
    bool hit = false;
    for (const Configuration& c : sample) hit = hit || i.CoveredBy(c);
    if (!hit) return false;
  }
  return true;
}

int MaxExclusiveSet(const std::vector<Interaction>& interactions,
                    const std::vector<Configuration>& configs) {
  const int m = static_cast<int>(interactions.size());
  std::vector<Bits> adj(m, MakeBits(m));
  for (int a = 0; a < m; ++a) {
    for (int b = a + 1; b < m; ++b) {
      if (!Compatible(interactions[a], interactions[b], configs)) {
        SetBit(adj[a], b);
        SetBit(adj[b], a);
      }
    }
  }
  int best = 0;
  std::function<void(int, Bits)> expand = [&](int size, Bits cand) {
    if (Empty(cand)) {
      best = std::max(best, size);
      return;
    }
    while (!Empty(cand)) {
      if (size + Count(cand) <= best) return;
      int v = 0;
      while (!TestBit(cand, v)) ++v;
      cand[v >> 6] &= ~(uint64_t{1} << (v & 63));
      Bits next = cand;
      for (size_t w = 0; w < next.size(); ++w) next[w] &= adj[v][w];
      expand(size + 1, next);
    }
    best = std::max(best, size);
  };
  Bits all = MakeBits(m);
  for (int i = 0; i < m; ++i) SetBit(all, i);
  expand(0, all);
  return best;
}

namespace {

class CoverSearch {
 public:
  CoverSearch(const std::vector<Interaction>& interactions,
              const std::vector<Configuration>& configs, int64_t max_nodes)
      : m_(static_cast<int>(interactions.size())), max_nodes_(max_nodes) {
    for (const Configuration& c : configs) {
      Bits b = MakeBits(m_);
      for (int i = 0; i < m_; ++i) {
        if (interactions[i].CoveredBy(c)) SetBit(b, i);
      }
      sets_.push_back(std::move(b));
    }
    covering_.resize(m_);
    for (int s = 0; s < static_cast<int>(sets_.size()); ++s) {
      for (int i = 0; i < m_; ++i) {
        if (TestBit(sets_[s], i)) covering_[i].push_back(s);
      }
    }
    compat_.assign(m_, MakeBits(m_));
    for (int s = 0; s < static_cast<int>(sets_.size()); ++s) {
      for (int i = 0; i < m_; ++i) {
        if (!TestBit(sets_[s], i)) continue;
        for (size_t w = 0; w < compat_[i].size(); ++w) {
          compat_[i][w] |= sets_[s][w];
        }
      }
    }
    order_.resize(m_);
    for (int i = 0; i < m_; ++i) order_[i] = i;
    std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
      return covering_[a].size() < covering_[b].size();
    });
  }

  bool uncoverable() const {
    for (const auto& c : covering_) {
      if (c.empty()) return true;
    }
    return false;
  }

  int GreedyBound(const Bits& uncovered) const {
    std::vector<int> chosen;
    for (int e : order_) {
      if (!TestBit(uncovered, e)) continue;
      bool ok = true;
      for (int c : chosen) ok = ok && !TestBit(compat_[e], c);
      if (ok) chosen.push_back(e);
    }
    return static_cast<int>(chosen.size());
  }

  Bits All() const {
    Bits b = MakeBits(m_);
    for (int i = 0; i < m_; ++i) SetBit(b, i);
    return b;
  }

  // 1 feasible, 0 infeasible, -1 node limit.
  int Feasible(int k, const Bits& uncovered) {
    if (Empty(uncovered)) return 1;
    if (k == 0) return 0;
    if (max_nodes_ >= 0 && ++nodes_ > max_nodes_) return -1;
    if (GreedyBound(uncovered) > k) return 0;
    Bits key = uncovered;
    key.push_back(static_cast<uint64_t>(k));
    if (failed_.count(key)) return 0;
    int e = -1;
    for (int i : order_) {
      if (TestBit(uncovered, i)) {
        e = i;
        break;
      }
    }
    std::vector<Bits> options;
    for (int s : covering_[e]) {
      Bits r = sets_[s];
      for (size_t w = 0; w < r.size(); ++w) r[w] &= uncovered[w];
      options.push_back(std::move(r));
    }
    std::sort(options.begin(), options.end(), [](const Bits& a, const Bits& b) {
      return Count(a) > Count(b);
    });
    std::vector<Bits> kept;
    for (Bits& o : options) {
      bool dominated = false;
      for (const Bits& k2 : kept) dominated = dominated || SubsetOf(o, k2);
      if (!dominated) kept.push_back(std::move(o));
    }
    for (const Bits& o : kept) {
      Bits next = uncovered;
      for (size_t w = 0; w < next.size(); ++w) next[w] &= ~o[w];
      const int r = Feasible(k - 1, next);
      if (r != 0) return r;
    }
    if (failed_.size() < 2'000'000) failed_.insert(std::move(key));
    return 0;
  }

 private:
  int m_;
  int64_t max_nodes_;
  int64_t nodes_ = 0;
  std::vector<Bits> sets_;
  std::vector<std::vector<int>> covering_;
  std::vector<Bits> compat_;
  std::vector<int> order_;
  std::unordered_set<Bits, BitsHash> failed_;
};

}  // namespace

std::optional<int> MinCoverSize(const std::vector<Interaction>& interactions,
                                const std::vector<Configuration>& configs,
                                int64_t max_nodes) {
  if (interactions.empty()) return 0;
  CoverSearch search(interactions, configs, max_nodes);
  if (search.uncoverable()) return std::nullopt;
  const Bits all = search.All();
  for (int k = std::max(1, search.GreedyBound(all));; ++k) {
    const int r = search.Feasible(k, all);
    if (r < 0) return std::nullopt;
    if (r == 1) return k;
  }
}

bool CoverExists(const std::vector<Interaction>& interactions,
                 const std::vector<Configuration>& configs, int k) {
  const int n = static_cast<int>(configs.size());
  std::vector<int> idx(k);
  std::function<bool(int, int)> rec = [&](int pos, int from) {
    if (pos == k) {
      std::vector<Configuration> pick;
      for (int i : idx) pick.push_back(configs[i]);
      return CoversAll(pick, interactions);
    }
    for (int i = from; i < n; ++i) {
      idx[pos] = i;
      if (rec(pos + 1, i + 1)) return true;
    }
    return false;
  };
  return k <= n && rec(0, 0);
}

FeatureModel RandomCnf(int n, double ratio, std::mt19937_64& rng, int k) {
  const int m = static_cast<int>(std::lround(ratio * n));
  std::vector<Clause> clauses;
  std::vector<int> vars(n);
  for (int i = 0; i < n; ++i) vars[i] = i + 1;
  for (int c = 0; c < m; ++c) {
    std::shuffle(vars.begin(), vars.end(), rng);
    Clause clause;
    for (int i = 0; i < std::min(k, n); ++i) {
      clause.emplace_back(rng() & 1 ? vars[i] : -vars[i]);
    }
    clauses.push_back(clause);
  }
  return FeatureModel::AllConcrete("random", n, clauses);
}

FeatureModel RandomSatisfiableModel(std::mt19937_64& rng, int n_min, int n_max,
                                    double r_min, double r_max) {
  std::uniform_int_distribution<int> nd(n_min, n_max);
  std::uniform_real_distribution<double> rd(r_min, r_max);
  while (true) {
    FeatureModel m = RandomCnf(nd(rng), rd(rng), rng);
    if (!ValidConfigurations(m).empty()) return m;
  }
}

}  // namespace oracle
