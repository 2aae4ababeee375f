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

#include "samplns/max_clique.h"

#include <algorithm>
#include <bit>
#include <numeric>

namespace samplns {

BitGraph::BitGraph(int n)
    : n_(n), adj_(n, std::vector<uint64_t>((n + 63) / 64, 0)) {}

void BitGraph::AddEdge(int a, int b) {
  if (a == b) return;
  adj_[a][b >> 6] |= uint64_t{1} << (b & 63);
  adj_[b][a >> 6] |= uint64_t{1} << (a & 63);
}

int BitGraph::Degree(int v) const {
  int d = 0;
  for (uint64_t w : adj_[v]) d += std::popcount(w);
  return d;
}

namespace {

using Bits = std::vector<uint64_t>;

bool Empty(const Bits& b) {
  return std::all_of(b.begin(), b.end(), [](uint64_t w) { return w == 0; });
}

// Branch and bound over a graph renumbered so that vertex i is the i-th in a
// degree-descending order; colors are assigned in that order.
class CliqueSearch {
 public:
  CliqueSearch(const BitGraph& g, const WorkBudget& budget)
      : n_(g.size()), words_((n_ + 63) / 64), budget_(budget) {
    order_.resize(n_);
    std::iota(order_.begin(), order_.end(), 0);
    std::vector<int> degree(n_);
    for (int v = 0; v < n_; ++v) degree[v] = g.Degree(v);
    std::stable_sort(order_.begin(), order_.end(),
                     [&](int a, int b) { return degree[a] > degree[b]; });
    std::vector<int> pos(n_);
    for (int i = 0; i < n_; ++i) pos[order_[i]] = i;
    adj_.assign(n_, Bits(words_, 0));
    for (int i = 0; i < n_; ++i) {
      const Bits& nb = g.Neighbors(order_[i]);
      for (int w = 0; w < words_; ++w) {
        uint64_t bits = nb[w];
        while (bits) {
          int u = w * 64 + std::countr_zero(bits);
          bits &= bits - 1;
          int j = pos[u];
          adj_[i][j >> 6] |= uint64_t{1} << (j & 63);
        }
      }
    }
    pos_ = std::move(pos);
  }

  void Seed(std::span<const int> clique) {
    best_.clear();
    for (int v : clique) best_.push_back(pos_[v]);
  }

  CliqueResult Run() {
    Bits all(words_, 0);
    for (int i = 0; i < n_; ++i) all[i >> 6] |= uint64_t{1} << (i & 63);
    current_.clear();
    aborted_ = false;
    if (n_ > 0) Expand(all);
    CliqueResult r;
    for (int v : best_) r.vertices.push_back(order_[v]);
    std::sort(r.vertices.begin(), r.vertices.end());
    r.optimal = !aborted_;
    r.nodes = nodes_;
    return r;
  }

 private:
  bool OutOfBudget() {
    if (budget_.max_nodes >= 0 && nodes_ >= budget_.max_nodes) return true;
    if ((nodes_ & 255) == 0) {
      if (budget_.interrupt &&
          budget_.interrupt->load(std::memory_order_relaxed)) {
        return true;
      }
      if (budget_.deadline && Clock::now() >= *budget_.deadline) return true;
    }
    return false;
  }

  void Expand(Bits p) {
    if (aborted_) return;
    ++nodes_;
    if (OutOfBudget()) {
      aborted_ = true;
      return;
    }
    // Greedy sequential coloring; only vertices whose color can beat the
    // incumbent are branched on.
    std::vector<int> verts;
    std::vector<int> colors;
    const int kmin =
        static_cast<int>(best_.size()) - static_cast<int>(current_.size()) + 1;
    Bits uncolored = p;
    Bits q(words_);
    int color = 1;
    while (!Empty(uncolored)) {
      q = uncolored;
      for (int w = 0; w < words_; ++w) {
        while (q[w]) {
          int v = w * 64 + std::countr_zero(q[w]);
          uncolored[w] &= ~(uint64_t{1} << (v & 63));
          q[w] &= ~(uint64_t{1} << (v & 63));
          const Bits& nv = adj_[v];
          for (int x = w; x < words_; ++x) q[x] &= ~nv[x];
          if (color >= kmin) {
            verts.push_back(v);
            colors.push_back(color);
          }
        }
      }
      ++color;
    }
    for (int i = static_cast<int>(verts.size()) - 1; i >= 0; --i) {
      if (current_.size() + colors[i] <= best_.size()) return;
      const int v = verts[i];
      current_.push_back(v);
      Bits np(words_);
      bool any = false;
      for (int w = 0; w < words_; ++w) {
        np[w] = p[w] & adj_[v][w];
        any |= np[w] != 0;
      }
      if (!any) {
        if (current_.size() > best_.size()) best_ = current_;
      } else {
        Expand(std::move(np));
      }
      current_.pop_back();
      if (aborted_) return;
      p[v >> 6] &= ~(uint64_t{1} << (v & 63));
    }
  }

  int n_;
  int words_;
  WorkBudget budget_;
  std::vector<int> order_;
  std::vector<int> pos_;
  std::vector<Bits> adj_;
  std::vector<int> current_;
  std::vector<int> best_;
  int64_t nodes_ = 0;
  bool aborted_ = false;
};

bool IsClique(const BitGraph& g, std::span<const int> vs) {
  for (size_t a = 0; a < vs.size(); ++a) {
    if (vs[a] < 0 || vs[a] >= g.size()) return false;
    for (size_t b = a + 1; b < vs.size(); ++b) {
      if (vs[a] == vs[b] || !g.HasEdge(vs[a], vs[b])) return false;
    }
  }
  return true;
}

}  // namespace

CliqueResult MaxClique(const BitGraph& graph, std::span<const int> initial,
                       const WorkBudget& budget) {
  CliqueSearch search(graph, budget);
  if (!initial.empty() && IsClique(graph, initial)) search.Seed(initial);
  return search.Run();
}

}  // namespace samplns
