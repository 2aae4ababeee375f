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

#ifndef SAMPLNS_MAX_CLIQUE_H_
#define SAMPLNS_MAX_CLIQUE_H_

#include <atomic>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "samplns/sat.h"

namespace samplns {

// Limits for anytime searches. Node counts are deterministic; deadlines are
// not.
struct WorkBudget {
  int64_t max_nodes = -1;
  std::optional<Clock::time_point> deadline;
  const std::atomic<bool>* interrupt = nullptr;
};

// Undirected graph on vertices 0..n-1 stored as adjacency bitsets.
class BitGraph {
 public:
  explicit BitGraph(int n);

  int size() const { return n_; }
  void AddEdge(int a, int b);
  bool HasEdge(int a, int b) const {
    return (adj_[a][b >> 6] >> (b & 63)) & 1u;
  }
  const std::vector<uint64_t>& Neighbors(int v) const { return adj_[v]; }
  int Degree(int v) const;

 private:
  int n_;
  std::vector<std::vector<uint64_t>> adj_;
};

struct CliqueResult {
  std::vector<int> vertices;  // sorted
  bool optimal = false;
  int64_t nodes = 0;
};

// Maximum clique by branch and bound with greedy-coloring bounds. `initial`,
// when it is a clique, seeds the incumbent. Returns the best clique found;
// `optimal` is set iff the search finished within budget.
CliqueResult MaxClique(const BitGraph& graph, std::span<const int> initial = {},
                       const WorkBudget& budget = {});

}  // namespace samplns

#endif  // SAMPLNS_MAX_CLIQUE_H_
