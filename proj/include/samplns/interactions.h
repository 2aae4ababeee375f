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

#ifndef SAMPLNS_INTERACTIONS_H_
#define SAMPLNS_INTERACTIONS_H_

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "samplns/model.h"

namespace samplns {

inline constexpr int kMaxStrength = 6;

// Canonical set of t literals on distinct features, sorted by feature.
class Interaction {
 public:
  Interaction() = default;
  // Sorts the literals; throws ModelError on repeated features or t out of
  // range.
  explicit Interaction(std::span<const Literal> literals);
  Interaction(std::initializer_list<int32_t> literals);

  int size() const { return size_; }
  Literal operator[](int i) const { return literals_[i]; }
  const Literal* begin() const { return literals_.data(); }
  const Literal* end() const { return literals_.data() + size_; }
  bool Contains(Literal l) const;
  bool CoveredBy(const Configuration& c) const;

  std::string ToString() const;  // e.g. "-1 3"

  bool operator==(const Interaction& o) const;
  bool operator<(const Interaction& o) const;

 private:
  std::array<Literal, kMaxStrength> literals_{};
  uint8_t size_ = 0;
};

struct InteractionHash {
  size_t operator()(const Interaction& i) const;
};

Interaction ParseInteraction(std::string_view line);

using Sample = std::vector<Configuration>;

// Identifier of a valid interaction within its universe: 0..|valid|-1.
using InteractionId = int32_t;

// Exact partition of all candidate t-wise interactions over the concrete
// features into valid and invalid ones. Immutable once built.
//
// Candidates are addressed by a dense index: colex rank of the sorted
// concrete-feature combination times 2^t plus a polarity code (bit i set when
// the i-th literal is positive).
class InteractionUniverse {
 public:
  int strength() const { return t_; }
  const FeatureModel& model() const { return model_; }
  const std::vector<int>& concrete() const { return concrete_; }

  const std::vector<Interaction>& valid() const { return valid_; }
  const std::vector<Interaction>& invalid() const { return invalid_; }
  int size() const { return static_cast<int>(valid_.size()); }
  const Interaction& operator[](InteractionId id) const { return valid_[id]; }

  // -1 when `i` is not a valid interaction of this universe.
  InteractionId IdOf(const Interaction& i) const;
  bool IsValid(const Interaction& i) const { return IdOf(i) >= 0; }

  // Pairwise validity {p, q}. Complementary literals are invalid. Pairs that
  // touch a non-concrete feature are reported valid (nothing is known).
  bool PairValid(Literal p, Literal q) const;

  // Calls `f(id)` for every valid interaction contained in `config`.
  template <typename F>
  void ForEachCovered(const Configuration& config, F&& f) const;
  std::vector<InteractionId> Covered(const Configuration& config) const;

 private:
  friend class UniverseBuilder;

  int64_t IndexOf(const Interaction& i) const;  // -1 if not a candidate
  int64_t PairIndex(int rank_a, int rank_b, bool pos_a, bool pos_b) const;

  int t_ = 2;
  FeatureModel model_;
  std::vector<int> concrete_;
  std::vector<int> rank_of_;  // feature -> concrete rank, -1 if abstract
  std::vector<std::vector<int64_t>> binom_;
  std::vector<InteractionId> id_by_index_;
  std::vector<uint8_t> pair_valid_;  // dense over pair candidates
  std::vector<Interaction> valid_;
  std::vector<Interaction> invalid_;
};

template <typename F>
void InteractionUniverse::ForEachCovered(const Configuration& config,
                                         F&& f) const {
  const int c = static_cast<int>(concrete_.size());
  if (t_ == 2) {
    for (int b = 1; b < c; ++b) {
      const bool vb = config.value(concrete_[b]);
      const int64_t base = binom_[b][2];
      for (int a = 0; a < b; ++a) {
        const int code = (config.value(concrete_[a]) ? 1 : 0) | (vb ? 2 : 0);
        InteractionId id = id_by_index_[(base + a) * 4 + code];
        if (id >= 0) f(id);
      }
    }
    return;
  }
  if (t_ > c) return;
  std::array<int, kMaxStrength> idx{};
  for (int i = 0; i < t_; ++i) idx[i] = i;
  for (;;) {
    int64_t rank = 0;
    int code = 0;
    for (int i = 0; i < t_; ++i) {
      rank += binom_[idx[i]][i + 1];
      if (config.value(concrete_[idx[i]])) code |= 1 << i;
    }
    InteractionId id = id_by_index_[(rank << t_) + code];
    if (id >= 0) f(id);
    int i = t_ - 1;
    while (i >= 0 && idx[i] == c - t_ + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < t_; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// Classifies every candidate interaction. Configurations of `seed_sample` and
// every SAT witness found along the way mark their interactions valid without
// further oracle calls. Throws ModelError if the model is unsatisfiable or t
// is outside [1, kMaxStrength].
InteractionUniverse EnumerateUniverse(const FeatureModel& model, int t,
                                      const Sample* seed_sample = nullptr,
                                      uint64_t seed = 0);

// Membership bitmap over universe ids.
using CoverageSet = std::vector<bool>;

CoverageSet Coverage(std::span<const Configuration> sample,
                     const InteractionUniverse& universe);
std::vector<InteractionId> CoveredIds(std::span<const Configuration> sample,
                                      const InteractionUniverse& universe);

// Interactions covered by `sample` but not by `sample` minus the configurations
// at `removed` (indices into `sample`).
std::vector<InteractionId> MissingAfterRemoval(
    std::span<const Configuration> sample, std::span<const int> removed,
    const InteractionUniverse& universe);

// Per-id count of configurations covering each interaction.
std::vector<int> CoverageCounts(std::span<const Configuration> sample,
                                const InteractionUniverse& universe);

// One interaction per line, sorted.
std::string FormatInteractions(std::vector<Interaction> interactions);

}  // namespace samplns

#endif  // SAMPLNS_INTERACTIONS_H_
