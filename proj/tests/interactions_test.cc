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


#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "fixtures.h"
#include "oracle.h"
#include "samplns/interactions.h"

namespace samplns {
namespace {

using fixtures::Cfg;
using fixtures::Set;

std::vector<Interaction> Sorted(std::vector<Interaction> v) {
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<Interaction> ToInteractions(const std::vector<InteractionId>& ids,
                                        const InteractionUniverse& u) {
  std::vector<Interaction> out;
  for (InteractionId id : ids) out.push_back(u[id]);
  return Sorted(out);
}

TEST(Interaction, CanonicalForm) {
  Interaction a{3, -1};
  EXPECT_EQ(a[0], Literal(-1));
  EXPECT_EQ(a.ToString(), "-1 3");
  EXPECT_EQ(ParseInteraction(" 3 -1 "), a);
  EXPECT_THROW((Interaction{1, -1}), ModelError);
  EXPECT_THROW(ParseInteraction("1 x"), ModelError);
  EXPECT_TRUE(a.CoveredBy(Cfg({-1, 2, 3})));
  EXPECT_FALSE(a.CoveredBy(Cfg({1, 2, 3})));
}

TEST(EnumerateUniverse, Toy4Has22Valid) {
  InteractionUniverse u = EnumerateUniverse(fixtures::Toy4(), 2);
  EXPECT_EQ(u.size(), 22);
  EXPECT_EQ(Sorted(u.invalid()), Set({{-1, -2}, {-3, -4}}));
  const auto listed = Set({{3, 4},   {1, -3},  {2, -4},  {1, 3},   {-2, 4},
                           {-1, 4},  {2, 4},   {1, 2},   {1, -4},  {-2, -3},
                           {-1, -3}, {-2, 3},  {-1, 3},  {3, -4},  {-3, 4},
                           {2, -3},  {1, -2},  {1, 4},   {2, 3},   {-1, -4},
                           {-2, -4}, {-1, 2}});
  EXPECT_EQ(Sorted(u.valid()), Sorted(listed));
}

TEST(EnumerateUniverse, Unconstrained) {
  InteractionUniverse u = EnumerateUniverse(fixtures::Free(3), 2);
  EXPECT_EQ(u.size(), 12);
  EXPECT_TRUE(u.invalid().empty());
}

TEST(EnumerateUniverse, SingleInvalidPair) {
  InteractionUniverse u = EnumerateUniverse(fixtures::Lb3(), 2);
  EXPECT_EQ(u.size(), 11);
  EXPECT_EQ(u.invalid(), Set({{1, 3}}));
  EXPECT_FALSE(u.PairValid(Literal(1), Literal(3)));
  EXPECT_FALSE(u.PairValid(Literal(1), Literal(-1)));
  EXPECT_TRUE(u.PairValid(Literal(-1), Literal(3)));
}

TEST(EnumerateUniverse, ConcreteSubset) {
  FeatureModel m("m", 3, {}, {1, 2});
  InteractionUniverse u = EnumerateUniverse(m, 2);
  EXPECT_EQ(u.size(), 4);
  for (const Interaction& i : u.valid()) EXPECT_FALSE(i.Contains(Literal(3)));
}

TEST(EnumerateUniverse, Unsatisfiable) {
  FeatureModel m = FeatureModel::AllConcrete(
      "m", 2, {fixtures::C({1}), fixtures::C({-1})});
  EXPECT_THROW(EnumerateUniverse(m, 2), UnsatisfiableModel);
  EXPECT_THROW(EnumerateUniverse(fixtures::Toy4(), 0), ModelError);
}

TEST(EnumerateUniverse, SeedSampleDoesNotChangeResult) {
  auto seed = fixtures::Toy4Initial();
  InteractionUniverse a = EnumerateUniverse(fixtures::Toy4(), 2, &seed);
  InteractionUniverse b = EnumerateUniverse(fixtures::Toy4(), 2);
  EXPECT_EQ(a.valid(), b.valid());
}

TEST(EnumerateUniverse, AgreesWithEnumerationOnRandomModels) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 120; ++trial) {
    FeatureModel m = oracle::RandomSatisfiableModel(rng, 3, 10, 0.5, 3.0);
    auto configs = oracle::ValidConfigurations(m);
    for (int t : {1, 2, 3}) {
      InteractionUniverse u = EnumerateUniverse(m, t, nullptr, trial);
      EXPECT_EQ(Sorted(u.valid()), oracle::ValidInteractions(m, t, configs))
          << ToDimacs(m) << " t=" << t;
      for (InteractionId id = 0; id < u.size(); ++id) {
        EXPECT_EQ(u.IdOf(u[id]), id);
      }
      for (const Interaction& i : u.invalid()) EXPECT_EQ(u.IdOf(i), -1);
    }
  }
}

TEST(Coverage, Examples) {
  InteractionUniverse toy = EnumerateUniverse(fixtures::Toy4(), 2);
  auto initial = fixtures::Toy4Initial();
  EXPECT_EQ(CoveredIds(initial, toy).size(), 22u);
  EXPECT_TRUE(CoveredIds(Sample{}, toy).empty());
  InteractionUniverse free3 = EnumerateUniverse(fixtures::Free(3), 2);
  Sample one{Cfg({1, 2, 3})};
  EXPECT_EQ(ToInteractions(CoveredIds(one, free3), free3),
            Set({{1, 2}, {1, 3}, {2, 3}}));
}

TEST(MissingAfterRemoval, Examples) {
  InteractionUniverse u = EnumerateUniverse(fixtures::Toy4(), 2);
  auto s = fixtures::Toy4Initial();
  std::vector<int> removed{0, 3, 4};
  EXPECT_EQ(ToInteractions(MissingAfterRemoval(s, removed, u), u),
            Sorted(Set({{1, 2}, {2, 3}, {3, 4}, {2, -4}, {-1, 3}, {-1, -4}})));
  EXPECT_TRUE(MissingAfterRemoval(s, {}, u).empty());
  std::vector<int> all{0, 1, 2, 3, 4, 5};
  EXPECT_EQ(MissingAfterRemoval(s, all, u).size(), 22u);
}

TEST(Coverage, CountsAgreeWithBruteForce) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    FeatureModel m = oracle::RandomSatisfiableModel(rng, 4, 9, 0.5, 2.0);
    auto configs = oracle::ValidConfigurations(m);
    for (int t : {2, 3}) {
      InteractionUniverse u = EnumerateUniverse(m, t);
      Sample s;
      for (int i = 0; i < 4; ++i) s.push_back(configs[rng() % configs.size()]);
      std::vector<int> counts = CoverageCounts(s, u);
      for (InteractionId id = 0; id < u.size(); ++id) {
        int expected = 0;
        for (const Configuration& c : s) expected += u[id].CoveredBy(c);
        EXPECT_EQ(counts[id], expected);
      }
      std::vector<int> removed{1, 3};
      std::vector<InteractionId> missing = MissingAfterRemoval(s, removed, u);
      for (InteractionId id = 0; id < u.size(); ++id) {
        const bool kept = u[id].CoveredBy(s[0]) || u[id].CoveredBy(s[2]);
        const bool lost = counts[id] > 0 && !kept;
        EXPECT_EQ(std::count(missing.begin(), missing.end(), id) == 1, lost);
      }
    }
  }
}

}  // namespace
}  // namespace samplns
