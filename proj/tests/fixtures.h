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


#ifndef SAMPLNS_TESTS_FIXTURES_H_
#define SAMPLNS_TESTS_FIXTURES_H_

#include <algorithm>
#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

#include "samplns/interactions.h"
#include "samplns/model.h"

namespace samplns {

inline void PrintTo(const Interaction& i, std::ostream* os) {
  *os << "{" << i.ToString() << "}";
}

inline void PrintTo(const Configuration& c, std::ostream* os) {
  *os << "[" << c.ToString() << "]";
}

}  // namespace samplns

namespace fixtures {

using samplns::Clause;
using samplns::Configuration;
using samplns::FeatureModel;
using samplns::Interaction;
using samplns::Literal;

inline Clause C(std::initializer_list<int> lits) {
  Clause c;
  for (int l : lits) c.emplace_back(l);
  return c;
}

inline Configuration Cfg(std::initializer_list<int> lits) {
  std::vector<Literal> v;
  for (int l : lits) v.emplace_back(l);
  return Configuration::FromLiterals(static_cast<int>(v.size()), v);
}

// Sorted, like MutexSet members.
inline std::vector<Interaction> Set(
    std::initializer_list<std::initializer_list<int32_t>> list) {
  std::vector<Interaction> out;
  for (auto i : list) out.emplace_back(i);
  std::sort(out.begin(), out.end());
  return out;
}

// Two clauses {1,2}, {3,4}.
inline FeatureModel Toy4() {
  return FeatureModel::AllConcrete("toy4", 4, {C({1, 2}), C({3, 4})});
}

// Single clause {-1,-3}.
inline FeatureModel Lb3() {
  return FeatureModel::AllConcrete("lb3", 3, {C({-1, -3})});
}

inline FeatureModel Free(int n) {
  return FeatureModel::AllConcrete("free" + std::to_string(n), n, {});
}

// Initial six-configuration sample of toy4.
inline std::vector<Configuration> Toy4Initial() {
  return {Cfg({1, 2, -3, 4}),  Cfg({1, -2, 3, -4}), Cfg({1, -2, -3, 4}),
          Cfg({-1, 2, 3, 4}),  Cfg({-1, 2, 3, -4}), Cfg({-1, 2, -3, 4})};
}

// An optimal five-configuration sample of toy4.
inline std::vector<Configuration> Toy4Optimal() {
  return {Cfg({1, -2, 3, -4}), Cfg({1, -2, -3, 4}), Cfg({-1, 2, -3, 4}),
          Cfg({1, 2, 3, 4}),   Cfg({-1, 2, 3, -4})};
}

}  // namespace fixtures

#endif  // SAMPLNS_TESTS_FIXTURES_H_
