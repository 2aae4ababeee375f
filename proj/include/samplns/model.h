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

#ifndef SAMPLNS_MODEL_H_
#define SAMPLNS_MODEL_H_

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace samplns {

// Raised for malformed input files and models that violate an invariant.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a model (or a simplification of it) has no valid configuration.
class UnsatisfiableModel : public ModelError {
 public:
  using ModelError::ModelError;
};

// A signed, nonzero feature literal in DIMACS convention: |value| is the
// 1-based feature index, the sign is the polarity.
class Literal {
 public:
  constexpr Literal() = default;
  constexpr explicit Literal(int32_t value) : value_(value) {}

  constexpr int32_t value() const { return value_; }
  constexpr int32_t feature() const { return value_ < 0 ? -value_ : value_; }
  constexpr bool positive() const { return value_ > 0; }
  constexpr Literal operator-() const { return Literal(-value_); }

  constexpr bool operator==(const Literal&) const = default;
  // Orders by feature first, then negative before positive.
  constexpr std::strong_ordering operator<=>(const Literal& o) const {
    if (auto c = feature() <=> o.feature(); c != 0) return c;
    return value_ <=> o.value_;
  }

 private:
  int32_t value_ = 0;
};

using Clause = std::vector<Literal>;

// A complete assignment of all features of a model.
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(int n_features) : values_(n_features, false) {}
  explicit Configuration(std::vector<bool> values)
      : values_(std::move(values)) {}

  // Builds a configuration from n signed literals, one per feature.
  static Configuration FromLiterals(int n_features,
                                    std::span<const Literal> literals);

  int size() const { return static_cast<int>(values_.size()); }
  bool value(int feature) const { return values_[feature - 1]; }
  void set(int feature, bool v) { values_[feature - 1] = v; }
  bool satisfies(Literal l) const { return value(l.feature()) == l.positive(); }
  Literal literal(int feature) const {
    return Literal(value(feature) ? feature : -feature);
  }
  const std::vector<bool>& values() const { return values_; }

  // DIMACS-style: n signed literals sorted by feature.
  std::string ToString() const;

  bool operator==(const Configuration&) const = default;
  auto operator<=>(const Configuration& o) const {
    return values_ <=> o.values_;
  }

 private:
  std::vector<bool> values_;
};

// Assignment of a subset of features. Entries are kept sorted by feature.
class PartialAssignment {
 public:
  PartialAssignment() = default;
  // Throws ModelError when the literals assign one feature both ways.
  explicit PartialAssignment(std::span<const Literal> literals);

  bool Assign(Literal l);  // false on conflict; leaves state unchanged.
  std::optional<bool> value(int feature) const;
  bool Consistent(Literal l) const;
  const std::vector<Literal>& literals() const { return literals_; }
  bool empty() const { return literals_.empty(); }

 private:
  std::vector<Literal> literals_;
};

// A feature model (F, D): n Boolean features, CNF dependencies, and the
// subset of concrete features whose interactions must be covered.
class FeatureModel {
 public:
  FeatureModel() = default;
  // Normalizes clauses (sorted, deduplicated, tautologies dropped) and checks
  // index ranges. Throws ModelError on violations and on empty clauses.
  FeatureModel(std::string name, int n_features, std::vector<Clause> clauses,
               std::vector<int> concrete_features);

  // Convenience constructor: every feature concrete.
  static FeatureModel AllConcrete(std::string name, int n_features,
                                  std::vector<Clause> clauses);

  const std::string& name() const { return name_; }
  int n_features() const { return n_features_; }
  const std::vector<Clause>& clauses() const { return clauses_; }
  const std::vector<int>& concrete_features() const { return concrete_; }
  bool is_concrete(int feature) const;

  // 64-bit FNV-1a over the canonical content (n, clauses, concrete set) as
  // 16 lowercase hex digits. Independent of the model name and file format.
  std::string ContentHash() const;

 private:
  std::string name_;
  int n_features_ = 0;
  std::vector<Clause> clauses_;
  std::vector<int> concrete_;
  std::vector<bool> concrete_mask_;
};

// Normalizes a clause in place; returns false if it is a tautology.
bool NormalizeClause(Clause& clause);

// DIMACS CNF. Clause count mismatches are reported through `warnings` (if
// non-null) and otherwise accepted.
FeatureModel ParseDimacs(std::string_view text, std::string name = "",
                         std::vector<std::string>* warnings = nullptr);
std::string ToDimacs(const FeatureModel& model);

// JSON document {name, n_features, clauses, concrete_features}.
FeatureModel ParseModelJson(std::string_view text);
std::string ToModelJson(const FeatureModel& model);

// Reads a model from disk; `.json` files use the structured format, anything
// else is parsed as DIMACS. The model name defaults to the file stem.
FeatureModel LoadModelFile(const std::string& path,
                           std::vector<std::string>* warnings = nullptr);

// True iff every clause has a literal satisfied by `config`. Throws
// ModelError if `config` does not assign exactly n features.
bool IsValidConfiguration(const FeatureModel& model,
                          const Configuration& config);

// Result of clause-level preprocessing: an equivalent reduced model over a
// compacted feature space, plus the data needed to map its configurations
// back to the original features.
struct SimplifiedModel {
  FeatureModel reduced;
  // For each original feature f (index f-1): the literal of `reduced` it
  // equals, or 0 when f is fixed (see `fixed_value`).
  std::vector<int32_t> mapping;
  std::vector<bool> fixed_value;

  Configuration Reconstruct(const Configuration& reduced_config) const;
};

// Unit propagation plus merging of features linked by a bidirectional
// implication (binary clauses {-a,b} and {a,-b}). Throws UnsatisfiableModel
// when propagation derives a conflict. Concrete features of the reduced model
// are the representatives of original concrete features that are not fixed.
SimplifiedModel Simplify(const FeatureModel& model);

}  // namespace samplns

#endif  // SAMPLNS_MODEL_H_
