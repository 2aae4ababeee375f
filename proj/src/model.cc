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

#include "samplns/model.h"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace samplns {

Configuration Configuration::FromLiterals(int n_features,
                                          std::span<const Literal> literals) {
  if (static_cast<int>(literals.size()) != n_features) {
    throw ModelError("configuration has " + std::to_string(literals.size()) +
                     " literals, expected " + std::to_string(n_features));
  }
  Configuration c(n_features);
  std::vector<bool> seen(n_features, false);
  for (Literal l : literals) {
    if (l.value() == 0 || l.feature() > n_features) {
      throw ModelError("configuration literal out of range: " +
                       std::to_string(l.value()));
    }
    if (seen[l.feature() - 1]) {
      throw ModelError("feature assigned twice in configuration: " +
                       std::to_string(l.feature()));
    }
    seen[l.feature() - 1] = true;
    c.set(l.feature(), l.positive());
  }
  return c;
}

std::string Configuration::ToString() const {
  std::string out;
  for (int f = 1; f <= size(); ++f) {
    if (f > 1) out += ' ';
    out += std::to_string(literal(f).value());
  }
  return out;
}

PartialAssignment::PartialAssignment(std::span<const Literal> literals) {
  for (Literal l : literals) {
    if (!Assign(l)) {
      throw ModelError("inconsistent partial assignment on feature " +
                       std::to_string(l.feature()));
    }
  }
}

bool PartialAssignment::Assign(Literal l) {
  auto it = std::lower_bound(
      literals_.begin(), literals_.end(), l,
      [](Literal a, Literal b) { return a.feature() < b.feature(); });
  if (it != literals_.end() && it->feature() == l.feature()) return *it == l;
  literals_.insert(it, l);
  return true;
}

std::optional<bool> PartialAssignment::value(int feature) const {
  auto it = std::lower_bound(
      literals_.begin(), literals_.end(), feature,
      [](Literal a, int f) { return a.feature() < f; });
  if (it == literals_.end() || it->feature() != feature) return std::nullopt;
  return it->positive();
}

bool PartialAssignment::Consistent(Literal l) const {
  auto v = value(l.feature());
  return !v || *v == l.positive();
}

bool NormalizeClause(Clause& clause) {
  std::sort(clause.begin(), clause.end());
  clause.erase(std::unique(clause.begin(), clause.end()), clause.end());
  for (size_t i = 1; i < clause.size(); ++i) {
    if (clause[i].feature() == clause[i - 1].feature()) return false;
  }
  return true;
}

FeatureModel::FeatureModel(std::string name, int n_features,
                           std::vector<Clause> clauses,
                           std::vector<int> concrete_features)
    : name_(std::move(name)), n_features_(n_features) {
  if (n_features <= 0) throw ModelError("model needs at least one feature");
  for (Clause& c : clauses) {
    for (Literal l : c) {
      if (l.value() == 0 || l.feature() > n_features) {
        throw ModelError("literal out of range: " + std::to_string(l.value()));
      }
    }
    if (c.empty()) throw UnsatisfiableModel("model contains an empty clause");
    if (NormalizeClause(c)) clauses_.push_back(std::move(c));
  }
  std::sort(concrete_features.begin(), concrete_features.end());
  concrete_features.erase(
      std::unique(concrete_features.begin(), concrete_features.end()),
      concrete_features.end());
  if (concrete_features.empty()) {
    throw ModelError("model declares no concrete features");
  }
  concrete_mask_.assign(n_features, false);
  for (int f : concrete_features) {
    if (f < 1 || f > n_features) {
      throw ModelError("concrete feature out of range: " + std::to_string(f));
    }
    concrete_mask_[f - 1] = true;
  }
  concrete_ = std::move(concrete_features);
}

FeatureModel FeatureModel::AllConcrete(std::string name, int n_features,
                                       std::vector<Clause> clauses) {
  std::vector<int> concrete(std::max(n_features, 0));
  std::iota(concrete.begin(), concrete.end(), 1);
  return FeatureModel(std::move(name), n_features, std::move(clauses),
                      std::move(concrete));
}

bool FeatureModel::is_concrete(int feature) const {
  return feature >= 1 && feature <= n_features_ && concrete_mask_[feature - 1];
}

std::string FeatureModel::ContentHash() const {
  uint64_t h = 14695981039346656037ull;
  auto mix = [&h](int64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= static_cast<uint8_t>(v >> (8 * i));
      h *= 1099511628211ull;
    }
  };
  std::vector<Clause> sorted = clauses_;
  std::sort(sorted.begin(), sorted.end());
  mix(n_features_);
  for (const Clause& c : sorted) {
    for (Literal l : c) mix(l.value());
    mix(0);
  }
  mix(-1);
  for (int f : concrete_) mix(f);
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

bool ParseInt(std::string_view token, int64_t& out) {
  auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size();
}

}  // namespace

FeatureModel ParseDimacs(std::string_view text, std::string name,
                         std::vector<std::string>* warnings) {
  std::istringstream in{std::string(text)};
  std::string line;
  int64_t n = -1, m = -1;
  std::vector<Clause> clauses;
  Clause current;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream tokens(line);
    std::string tok;
    if (!(tokens >> tok)) continue;
    if (tok == "c" || tok[0] == 'c') continue;
    if (tok == "%") break;  // SATLIB trailer
    if (tok == "p") {
      std::string fmt, ns, ms, extra;
      if (n >= 0) throw ModelError("duplicate DIMACS header");
      if (!(tokens >> fmt >> ns >> ms) || fmt != "cnf" || !ParseInt(ns, n) ||
          !ParseInt(ms, m) || n <= 0 || m < 0 || (tokens >> extra)) {
        throw ModelError("malformed DIMACS header at line " +
                         std::to_string(line_no) + ": '" + line + "'");
      }
      continue;
    }
    if (n < 0) {
      throw ModelError("clause data before DIMACS header at line " +
                       std::to_string(line_no));
    }
    do {
      int64_t v;
      if (!ParseInt(tok, v)) {
        throw ModelError("invalid token '" + tok + "' at line " +
                         std::to_string(line_no));
      }
      if (v == 0) {
        if (current.empty()) {
          throw UnsatisfiableModel("empty clause at line " +
                                   std::to_string(line_no));
        }
        clauses.push_back(std::move(current));
        current.clear();
      } else {
        if (v > n || v < -n) {
          throw ModelError("literal " + std::to_string(v) +
                           " out of range at line " + std::to_string(line_no));
        }
        current.emplace_back(static_cast<int32_t>(v));
      }
    } while (tokens >> tok);
  }
  if (n < 0) throw ModelError("missing DIMACS header");
  if (!current.empty()) clauses.push_back(std::move(current));
  if (static_cast<int64_t>(clauses.size()) != m && warnings != nullptr) {
    warnings->push_back("header declares " + std::to_string(m) +
                        " clauses, found " + std::to_string(clauses.size()));
  }
  return FeatureModel::AllConcrete(std::move(name), static_cast<int>(n),
                                   std::move(clauses));
}

std::string ToDimacs(const FeatureModel& model) {
  std::string out;
  if (!model.name().empty()) out += "c model " + model.name() + "\n";
  out += "p cnf " + std::to_string(model.n_features()) + " " +
         std::to_string(model.clauses().size()) + "\n";
  for (const Clause& c : model.clauses()) {
    for (Literal l : c) out += std::to_string(l.value()) + " ";
    out += "0\n";
  }
  return out;
}

FeatureModel ParseModelJson(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ModelError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (!doc.is_object()) throw ModelError("model document must be an object");
    for (const char* key : {"n_features", "clauses", "concrete_features"}) {
      if (!doc.contains(key)) {
        throw ModelError(std::string("model document lacks '") + key + "'");
      }
    }
    std::string name = doc.value("name", std::string());
    int n = doc.at("n_features").get<int>();
    std::vector<Clause> clauses;
    for (const auto& jc : doc.at("clauses")) {
      Clause c;
      for (const auto& jl : jc) c.emplace_back(jl.get<int32_t>());
      clauses.push_back(std::move(c));
    }
    auto concrete = doc.at("concrete_features").get<std::vector<int>>();
    return FeatureModel(std::move(name), n, std::move(clauses),
                        std::move(concrete));
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("model document schema violation: ") +
                     e.what());
  }
}

std::string ToModelJson(const FeatureModel& model) {
  nlohmann::json doc;
  doc["name"] = model.name();
  doc["n_features"] = model.n_features();
  auto clauses = nlohmann::json::array();
  for (const Clause& c : model.clauses()) {
    auto jc = nlohmann::json::array();
    for (Literal l : c) jc.push_back(l.value());
    clauses.push_back(std::move(jc));
  }
  doc["clauses"] = std::move(clauses);
  doc["concrete_features"] = model.concrete_features();
  return doc.dump();
}

FeatureModel LoadModelFile(const std::string& path,
                           std::vector<std::string>* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in || std::filesystem::is_directory(path)) {
    throw ModelError("cannot read model file: " + path);
  }
  std::stringstream buf;
  buf << in.rdbuf();
  std::filesystem::path p(path);
  if (p.extension() == ".json") {
    FeatureModel m = ParseModelJson(buf.str());
    if (m.name().empty()) {
      return FeatureModel(p.stem().string(), m.n_features(), m.clauses(),
                          m.concrete_features());
    }
    return m;
  }
  return ParseDimacs(buf.str(), p.stem().string(), warnings);
}

bool IsValidConfiguration(const FeatureModel& model,
                          const Configuration& config) {
  if (config.size() != model.n_features()) {
    throw ModelError("configuration assigns " + std::to_string(config.size()) +
                     " features, model has " +
                     std::to_string(model.n_features()));
  }
  for (const Clause& c : model.clauses()) {
    bool sat = std::any_of(c.begin(), c.end(),
                           [&](Literal l) { return config.satisfies(l); });
    if (!sat) return false;
  }
  return true;
}

Configuration SimplifiedModel::Reconstruct(
    const Configuration& reduced_config) const {
  Configuration out(static_cast<int>(mapping.size()));
  for (size_t f = 0; f < mapping.size(); ++f) {
    int32_t m = mapping[f];
    bool v = m == 0 ? fixed_value[f]
                    : reduced_config.value(m < 0 ? -m : m) == (m > 0);
    out.set(static_cast<int>(f) + 1, v);
  }
  return out;
}

namespace {

// Union-find over literals with parity: each feature points to a parent
// literal it is equal to.
class EquivalenceClasses {
 public:
  explicit EquivalenceClasses(int n) : parent_(n + 1) {
    for (int f = 0; f <= n; ++f) parent_[f] = f;
  }
  // Representative literal equal to +f.
  int32_t Find(int f) {
    int32_t p = parent_[f];
    if (p == f) return f;
    int32_t root = Find(p < 0 ? -p : p);
    int32_t r = p < 0 ? -root : root;
    parent_[f] = r;
    return r;
  }
  int32_t FindLiteral(int32_t lit) {
    int32_t r = Find(lit < 0 ? -lit : lit);
    return lit < 0 ? -r : r;
  }
  // Records a == b for literals; returns false if that contradicts a == -b.
  bool Union(int32_t a, int32_t b) {
    int32_t ra = FindLiteral(a), rb = FindLiteral(b);
    if (ra == rb) return true;
    if (ra == -rb) return false;
    int fa = ra < 0 ? -ra : ra;
    int fb = rb < 0 ? -rb : rb;
    // Keep the smaller feature as root: +fa == sign * fb.
    if (fb < fa) {
      std::swap(fa, fb);
      std::swap(ra, rb);
    }
    // ra == rb  =>  +fb == (ra/|ra|) * (rb/|rb|) * fa
    bool same = (ra > 0) == (rb > 0);
    parent_[fb] = same ? fa : -fa;
    return true;
  }

 private:
  std::vector<int32_t> parent_;
};

}  // namespace

SimplifiedModel Simplify(const FeatureModel& model) {
  const int n = model.n_features();
  std::vector<int8_t> fixed(n + 1, 0);  // 0 unknown, +1 true, -1 false
  EquivalenceClasses eq(n);
  std::vector<Clause> clauses = model.clauses();

  // Alternate unit propagation and equivalence merging until fixpoint.
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<Clause> next;
    for (Clause& c : clauses) {
      Clause reduced;
      bool sat = false;
      for (Literal l : c) {
        int32_t r = eq.FindLiteral(l.value());
        int rf = r < 0 ? -r : r;
        if (fixed[rf] != 0) {
          if ((fixed[rf] > 0) == (r > 0)) {
            sat = true;
            break;
          }
          continue;
        }
        reduced.emplace_back(r);
      }
      if (sat) {
        changed |= true;
        continue;
      }
      if (!NormalizeClause(reduced)) {
        changed = true;
        continue;
      }
      if (reduced.empty()) {
        throw UnsatisfiableModel("simplification derived an empty clause");
      }
      if (reduced.size() == 1) {
        fixed[reduced[0].feature()] = reduced[0].positive() ? 1 : -1;
        changed = true;
        continue;
      }
      if (reduced != c) changed = true;
      next.push_back(std::move(reduced));
    }
    clauses = std::move(next);
    if (changed) continue;

    // Binary clauses {a,b} and {-a,-b} imply a == -b.
    std::vector<Clause> binaries;
    for (const Clause& c : clauses) {
      if (c.size() == 2) binaries.push_back(c);
    }
    std::sort(binaries.begin(), binaries.end());
    for (const Clause& c : binaries) {
      Clause mirror{-c[0], -c[1]};
      NormalizeClause(mirror);
      if (std::binary_search(binaries.begin(), binaries.end(), mirror)) {
        if (!eq.Union(c[0].value(), -c[1].value())) {
          throw UnsatisfiableModel("contradictory equivalences");
        }
        changed = true;
      }
    }
  }
  std::sort(clauses.begin(), clauses.end());
  clauses.erase(std::unique(clauses.begin(), clauses.end()), clauses.end());

  // Fixed values propagate to every member of a class.
  std::vector<bool> fixed_value(n, false);
  std::vector<int32_t> root_of(n + 1, 0);
  for (int f = 1; f <= n; ++f) root_of[f] = eq.Find(f);

  // Class representative: smallest concrete member, else smallest member.
  std::vector<int> rep(n + 1, 0);
  for (int f = 1; f <= n; ++f) {
    int r = root_of[f] < 0 ? -root_of[f] : root_of[f];
    if (rep[r] == 0 || (model.is_concrete(f) && !model.is_concrete(rep[r]))) {
      rep[r] = f;
    }
  }
  // Compact numbering over non-fixed roots, ordered by representative.
  std::vector<int> roots;
  for (int r = 1; r <= n; ++r) {
    if (rep[r] != 0 && fixed[r] == 0) roots.push_back(r);
  }
  std::sort(roots.begin(), roots.end(),
            [&](int a, int b) { return rep[a] < rep[b]; });
  std::vector<int> new_index(n + 1, 0);
  for (size_t i = 0; i < roots.size(); ++i) new_index[roots[i]] = i + 1;

  SimplifiedModel out;
  out.mapping.assign(n, 0);
  out.fixed_value.assign(n, false);
  std::vector<int> concrete;
  for (int f = 1; f <= n; ++f) {
    int32_t r = root_of[f];
    int rf = r < 0 ? -r : r;
    if (fixed[rf] != 0) {
      out.fixed_value[f - 1] = (fixed[rf] > 0) == (r > 0);
      continue;
    }
    out.mapping[f - 1] = r < 0 ? -new_index[rf] : new_index[rf];
    if (model.is_concrete(f)) concrete.push_back(new_index[rf]);
  }
  std::vector<Clause> reduced;
  for (const Clause& c : clauses) {
    Clause nc;
    for (Literal l : c) {
      int idx = new_index[l.feature()];
      nc.emplace_back(l.positive() ? idx : -idx);
    }
    reduced.push_back(std::move(nc));
  }
  int reduced_n = static_cast<int>(roots.size());
  if (reduced_n == 0) {
    // Everything is fixed: keep one free dummy feature so the model type's
    // invariants hold. It is never mapped back.
    reduced_n = 1;
    concrete = {1};
  } else if (concrete.empty()) {
    concrete.push_back(1);
  }
  out.reduced = FeatureModel(model.name(), reduced_n, std::move(reduced),
                             std::move(concrete));
  return out;
}

}  // namespace samplns
