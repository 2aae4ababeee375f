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

#include "samplns/cli.h"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace samplns {

namespace fs = std::filesystem;

namespace {

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in || fs::is_directory(path)) throw ModelError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ModelError("cannot write " + path);
  out << text;
  if (!out) throw ModelError("write failed: " + path);
}

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string ModeName(RunMode m) {
  return m == RunMode::kDeterministic ? "deterministic" : "parallel";
}

// Adds configurations until every valid interaction of `universe` is covered.
void TopUp(Sample& sample, const InteractionUniverse& universe, uint64_t seed) {
  CoverageSet covered = Coverage(sample, universe);
  ModelOracle oracle(universe.model(), seed);
  for (InteractionId id = 0; id < universe.size(); ++id) {
    if (covered[id]) continue;
    const Interaction& i = universe[id];
    std::optional<Configuration> c = oracle.Extend({i.begin(), i.end()});
    if (!c) throw std::logic_error("valid interaction " + i.ToString() +
                                   " has no extension");
    universe.ForEachCovered(*c, [&](InteractionId j) { covered[j] = true; });
    sample.push_back(std::move(*c));
  }
}

// Maps an exclusive set of the reduced model onto original concrete features.
MutexSet LiftMutexSet(const MutexSet& set, const SimplifiedModel& s,
                      const FeatureModel& original) {
  std::vector<int> origin(s.reduced.n_features() + 1, 0);
  std::vector<bool> origin_negated(s.reduced.n_features() + 1, false);
  for (int f = original.n_features(); f >= 1; --f) {
    const int32_t m = s.mapping[f - 1];
    if (m == 0 || !original.is_concrete(f)) continue;
    origin[std::abs(m)] = f;
    origin_negated[std::abs(m)] = m < 0;
  }
  MutexSet out;
  out.level = set.level;
  for (const Interaction& i : set.interactions) {
    std::vector<Literal> lits;
    for (Literal l : i) {
      const int f = origin[l.feature()];
      if (f == 0) break;
      const bool positive = l.positive() != origin_negated[l.feature()];
      lits.emplace_back(positive ? f : -f);
    }
    if (static_cast<int>(lits.size()) == i.size()) {
      out.interactions.emplace_back(lits);
    }
  }
  std::sort(out.interactions.begin(), out.interactions.end());
  return out;
}

nlohmann::json FailureRecord(const std::string& model_path, int run_index,
                             int code, const std::string& error) {
  nlohmann::json j;
  j["model"] = fs::path(model_path).stem().string();
  j["model_path"] = model_path;
  j["run"] = run_index;
  j["failed"] = true;
  j["exit_code"] = code;
  j["error"] = error;
  return j;
}

}  // namespace

int ExitCodeFor(CertificateError e) {
  switch (e) {
    case CertificateError::kNone:
      return kExitOk;
    case CertificateError::kModelMismatch:
      return kExitModelMismatch;
    case CertificateError::kHashMismatch:
      return kExitHashMismatch;
    case CertificateError::kInvalidConfiguration:
      return kExitInvalidConfiguration;
    case CertificateError::kCoverageGap:
      return kExitCoverageGap;
    case CertificateError::kInvalidMember:
      return kExitInvalidMember;
    case CertificateError::kMutexViolation:
      return kExitMutexViolation;
  }
  return kExitVerificationFailed;
}

void RunConfig::Validate() const {
  if (t < 1 || t > kMaxStrength) {
    throw std::invalid_argument("t must be in [1, " +
                                std::to_string(kMaxStrength) + "]");
  }
  if (!(time_limit_s > 0)) {
    throw std::invalid_argument("time limit must be positive");
  }
  if (!(iteration_limit_s > 0)) {
    throw std::invalid_argument("iteration limit must be positive");
  }
  if (repeat < 1) throw std::invalid_argument("repeat must be positive");
}

uint64_t ResolveSeed(const RunConfig& config) {
  if (config.seed) return *config.seed;
  if (const char* env = std::getenv("SAMPLNS_SEED"); env && *env) {
    try {
      size_t pos = 0;
      uint64_t v = std::stoull(env, &pos);
      if (pos == std::string_view(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument(std::string("SAMPLNS_SEED is not a number: ") +
                                env);
  }
  return 0;
}

RunOutcome RunModel(const std::string& model_path, const RunConfig& config,
                    int run_index) {
  const auto start = Clock::now();
  RunOutcome o;
  auto fail = [&](int code, const std::string& error) {
    o.exit_code = code;
    o.error = error;
    o.record = FailureRecord(model_path, run_index, code, error);
  };
  try {
    std::vector<std::string> warnings;
    FeatureModel model = LoadModelFile(model_path, &warnings);
    const uint64_t seed = ResolveSeed(config);

    SamplnsOptions options;
    options.total_time_s = config.time_limit_s;
    options.iteration_time_s = config.iteration_limit_s;
    options.mode = config.mode;
    options.seed = seed;
    options.max_iterations = config.max_iterations;
    options.q = config.q;
    options.start = start;

    Sample sample;
    MutexSet lower_bound;
    SamplnsResult result;
    int n_valid = 0;
    if (config.simplify) {
      SimplifiedModel s = Simplify(model);
      InteractionUniverse reduced = EnumerateUniverse(s.reduced, config.t,
                                                      nullptr, seed);
      result = Samplns(reduced, options);
      for (const Configuration& c : result.sample) {
        sample.push_back(s.Reconstruct(c));
      }
      InteractionUniverse full = EnumerateUniverse(model, config.t, &sample,
                                                   seed);
      n_valid = full.size();
      TopUp(sample, full, seed);
      lower_bound = LiftMutexSet(result.lower_bound, s, model);
    } else {
      InteractionUniverse universe = EnumerateUniverse(model, config.t,
                                                       nullptr, seed);
      n_valid = universe.size();
      result = Samplns(universe, options);
      sample = result.sample;
      lower_bound = result.lower_bound;
    }

    fs::create_directories(config.out_dir);
    const std::string base =
        (fs::path(config.out_dir) /
         (model.name() + ".run" + std::to_string(run_index)))
            .string();
    o.sample_path = base + ".sample";
    o.certificate_path = base + ".cert";
    o.record_path = base + ".json";
    const std::string hash = model.ContentHash();
    WriteFile(o.sample_path, FormatSampleFile({model.name(), hash, sample}));
    WriteFile(o.certificate_path,
              FormatCertificateFile({model.name(), config.t, hash,
                                     lower_bound}));

    DualityCheck check = VerifyArtifacts(
        ParseSampleFile(ReadFile(o.sample_path)),
        ParseCertificateFile(ReadFile(o.certificate_path)),
        LoadModelFile(model_path));
    if (!check.ok()) {
      fail(ExitCodeFor(check.error),
           std::string(CertificateErrorName(check.error)) + ": " +
               check.message);
      WriteFile(o.record_path, o.record.dump(2) + "\n");
      return o;
    }

    GapReport report = *check.report;
    if (config.mode == RunMode::kParallel) {
      report.t_last_ub_s = result.t_last_ub_s;
      report.t_last_lb_s = result.t_last_lb_s;
    }
    o.report = report;

    nlohmann::json& r = o.record;
    r["model"] = model.name();
    r["model_path"] = model_path;
    r["run"] = run_index;
    r["failed"] = false;
    r["report"] = report.ToJson();
    r["seed"] = seed;
    r["mode"] = ModeName(config.mode);
    r["t"] = config.t;
    r["simplified"] = config.simplify;
    r["n_features"] = model.n_features();
    r["n_clauses"] = static_cast<int>(model.clauses().size());
    r["n_concrete"] = static_cast<int>(model.concrete_features().size());
    r["n_valid"] = n_valid;
    r["initial"] = result.initial_size;
    r["iterations"] = result.iterations;
    r["ub_proven_optimal"] = result.ub_proven_optimal;
    r["lb_proven_optimal"] = result.lb_proven_optimal;
    r["sample_file"] = fs::path(o.sample_path).filename().string();
    r["certificate_file"] = fs::path(o.certificate_path).filename().string();
    r["warnings"] = warnings;
    r["timing"] = {{"t_last_ub_s", result.t_last_ub_s},
                   {"t_last_lb_s", result.t_last_lb_s},
                   {"total_s", Seconds(start)}};
    WriteFile(o.record_path, r.dump(2) + "\n");
  } catch (const UnsatisfiableModel& e) {
    fail(kExitUnsatisfiable, std::string("unsatisfiable model: ") + e.what());
  } catch (const ModelError& e) {
    fail(kExitUsage, e.what());
  } catch (const std::invalid_argument& e) {
    fail(kExitUsage, e.what());
  } catch (const fs::filesystem_error& e) {
    fail(kExitUsage, e.what());
  } catch (const std::exception& e) {
    fail(kExitVerificationFailed, std::string("internal error: ") + e.what());
  }
  if (o.exit_code != kExitOk && o.record_path.empty()) {
    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    const std::string path =
        (fs::path(config.out_dir) / (fs::path(model_path).stem().string() +
                                     ".run" + std::to_string(run_index) +
                                     ".json"))
            .string();
    std::ofstream out(path);
    if (out) {
      out << o.record.dump(2) << "\n";
      o.record_path = path;
    }
  }
  return o;
}

int CmdSample(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.Validate();
    ResolveSeed(config);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (config.models.empty()) {
    err << "error: no model given\n";
    return kExitUsage;
  }
  int status = kExitOk;
  for (const std::string& path : config.models) {
    for (int k = 0; k < config.repeat; ++k) {
      RunOutcome o = RunModel(path, config, k);
      if (o.exit_code != kExitOk) {
        err << path << ": " << o.error << "\n";
        if (status == kExitOk) status = o.exit_code;
        continue;
      }
      out << o.report->ToJson().dump() << "\n";
    }
  }
  return status;
}

int CmdVerify(const std::string& sample_path,
              const std::string& certificate_path,
              const std::string& model_path, std::ostream& out,
              std::ostream& err) {
  DualityCheck check;
  try {
    FeatureModel model = LoadModelFile(model_path);
    check = VerifyArtifacts(ParseSampleFile(ReadFile(sample_path)),
                            ParseCertificateFile(ReadFile(certificate_path)),
                            model);
  } catch (const UnsatisfiableModel& e) {
    err << "error: unsatisfiable model: " << e.what() << "\n";
    return kExitUnsatisfiable;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (!check.ok()) {
    err << "invalid certificate (" << CertificateErrorName(check.error)
        << "): " << check.message << "\n";
    return ExitCodeFor(check.error);
  }
  out << check.report->ToJson().dump() << "\n";
  return kExitOk;
}

std::vector<double> CoverageCurve(const Sample& sample,
                                  const InteractionUniverse& universe,
                                  uint64_t seed) {
  std::vector<int> order(sample.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<double> curve{universe.size() == 0 ? 1.0 : 0.0};
  CoverageSet covered(universe.size(), false);
  int count = 0;
  for (int idx : order) {
    universe.ForEachCovered(sample[idx], [&](InteractionId id) {
      if (!covered[id]) {
        covered[id] = true;
        ++count;
      }
    });
    curve.push_back(universe.size() == 0
                        ? 1.0
                        : static_cast<double>(count) / universe.size());
  }
  return curve;
}

std::string FormatCoverageCsv(const std::vector<double>& curve) {
  std::ostringstream out;
  out << "index,coverage_fraction\n" << std::fixed << std::setprecision(6);
  for (size_t i = 0; i < curve.size(); ++i) out << i << "," << curve[i] << "\n";
  return out.str();
}

int CmdCoverageCurve(const std::string& sample_path,
                     const std::string& model_path, int t, uint64_t seed,
                     const std::string& out_path, std::ostream& out,
                     std::ostream& err) {
  try {
    FeatureModel model = LoadModelFile(model_path);
    SampleFile file = ParseSampleFile(ReadFile(sample_path));
    if (file.hash != model.ContentHash()) {
      err << "warning: sample hash does not match the model\n";
    }
    for (size_t i = 0; i < file.sample.size(); ++i) {
      if (!IsValidConfiguration(model, file.sample[i])) {
        err << "error: configuration " << i << " is invalid\n";
        return kExitInvalidConfiguration;
      }
    }
    InteractionUniverse universe = EnumerateUniverse(model, t, &file.sample);
    const std::string csv =
        FormatCoverageCsv(CoverageCurve(file.sample, universe, seed));
    if (out_path.empty() || out_path == "-") {
      out << csv;
    } else {
      WriteFile(out_path, csv);
    }
  } catch (const UnsatisfiableModel& e) {
    err << "error: unsatisfiable model: " << e.what() << "\n";
    return kExitUnsatisfiable;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

std::vector<BenchRow> AggregateRecords(
    const std::vector<nlohmann::json>& records) {
  std::map<std::string, std::vector<const nlohmann::json*>> by_model;
  for (const nlohmann::json& r : records) {
    by_model[r.at("model").get<std::string>()].push_back(&r);
  }
  std::vector<BenchRow> rows;
  for (const auto& [name, runs] : by_model) {
    BenchRow row;
    row.model = name;
    std::vector<const nlohmann::json*> ok;
    for (const nlohmann::json* r : runs) {
      if (r->value("failed", false)) {
        if (row.error.empty()) row.error = r->value("error", "failed");
      } else {
        ok.push_back(r);
      }
    }
    if (ok.empty()) {
      row.failed = true;
      rows.push_back(row);
      continue;
    }
    row.runs = static_cast<int>(ok.size());
    row.n_features = ok[0]->at("n_features").get<int>();
    row.n_clauses = ok[0]->at("n_clauses").get<int>();
    row.ub_min = std::numeric_limits<int>::max();
    for (const nlohmann::json* r : ok) {
      const nlohmann::json& rep = r->at("report");
      const int ub = rep.at("ub").get<int>();
      const int lb = rep.at("lb").get<int>();
      row.initial_mean += r->at("initial").get<int>();
      row.ub_mean += ub;
      row.lb_mean += lb;
      row.ub_min = std::min(row.ub_min, ub);
      row.lb_max = std::max(row.lb_max, lb);
      row.time_to_ub_s += r->at("timing").at("t_last_ub_s").get<double>();
      row.time_to_lb_s += r->at("timing").at("t_last_lb_s").get<double>();
    }
    const double n = row.runs;
    row.initial_mean /= n;
    row.ub_mean /= n;
    row.lb_mean /= n;
    row.time_to_ub_s /= n;
    row.time_to_lb_s /= n;
    row.savings_pct =
        row.initial_mean > 0 ? 100.0 * (1.0 - row.ub_mean / row.initial_mean)
                             : 0.0;
    if (row.lb_max > 0) {
      row.ratio = static_cast<double>(row.ub_min) / row.lb_max;
    } else if (row.ub_min == 0) {
      row.ratio = 1.0;
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<nlohmann::json> LoadRecords(const std::string& dir) {
  std::vector<std::string> paths;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      paths.push_back(entry.path().string());
    }
  }
  std::sort(paths.begin(), paths.end());
  std::vector<nlohmann::json> records;
  for (const std::string& p : paths) {
    nlohmann::json j = nlohmann::json::parse(ReadFile(p), nullptr, false);
    if (j.is_object() && j.contains("run") && j.contains("model")) {
      records.push_back(std::move(j));
    }
  }
  return records;
}

std::string RenderTable(const std::vector<BenchRow>& rows) {
  const std::vector<std::string> header = {
      "model", "|F|", "|D|", "initial", "UB mean(min)", "LB mean(max)",
      "savings %", "UB/LB", "time to bounds (s)"};
  std::vector<std::vector<std::string>> cells{header};
  auto fmt = [](double v, int digits) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
  };
  for (const BenchRow& r : rows) {
    if (r.failed) {
      cells.push_back({r.model, "-", "-", "-", "failed", "failed", "-", "-",
                       r.error});
      continue;
    }
    cells.push_back(
        {r.model, std::to_string(r.n_features), std::to_string(r.n_clauses),
         fmt(r.initial_mean, 1),
         fmt(r.ub_mean, 1) + " (" + std::to_string(r.ub_min) + ")",
         fmt(r.lb_mean, 1) + " (" + std::to_string(r.lb_max) + ")",
         fmt(r.savings_pct, 1), r.ratio ? fmt(*r.ratio, 2) : "inf",
         fmt(r.time_to_ub_s, 2) + " / " + fmt(r.time_to_lb_s, 2)});
  }
  std::vector<size_t> width(header.size(), 0);
  for (const auto& row : cells) {
    for (size_t c = 0; c < row.size(); ++c) {
      width[c] = std::max(width[c], row[c].size());
    }
  }
  std::ostringstream out;
  for (size_t i = 0; i < cells.size(); ++i) {
    for (size_t c = 0; c < cells[i].size(); ++c) {
      out << (c ? " | " : "");
      if (c + 1 < cells[i].size()) out << std::left << std::setw(width[c]);
      out << cells[i][c];
    }
    out << "\n";
    if (i == 0) {
      for (size_t c = 0; c < width.size(); ++c) {
        out << (c ? "-+-" : "") << std::string(width[c], '-');
      }
      out << "\n";
    }
  }
  return out.str();
}

int CmdBench(const std::string& corpus_dir, const RunConfig& config,
             std::ostream& out, std::ostream& err) {
  try {
    config.Validate();
    ResolveSeed(config);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  std::error_code ec;
  if (!fs::is_directory(corpus_dir, ec)) {
    err << "error: not a directory: " << corpus_dir << "\n";
    return kExitUsage;
  }
  std::vector<std::string> models;
  for (const auto& entry : fs::directory_iterator(corpus_dir)) {
    const std::string ext = entry.path().extension().string();
    if (entry.is_regular_file() &&
        (ext == ".cnf" || ext == ".dimacs" || ext == ".json")) {
      models.push_back(entry.path().string());
    }
  }
  std::sort(models.begin(), models.end());

  std::vector<nlohmann::json> records;
  for (const std::string& path : models) {
    for (int k = 0; k < config.repeat; ++k) {
      RunOutcome o = RunModel(path, config, k);
      if (o.exit_code != kExitOk) err << path << ": " << o.error << "\n";
      if (!o.record_path.empty()) {
        records.push_back(nlohmann::json::parse(ReadFile(o.record_path)));
      } else {
        records.push_back(o.record);
      }
    }
  }
  const std::string table = RenderTable(AggregateRecords(records));
  try {
    fs::create_directories(config.out_dir);
    WriteFile((fs::path(config.out_dir) / "bench.txt").string(), table);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  out << table;
  return kExitOk;
}

}  // namespace samplns
