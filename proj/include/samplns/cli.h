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

#ifndef SAMPLNS_CLI_H_
#define SAMPLNS_CLI_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "samplns/certification.h"

namespace samplns {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,  // bad arguments, unreadable or malformed input
  kExitUnsatisfiable = 2,
  kExitVerificationFailed = 3,
  kExitHashMismatch = 4,
  kExitCoverageGap = 5,
  kExitMutexViolation = 6,
  kExitInvalidConfiguration = 7,
  kExitModelMismatch = 8,
  kExitInvalidMember = 9,
};

int ExitCodeFor(CertificateError e);

struct RunConfig {
  std::vector<std::string> models;
  int t = 2;
  double time_limit_s = 900;
  double iteration_limit_s = 60;
  std::optional<uint64_t> seed;
  RunMode mode = RunMode::kDeterministic;
  std::string out_dir = ".";
  int repeat = 1;
  bool simplify = false;
  MutexLevel q = MutexLevel::kLevel0;
  int max_iterations = -1;

  // Throws std::invalid_argument on non-positive limits or counts and on t
  // outside [1, kMaxStrength].
  void Validate() const;
};

// Explicit seed, else SAMPLNS_SEED, else 0.
uint64_t ResolveSeed(const RunConfig& config);

struct RunOutcome {
  int exit_code = kExitOk;
  std::string error;
  std::optional<GapReport> report;
  nlohmann::json record;  // the per-run JSON document
  std::string sample_path;
  std::string certificate_path;
  std::string record_path;
};

// Loads, samples, bounds, writes `<stem>.run<k>.{sample,cert,json}` into the
// output directory, then re-reads and verifies the written artifacts. Timing
// starts before the model is parsed. Deterministic runs record zero
// timestamps in the report so reruns are byte-identical; measured times go to
// the record's "timing" entry.
RunOutcome RunModel(const std::string& model_path, const RunConfig& config,
                    int run_index);

int CmdSample(const RunConfig& config, std::ostream& out, std::ostream& err);

int CmdVerify(const std::string& sample_path,
              const std::string& certificate_path,
              const std::string& model_path, std::ostream& out,
              std::ostream& err);

// Coverage fraction of every prefix (0..|S|) of a seeded shuffle.
std::vector<double> CoverageCurve(const Sample& sample,
                                  const InteractionUniverse& universe,
                                  uint64_t seed);
std::string FormatCoverageCsv(const std::vector<double>& curve);

int CmdCoverageCurve(const std::string& sample_path,
                     const std::string& model_path, int t, uint64_t seed,
                     const std::string& out_path, std::ostream& out,
                     std::ostream& err);

struct BenchRow {
  std::string model;
  bool failed = false;
  std::string error;
  int n_features = 0;
  int n_clauses = 0;
  int runs = 0;
  double initial_mean = 0;
  double ub_mean = 0;
  int ub_min = 0;
  double lb_mean = 0;
  int lb_max = 0;
  double savings_pct = 0;  // 100 * (1 - ub_mean / initial_mean)
  std::optional<double> ratio;  // ub_min / lb_max
  double time_to_ub_s = 0;  // mean over runs
  double time_to_lb_s = 0;
};

// Groups per-run records by model (sorted by name) and aggregates.
std::vector<BenchRow> AggregateRecords(const std::vector<nlohmann::json>& records);
// Reads every `*.json` run record of a directory.
std::vector<nlohmann::json> LoadRecords(const std::string& dir);
std::string RenderTable(const std::vector<BenchRow>& rows);

// Runs every model file (.cnf, .dimacs, .json) of the directory `repeat`
// times, then derives the table from the written records and stores it as
// `bench.txt` next to them.
int CmdBench(const std::string& corpus_dir, const RunConfig& config,
             std::ostream& out, std::ostream& err);

}  // namespace samplns

#endif  // SAMPLNS_CLI_H_
