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


#include <iostream>

#include "CLI11.hpp"
#include "samplns/cli.h"

namespace {

void AddRunOptions(CLI::App* cmd, samplns::RunConfig& config,
                   std::string& mode, std::string& q) {
  cmd->add_option("--t", config.t, "interaction strength")
      ->capture_default_str();
  cmd->add_option("--time-limit", config.time_limit_s,
                  "total time limit in seconds")
      ->capture_default_str();
  cmd->add_option("--iteration-limit", config.iteration_limit_s,
                  "time limit per optimization step in seconds")
      ->capture_default_str();
  cmd->add_option("--seed", config.seed,
                  "random seed (falls back to SAMPLNS_SEED, then 0)");
  cmd->add_option("--mode", mode, "deterministic or parallel")
      ->check(CLI::IsMember({"deterministic", "parallel"}))
      ->capture_default_str();
  cmd->add_option("--out", config.out_dir, "output directory")
      ->capture_default_str();
  cmd->add_option("--repeat", config.repeat, "runs per model")
      ->capture_default_str();
  cmd->add_flag("--simplify", config.simplify,
                "sample a preprocessed model and map the result back");
  cmd->add_option("--mutex-level", q,
                  "exclusivity test for lower bounds: L0, P1, P2 or EXACT")
      ->check(CLI::IsMember({"L0", "P1", "P2", "EXACT"}))
      ->capture_default_str();
  cmd->add_option("--max-iterations", config.max_iterations,
                  "upper-bound iteration cap (negative: none)")
      ->capture_default_str();
}

void FinishConfig(samplns::RunConfig& config, const std::string& mode,
                  const std::string& q) {
  config.mode = mode == "parallel" ? samplns::RunMode::kParallel
                                   : samplns::RunMode::kDeterministic;
  config.q = samplns::ParseMutexLevel(q);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum t-wise interaction samples with lower bounds"};
  app.require_subcommand(1);

  samplns::RunConfig config;
  std::string mode = "deterministic";
  std::string q = "L0";

  CLI::App* sample = app.add_subcommand("sample", "sample and bound models");
  sample->add_option("--model", config.models, "model file (DIMACS or JSON)")
      ->required();
  AddRunOptions(sample, config, mode, q);

  std::string sample_path, cert_path, model_path, out_path = "-";
  int curve_t = 2;
  uint64_t curve_seed = 0;
  CLI::App* verify = app.add_subcommand("verify", "check a sample and certificate");
  verify->add_option("--sample", sample_path)->required();
  verify->add_option("--certificate", cert_path)->required();
  verify->add_option("--model", model_path)->required();

  CLI::App* curve = app.add_subcommand(
      "coverage-curve", "coverage of growing prefixes of a shuffled sample");
  curve->add_option("--sample", sample_path)->required();
  curve->add_option("--model", model_path)->required();
  curve->add_option("--t", curve_t)->capture_default_str();
  curve->add_option("--seed", curve_seed)->capture_default_str();
  curve->add_option("--out", out_path, "CSV path, - for stdout")
      ->capture_default_str();

  std::string corpus;
  CLI::App* bench = app.add_subcommand("bench", "run a directory of models");
  bench->add_option("--corpus", corpus, "directory of model files")->required();
  AddRunOptions(bench, config, mode, q);

  CLI11_PARSE(app, argc, argv);

  FinishConfig(config, mode, q);
  if (*sample) return samplns::CmdSample(config, std::cout, std::cerr);
  if (*verify) {
    return samplns::CmdVerify(sample_path, cert_path, model_path, std::cout,
                              std::cerr);
  }
  if (*curve) {
    return samplns::CmdCoverageCurve(sample_path, model_path, curve_t,
                                     curve_seed, out_path, std::cout,
                                     std::cerr);
  }
  return samplns::CmdBench(corpus, config, std::cout, std::cerr);
}
