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

// Primal/dual artifacts and their joint check. A verified sample of size UB
// and a verified mutually exclusive set of size LB bracket the optimum; equal
// sizes certify optimality.

#ifndef SAMPLNS_CERTIFICATION_H_
#define SAMPLNS_CERTIFICATION_H_

#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"
#include "samplns/lower_bound.h"
#include "samplns/upper_bound.h"

namespace samplns {

struct GapReport {
  std::string model;
  std::string hash;
  int ub = 0;
  int lb = 0;
  std::optional<double> ratio;  // ub / lb; absent when lb == 0 < ub
  std::string status;           // "optimal" or "gap"
  double t_last_ub_s = 0;
  double t_last_lb_s = 0;

  nlohmann::json ToJson() const;
  static GapReport FromJson(const nlohmann::json& j);
  bool operator==(const GapReport&) const = default;
};

// Fills ub/lb/ratio/status from the sizes.
GapReport MakeGapReport(std::string model, std::string hash, int ub, int lb,
                        double t_last_ub_s = 0, double t_last_lb_s = 0);

enum class CertificateError {
  kNone,
  kModelMismatch,
  kHashMismatch,
  kInvalidConfiguration,
  kCoverageGap,
  kInvalidMember,
  kMutexViolation,
};

std::string_view CertificateErrorName(CertificateError e);

struct DualityCheck {
  CertificateError error = CertificateError::kNone;
  std::string message;
  std::optional<GapReport> report;
  bool ok() const { return error == CertificateError::kNone; }
};

// Verifies the sample and the exclusive set independently; on success the
// report's status is optimal iff both have the same size.
DualityCheck CheckDuality(const Sample& sample, const MutexSet& set,
                          const FeatureModel& model,
                          const InteractionUniverse& universe);

// Sample file: "sample <model> <count>", "c hash <hex>", then one
// configuration per line as n signed literals sorted by feature.
struct SampleFile {
  std::string model_name;
  std::string hash;
  Sample sample;
};
std::string FormatSampleFile(const SampleFile& file);
SampleFile ParseSampleFile(std::string_view text);

// Certificate file: "lb-cert <model> <t> <count>", "c hash <hex>", then one
// interaction per line, sorted.
struct CertificateFile {
  std::string model_name;
  int t = 2;
  std::string hash;
  MutexSet set;
};
std::string FormatCertificateFile(const CertificateFile& file);
CertificateFile ParseCertificateFile(std::string_view text);

// Name and hash checks against `model`, then CheckDuality.
DualityCheck VerifyArtifacts(const SampleFile& sample,
                             const CertificateFile& certificate,
                             const FeatureModel& model);

}  // namespace samplns

#endif  // SAMPLNS_CERTIFICATION_H_
