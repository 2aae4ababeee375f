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

#include "samplns/certification.h"

#include <algorithm>
#include <sstream>

namespace samplns {

nlohmann::json GapReport::ToJson() const {
  nlohmann::json j;
  j["model"] = model;
  j["hash"] = hash;
  j["ub"] = ub;
  j["lb"] = lb;
  j["ratio"] = ratio ? nlohmann::json(*ratio) : nlohmann::json(nullptr);
  j["status"] = status;
  j["t_last_ub_s"] = t_last_ub_s;
  j["t_last_lb_s"] = t_last_lb_s;
  return j;
}

GapReport GapReport::FromJson(const nlohmann::json& j) {
  GapReport r;
  r.model = j.at("model").get<std::string>();
  r.hash = j.at("hash").get<std::string>();
  r.ub = j.at("ub").get<int>();
  r.lb = j.at("lb").get<int>();
  if (!j.at("ratio").is_null()) r.ratio = j.at("ratio").get<double>();
  r.status = j.at("status").get<std::string>();
  r.t_last_ub_s = j.at("t_last_ub_s").get<double>();
  r.t_last_lb_s = j.at("t_last_lb_s").get<double>();
  return r;
}

GapReport MakeGapReport(std::string model, std::string hash, int ub, int lb,
                        double t_last_ub_s, double t_last_lb_s) {
  GapReport r;
  r.model = std::move(model);
  r.hash = std::move(hash);
  r.ub = ub;
  r.lb = lb;
  if (lb > 0) {
    r.ratio = static_cast<double>(ub) / lb;
  } else if (ub == 0) {
    r.ratio = 1.0;
  }
  r.status = ub == lb ? "optimal" : "gap";
  r.t_last_ub_s = t_last_ub_s;
  r.t_last_lb_s = t_last_lb_s;
  return r;
}

std::string_view CertificateErrorName(CertificateError e) {
  switch (e) {
    case CertificateError::kNone:
      return "ok";
    case CertificateError::kModelMismatch:
      return "model-mismatch";
    case CertificateError::kHashMismatch:
      return "hash-mismatch";
    case CertificateError::kInvalidConfiguration:
      return "invalid-configuration";
    case CertificateError::kCoverageGap:
      return "coverage-gap";
    case CertificateError::kInvalidMember:
      return "invalid-member";
    case CertificateError::kMutexViolation:
      return "mutex-violation";
  }
  return "?";
}

DualityCheck CheckDuality(const Sample& sample, const MutexSet& set,
                          const FeatureModel& model,
                          const InteractionUniverse& universe) {
  DualityCheck out;
  SampleCheck s = VerifySample(sample, model, universe);
  if (!s.ok) {
    out.error = s.invalid_configuration ? CertificateError::kInvalidConfiguration
                                        : CertificateError::kCoverageGap;
    out.message = s.message;
    return out;
  }
  if (!set.interactions.empty() &&
      set.interactions.front().size() != universe.strength()) {
    out.error = CertificateError::kInvalidMember;
    out.message = "certificate strength differs from the universe";
    return out;
  }
  CertificateCheck c = VerifyMutexCertificate(set, model);
  if (!c.ok) {
    out.error = c.invalid_member ? CertificateError::kInvalidMember
                                 : CertificateError::kMutexViolation;
    out.message = c.message;
    return out;
  }
  out.report = MakeGapReport(model.name(), model.ContentHash(),
                             static_cast<int>(sample.size()), set.size());
  out.message = "ok";
  return out;
}

namespace {

struct Header {
  std::vector<std::string> fields;
  std::string hash;
  std::vector<std::string> body;
};

Header ReadHeader(std::string_view text, std::string_view kind) {
  std::istringstream in{std::string(text)};
  Header h;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream tok(line);
    std::string first;
    if (!(tok >> first)) continue;
    if (first == "c") {
      std::string key, value;
      if (tok >> key >> value && key == "hash") h.hash = value;
      continue;
    }
    if (!have_header) {
      if (first != kind) {
        throw ModelError("expected '" + std::string(kind) + "' header, got '" +
                         line + "'");
      }
      std::string f;
      while (tok >> f) h.fields.push_back(f);
      have_header = true;
      continue;
    }
    h.body.push_back(line);
  }
  if (!have_header) throw ModelError("missing '" + std::string(kind) + "' header");
  return h;
}

int ParseCount(const std::string& s) {
  try {
    size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size() || v < 0) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ModelError("bad count in header: '" + s + "'");
  }
}

}  // namespace

std::string FormatSampleFile(const SampleFile& file) {
  std::string out = "sample " + file.model_name + " " +
                    std::to_string(file.sample.size()) + "\n";
  out += "c hash " + file.hash + "\n";
  for (const Configuration& c : file.sample) out += c.ToString() + "\n";
  return out;
}

SampleFile ParseSampleFile(std::string_view text) {
  Header h = ReadHeader(text, "sample");
  if (h.fields.size() != 2) throw ModelError("malformed sample header");
  SampleFile f;
  f.model_name = h.fields[0];
  f.hash = h.hash;
  const int count = ParseCount(h.fields[1]);
  if (static_cast<int>(h.body.size()) != count) {
    throw ModelError("sample header declares " + std::to_string(count) +
                     " configurations, found " + std::to_string(h.body.size()));
  }
  for (const std::string& line : h.body) {
    std::istringstream in(line);
    std::vector<Literal> lits;
    int64_t v;
    while (in >> v) lits.emplace_back(static_cast<int32_t>(v));
    if (!in.eof()) throw ModelError("bad configuration line: '" + line + "'");
    f.sample.push_back(
        Configuration::FromLiterals(static_cast<int>(lits.size()), lits));
  }
  return f;
}

std::string FormatCertificateFile(const CertificateFile& file) {
  std::string out = "lb-cert " + file.model_name + " " + std::to_string(file.t) +
                    " " + std::to_string(file.set.size()) + "\n";
  out += "c hash " + file.hash + "\n";
  out += FormatInteractions(file.set.interactions);
  return out;
}

CertificateFile ParseCertificateFile(std::string_view text) {
  Header h = ReadHeader(text, "lb-cert");
  if (h.fields.size() != 3) throw ModelError("malformed certificate header");
  CertificateFile f;
  f.model_name = h.fields[0];
  f.t = ParseCount(h.fields[1]);
  f.hash = h.hash;
  const int count = ParseCount(h.fields[2]);
  if (static_cast<int>(h.body.size()) != count) {
    throw ModelError("certificate header declares " + std::to_string(count) +
                     " interactions, found " + std::to_string(h.body.size()));
  }
  f.set.level = MutexLevel::kExact;
  for (const std::string& line : h.body) {
    Interaction i = ParseInteraction(line);
    if (i.size() != f.t) {
      throw ModelError("certificate line '" + line + "' is not " +
                       std::to_string(f.t) + "-wise");
    }
    f.set.interactions.push_back(i);
  }
  std::sort(f.set.interactions.begin(), f.set.interactions.end());
  return f;
}

DualityCheck VerifyArtifacts(const SampleFile& sample,
                             const CertificateFile& certificate,
                             const FeatureModel& model) {
  DualityCheck out;
  if (sample.model_name != model.name() ||
      certificate.model_name != model.name()) {
    out.error = CertificateError::kModelMismatch;
    out.message = "artifacts name model '" + sample.model_name + "'/'" +
                  certificate.model_name + "', expected '" + model.name() + "'";
    return out;
  }
  const std::string hash = model.ContentHash();
  if (sample.hash != hash || certificate.hash != hash) {
    out.error = CertificateError::kHashMismatch;
    out.message = "artifact hash does not match model content hash " + hash;
    return out;
  }
  for (size_t i = 0; i < sample.sample.size(); ++i) {
    if (sample.sample[i].size() != model.n_features()) {
      out.error = CertificateError::kInvalidConfiguration;
      out.message = "configuration " + std::to_string(i) + " assigns " +
                    std::to_string(sample.sample[i].size()) + " features";
      return out;
    }
  }
  InteractionUniverse universe = EnumerateUniverse(model, certificate.t,
                                                   &sample.sample);
  return CheckDuality(sample.sample, certificate.set, model, universe);
}

}  // namespace samplns
