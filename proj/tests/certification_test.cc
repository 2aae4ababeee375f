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

#include "fixtures.h"
#include "oracle.h"
#include "samplns/certification.h"

namespace samplns {
namespace {

using fixtures::Cfg;
using fixtures::Set;

TEST(GapReport, RatioAndStatus) {
  GapReport a = MakeGapReport("m", "h", 5, 4);
  EXPECT_EQ(a.status, "gap");
  EXPECT_DOUBLE_EQ(*a.ratio, 1.25);
  GapReport b = MakeGapReport("m", "h", 4, 4);
  EXPECT_EQ(b.status, "optimal");
  EXPECT_DOUBLE_EQ(*b.ratio, 1.0);
  EXPECT_FALSE(MakeGapReport("m", "h", 3, 0).ratio);
  EXPECT_DOUBLE_EQ(*MakeGapReport("m", "h", 0, 0).ratio, 1.0);
}

TEST(GapReport, JsonRoundTrip) {
  for (GapReport r : {MakeGapReport("toy", "abc", 7, 5, 1.5, 2.25),
                      MakeGapReport("x", "00", 2, 0)}) {
    nlohmann::json j = r.ToJson();
    for (const char* key : {"model", "hash", "ub", "lb", "ratio", "status",
                            "t_last_ub_s", "t_last_lb_s"}) {
      EXPECT_TRUE(j.contains(key)) << key;
    }
    EXPECT_EQ(GapReport::FromJson(nlohmann::json::parse(j.dump())), r);
  }
}

TEST(CheckDuality, MatchingBounds) {
  FeatureModel m = fixtures::Free(3);
  InteractionUniverse u = EnumerateUniverse(m, 2);
  Sample s{Cfg({1, 2, 3}), Cfg({1, -2, -3}), Cfg({-1, 2, -3}),
           Cfg({-1, -2, 3})};
  MutexSet e;
  e.interactions = Set({{1, 2}, {1, -2}, {-1, 2}, {-1, -2}});
  DualityCheck d = CheckDuality(s, e, m, u);
  ASSERT_TRUE(d.ok()) << d.message;
  EXPECT_EQ(d.report->status, "optimal");
}

TEST(CheckDuality, ToyModelIsTight) {
  FeatureModel m = fixtures::Toy4();
  InteractionUniverse u = EnumerateUniverse(m, 2);
  MutexSet four;
  four.interactions = Set({{-1, -3}, {-1, -4}, {1, 2}, {-2, -3}});
  DualityCheck d = CheckDuality(fixtures::Toy4Optimal(), four, m, u);
  ASSERT_TRUE(d.ok()) << d.message;
  EXPECT_EQ(d.report->status, "gap");
  EXPECT_DOUBLE_EQ(*d.report->ratio, 1.25);
  // The largest exclusive set has five members, so the example is optimal.
  EXPECT_EQ(oracle::MaxExclusiveSet(u.valid(), oracle::ValidConfigurations(m)),
            5);
  MutexSet five = four;
  five.interactions.push_back(Interaction{-2, 3});
  std::sort(five.interactions.begin(), five.interactions.end());
  DualityCheck e = CheckDuality(fixtures::Toy4Optimal(), five, m, u);
  ASSERT_TRUE(e.ok()) << e.message;
  EXPECT_EQ(e.report->status, "optimal");
}

TEST(CheckDuality, Failures) {
  FeatureModel m = fixtures::Toy4();
  InteractionUniverse u = EnumerateUniverse(m, 2);
  MutexSet ok;
  ok.interactions = Set({{1, 2}});
  Sample gap = fixtures::Toy4Optimal();
  gap.pop_back();
  EXPECT_EQ(CheckDuality(gap, ok, m, u).error, CertificateError::kCoverageGap);
  Sample invalid = fixtures::Toy4Optimal();
  invalid.push_back(Cfg({-1, -2, 3, 4}));
  EXPECT_EQ(CheckDuality(invalid, ok, m, u).error,
            CertificateError::kInvalidConfiguration);
  MutexSet compatible;
  compatible.interactions = Set({{1, 2}, {3, 4}});
  DualityCheck d = CheckDuality(fixtures::Toy4Optimal(), compatible, m, u);
  EXPECT_EQ(d.error, CertificateError::kMutexViolation);
  EXPECT_FALSE(d.report);
  MutexSet bad;
  bad.interactions = Set({{-1, -2}});
  EXPECT_EQ(CheckDuality(fixtures::Toy4Optimal(), bad, m, u).error,
            CertificateError::kInvalidMember);
}

TEST(Files, RoundTrip) {
  FeatureModel m = fixtures::Toy4();
  SampleFile s{"toy4", m.ContentHash(), fixtures::Toy4Optimal()};
  std::string text = FormatSampleFile(s);
  EXPECT_EQ(text.substr(0, text.find('\n')), "sample toy4 5");
  SampleFile back = ParseSampleFile(text);
  EXPECT_EQ(back.model_name, "toy4");
  EXPECT_EQ(back.hash, s.hash);
  EXPECT_EQ(back.sample, s.sample);

  CertificateFile c{"toy4", 2, m.ContentHash(), {}};
  c.set.interactions = Set({{-1, -3}, {1, 2}});
  CertificateFile cb = ParseCertificateFile(FormatCertificateFile(c));
  EXPECT_EQ(cb.set.interactions, c.set.interactions);
  EXPECT_EQ(cb.t, 2);
  EXPECT_EQ(cb.hash, c.hash);
}

TEST(Files, ParseErrors) {
  EXPECT_THROW(ParseSampleFile("sample toy 2\n1 2\n"), ModelError);
  EXPECT_THROW(ParseSampleFile("lb-cert toy 2 0\n"), ModelError);
  EXPECT_THROW(ParseSampleFile("sample toy 1\n1 x\n"), ModelError);
  EXPECT_THROW(ParseCertificateFile("lb-cert toy 2 1\n1 2 3\n"), ModelError);
  EXPECT_THROW(ParseCertificateFile(""), ModelError);
}

TEST(VerifyArtifacts, NameAndHashChecks) {
  FeatureModel m = fixtures::Toy4();
  SampleFile s{"toy4", m.ContentHash(), fixtures::Toy4Optimal()};
  CertificateFile c{"toy4", 2, m.ContentHash(), {}};
  c.set.interactions = Set({{-1, -3}, {-1, -4}, {1, 2}, {-2, -3}, {-2, 3}});
  DualityCheck ok = VerifyArtifacts(s, c, m);
  ASSERT_TRUE(ok.ok()) << ok.message;
  EXPECT_EQ(ok.report->status, "optimal");

  CertificateFile other = c;
  other.model_name = "lb3";
  EXPECT_EQ(VerifyArtifacts(s, other, m).error,
            CertificateError::kModelMismatch);
  SampleFile stale = s;
  stale.hash = "0000000000000000";
  EXPECT_EQ(VerifyArtifacts(stale, c, m).error,
            CertificateError::kHashMismatch);
}

// Optimal reports never disagree with an exhaustive minimum cover.
TEST(CheckDuality, OptimalMeansMinimum) {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 40; ++trial) {
    FeatureModel m = oracle::RandomSatisfiableModel(rng, 4, 8, 0.5, 2.5);
    InteractionUniverse u = EnumerateUniverse(m, 2);
    SamplnsResult r = Samplns(u, SamplnsOptions{});
    DualityCheck d = CheckDuality(r.sample, r.lower_bound, m, u);
    ASSERT_TRUE(d.ok()) << d.message;
    if (d.report->status != "optimal") continue;
    auto min = oracle::MinCoverSize(u.valid(), oracle::ValidConfigurations(m));
    ASSERT_TRUE(min);
    EXPECT_EQ(*min, d.report->ub) << ToDimacs(m);
  }
}

}  // namespace
}  // namespace samplns
