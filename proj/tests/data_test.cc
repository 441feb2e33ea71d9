// Copyright 2026 The FedSec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fedsec/data.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "fedsec/errors.h"
#include "fedsec/experiment.h"
#include "gtest/gtest.h"

namespace fedsec {
namespace {

TEST(CsvTest, ParsesRows) {
  const Dataset d = ParseCsv("a,b,label\n1.5,-2,0\n\n0,3e-1,2\n");
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.num_classes(), 3);
  EXPECT_EQ(d[0].features, (std::vector<double>{1.5, -2.0}));
  EXPECT_EQ(d[1].features, (std::vector<double>{0.0, 0.3}));
  EXPECT_EQ(d[1].label, 2);
}

TEST(CsvTest, ErrorsNameTheLine) {
  const auto message = [](const std::string& text) {
    try {
      ParseCsv(text);
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(message("a,label\n1,0\n2\n").find("line 3"), std::string::npos);
  EXPECT_NE(message("a,label\n1,0\nx,1\n").find("line 3"), std::string::npos);
  EXPECT_NE(message("a,label\n1,-1\n").find("line 2"), std::string::npos);
  EXPECT_NE(message("a,b\n1,0\n").find("label"), std::string::npos);
  EXPECT_THROW(ParseCsv(""), ParseError);
  EXPECT_THROW(ParseCsv("a,label\n"), ParseError);
  EXPECT_THROW(LoadCsv("/nonexistent/data.csv"), IoError);
}

TEST(SynthesizeTest, ShapeAndDeterminism) {
  SynthSpec spec;
  spec.num_samples = 300;
  spec.num_classes = 3;
  Rng a(11), b(11);
  const Dataset da = Synthesize(spec, a);
  const Dataset db = Synthesize(spec, b);
  ASSERT_EQ(da.size(), 300u);
  EXPECT_EQ(da.num_classes(), 3);
  for (std::size_t i = 0; i < da.size(); ++i) {
    EXPECT_EQ(da[i].features, db[i].features);
    EXPECT_EQ(da[i].label, db[i].label);
    EXPECT_EQ(da[i].features.size(), 8u);
  }
}

TEST(PartitionTest, DisjointCoverOfTrainingSet) {
  SynthSpec spec;
  spec.num_samples = 1000;
  for (double skew : {0.5, 1.0, 10.0}) {
    Rng rng(3);
    const Dataset d = Synthesize(spec, rng);
    const auto parts = DirichletPartition(d, 7, skew, rng);
    ASSERT_EQ(parts.size(), 7u);
    std::vector<std::size_t> all;
    for (const auto& p : parts) {
      EXPECT_FALSE(p.empty());
      all.insert(all.end(), p.begin(), p.end());
    }
    std::sort(all.begin(), all.end());
    std::vector<std::size_t> expected(d.size());
    std::iota(expected.begin(), expected.end(), 0);
    EXPECT_EQ(all, expected) << "skew " << skew;
  }
}

TEST(PartitionTest, LargeConcentrationMatchesGlobalMix) {
  SynthSpec spec;
  spec.num_samples = 6000;
  spec.num_classes = 3;
  spec.label_noise = 0.0;
  Rng rng(4);
  const Dataset d = Synthesize(spec, rng);
  std::vector<double> global(3, 0.0);
  for (const Sample& s : d.samples()) global[static_cast<std::size_t>(s.label)] += 1.0 / d.size();
  const auto parts = DirichletPartition(d, 5, 1000.0, rng);
  for (const auto& p : parts) {
    std::vector<double> count(3, 0.0);
    for (std::size_t i : p) count[static_cast<std::size_t>(d[i].label)] += 1.0;
    for (std::size_t k = 0; k < 3; ++k) {
      EXPECT_NEAR(count[k] / p.size(), global[k], 0.05);
    }
  }
}

TEST(PartitionTest, SmallConcentrationSkewsClasses) {
  SynthSpec spec;
  spec.num_samples = 2000;
  spec.label_noise = 0.0;
  Rng rng(5);
  const Dataset d = Synthesize(spec, rng);
  const auto parts = DirichletPartition(d, 4, 0.3, rng);
  double max_dev = 0.0;
  for (const auto& p : parts) {
    double ones = 0.0;
    for (std::size_t i : p) ones += d[i].label;
    max_dev = std::max(max_dev, std::fabs(ones / p.size() - 0.5));
  }
  EXPECT_GT(max_dev, 0.1);
}

TEST(PartitionTest, Errors) {
  Rng rng(6);
  const Dataset d({{{0.0}, 0}, {{1.0}, 1}}, 2);
  EXPECT_THROW(DirichletPartition(d, 0, 1.0, rng), InvalidArgument);
  EXPECT_THROW(DirichletPartition(d, 2, 0.0, rng), InvalidArgument);
  std::vector<std::string> warnings;
  EXPECT_THROW(DirichletPartition(d, 5, 1.0, rng, &warnings), ConfigError);
  EXPECT_FALSE(warnings.empty());
}

TEST(LoadOrSynthesizeTest, SplitsAreDisjointAndDeterministic) {
  ExperimentConfig c;
  c.nodes = 5;
  c.data.synth.num_samples = 500;
  const FederatedData a = LoadOrSynthesize(c, 9);
  const FederatedData b = LoadOrSynthesize(c, 9);
  EXPECT_EQ(a.test.size(), 100u);
  EXPECT_EQ(a.train.size(), 400u);
  EXPECT_EQ(a.partition, b.partition);
  ASSERT_EQ(a.nodes.size(), 5u);
  std::size_t total = 0;
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    const NodeData& n = a.nodes[i];
    EXPECT_FALSE(n.train.empty());
    EXPECT_EQ(n.train.size() + n.validation.size(), a.partition[i].size());
    total += a.partition[i].size();
    for (std::size_t k = 0; k < n.train.size(); ++k) {
      EXPECT_EQ(n.train[k].features, b.nodes[i].train[k].features);
    }
  }
  EXPECT_EQ(total, a.train.size());
  EXPECT_NE(LoadOrSynthesize(c, 10).partition, a.partition);
}

TEST(LoadOrSynthesizeTest, ReadsCsvSource) {
  const std::string path = testing::TempDir() + "/fedsec_data_test.csv";
  {
    std::FILE* f = std::fopen(path.c_str(), "w");
    ASSERT_NE(f, nullptr);
    std::fputs("x,label\n", f);
    for (int i = 0; i < 40; ++i) std::fprintf(f, "%d,%d\n", i, i % 2);
    std::fclose(f);
  }
  ExperimentConfig c;
  c.nodes = 2;
  c.data.source = DataSourceKind::kCsv;
  c.data.csv_path = path;
  const FederatedData fed = LoadOrSynthesize(c, 1);
  EXPECT_EQ(fed.train.size() + fed.test.size(), 40u);
  EXPECT_EQ(fed.train.feature_dim(), 1u);
}

TEST(LearnabilityTest, SeparableClustersReachHighAccuracy) {
  ExperimentConfig c;
  c.nodes = 5;
  c.rounds = 50;
  c.data.synth.cluster_separation = 6.0;
  c.data.synth.label_noise = 0.0;
  double best = 0.0;
  RunExperiment(c, MethodId::kVfl, 1, [&](const MetricsRecord& r) {
    best = std::max(best, r.global_accuracy);
  });
  EXPECT_GT(best, 0.95);
}

}  // namespace
}  // namespace fedsec
