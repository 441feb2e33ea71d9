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

#include "fedsec/aggregation.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "fedsec/errors.h"
#include "fedsec/masking.h"
#include "fedsec/paillier.h"
#include "gtest/gtest.h"

namespace fedsec {
namespace {

std::vector<ParamVector> RandomUpdates(int n, std::size_t d, std::mt19937_64& gen,
                                       double sd = 1.0) {
  std::normal_distribution<double> g(0.0, sd);
  std::vector<ParamVector> out;
  for (int i = 0; i < n; ++i) {
    std::vector<double> v(d);
    for (double& x : v) x = g(gen);
    out.emplace_back(std::move(v));
  }
  return out;
}

std::vector<int> Ids(int n) {
  std::vector<int> ids(static_cast<std::size_t>(n));
  std::iota(ids.begin(), ids.end(), 0);
  return ids;
}

WeightVector RandomWeights(int n, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> w(static_cast<std::size_t>(n));
  for (double& x : w) x = u(gen);
  const double s = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= s;
  return WeightVector(w, Ids(n));
}

double MaxAbs(const std::vector<ParamVector>& u) {
  double m = 0.0;
  for (const ParamVector& v : u) {
    for (double x : v) m = std::max(m, std::fabs(x));
  }
  return m;
}

TEST(WeightVectorTest, Validation) {
  EXPECT_NO_THROW(WeightVector({0.25, 0.75}, {0, 1}));
  EXPECT_THROW(WeightVector({0.5, 0.6}, {0, 1}), InvalidArgument);
  EXPECT_THROW(WeightVector({-0.5, 1.5}, {0, 1}), InvalidArgument);
  EXPECT_THROW(WeightVector({0.5, 0.5}, {1, 1}), InvalidArgument);
  EXPECT_THROW(WeightVector({1.0}, {0, 1}), InvalidArgument);
  const WeightVector u = WeightVector::Uniform({3, 1, 2});
  EXPECT_DOUBLE_EQ(u.WeightOf(1), 1.0 / 3.0);
}

TEST(FedAvgTest, Examples) {
  const std::vector<ParamVector> mid = {ParamVector({0.0}), ParamVector({2.0})};
  EXPECT_EQ(FedAvg(mid), ParamVector({1.0}));
  const std::vector<ParamVector> same(4, ParamVector({0.5, -1.25}));
  EXPECT_EQ(FedAvg(same), ParamVector({0.5, -1.25}));
  EXPECT_THROW(FedAvg(std::vector<ParamVector>{}), InvalidArgument);
}

TEST(FedAvgTest, MatchesIndependentMean) {
  std::mt19937_64 gen(1);
  const std::vector<ParamVector> u = RandomUpdates(7, 5, gen);
  const ParamVector got = FedAvg(u);
  for (std::size_t k = 0; k < 5; ++k) {
    long double acc = 0.0L;
    for (const ParamVector& v : u) acc += v[k];
    EXPECT_NEAR(got[k], static_cast<double>(acc / 7.0L), 1e-12);
  }
}

TEST(WeightedAggregateTest, Examples) {
  std::mt19937_64 gen(2);
  const std::vector<ParamVector> u = RandomUpdates(4, 3, gen);
  const ParamVector uni = WeightedAggregate(u, WeightVector::Uniform(Ids(4)));
  const ParamVector avg = FedAvg(u);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(uni[k], avg[k], 1e-15);
  EXPECT_EQ(WeightedAggregate(u, WeightVector({0, 0, 1, 0}, Ids(4))), u[2]);
  const std::vector<ParamVector> two = {ParamVector({4.0}), ParamVector({0.0})};
  EXPECT_EQ(WeightedAggregate(two, WeightVector({0.75, 0.25}, {0, 1})),
            ParamVector({3.0}));
  EXPECT_THROW(WeightedAggregate(two, WeightVector::Uniform(Ids(3))),
               InvalidArgument);
}

TEST(WeightedAggregateTest, ConvexCombination) {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 6;
    const std::vector<ParamVector> u = RandomUpdates(n, 6, gen);
    const ParamVector r = WeightedAggregate(u, RandomWeights(n, gen));
    for (std::size_t k = 0; k < 6; ++k) {
      double lo = u[0][k], hi = u[0][k];
      for (const ParamVector& v : u) {
        lo = std::min(lo, v[k]);
        hi = std::max(hi, v[k]);
      }
      EXPECT_GE(r[k], lo - 1e-12);
      EXPECT_LE(r[k], hi + 1e-12);
    }
  }
}

TEST(WeightedAggregateTest, PermutationInvariantBitwise) {
  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + trial % 5;
    const std::vector<ParamVector> u = RandomUpdates(n, 8, gen);
    const WeightVector w = RandomWeights(n, gen);
    std::vector<std::size_t> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), gen);
    std::vector<ParamVector> pu;
    std::vector<double> pw;
    std::vector<int> pid;
    for (std::size_t p : perm) {
      pu.push_back(u[p]);
      pw.push_back(w[p]);
      pid.push_back(w.node_ids()[p]);
    }
    EXPECT_EQ(WeightedAggregate(u, w), WeightedAggregate(pu, WeightVector(pw, pid)));
  }
}

TEST(SecureWeightedAggregateTest, Examples) {
  const KeyPair kp = GenerateKeyPair(256, 5);
  const FixedPointEncoding enc;
  PaillierRandom rng(6);
  const ParamVector v({0.123456, -7.5, 3.0});
  const std::vector<CipherVector> one = {EncodeVector(v, enc, kp.pub, rng)};
  const ParamVector r1 = SecureWeightedAggregate(one, WeightVector({1.0}, {0}), kp, enc);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_LE(std::fabs(r1[k] - v[k]), std::ldexp(1.0, -24));
  }

  const std::vector<CipherVector> two = {
      EncodeVector(ParamVector({4.0}), enc, kp.pub, rng),
      EncodeVector(ParamVector({0.0}), enc, kp.pub, rng)};
  const ParamVector r2 =
      SecureWeightedAggregate(two, WeightVector({0.75, 0.25}, {0, 1}), kp, enc);
  EXPECT_LE(std::fabs(r2[0] - 3.0), SecureAggregationBound(2, 4.0, enc));

  std::mt19937_64 gen(7);
  const std::vector<ParamVector> u = RandomUpdates(4, 5, gen);
  std::vector<CipherVector> c;
  for (const ParamVector& x : u) c.push_back(EncodeVector(x, enc, kp.pub, rng));
  const ParamVector r4 = SecureWeightedAggregate(c, WeightVector::Uniform(Ids(4)), kp, enc);
  const ParamVector avg = FedAvg(u);
  for (std::size_t k = 0; k < 5; ++k) {
    EXPECT_LE(std::fabs(r4[k] - avg[k]), SecureAggregationBound(4, MaxAbs(u), enc));
  }
}

TEST(SecureWeightedAggregateTest, AgreesWithPlaintextOverRandomRounds) {
  const KeyPair kp = GenerateKeyPair(256, 8);
  const FixedPointEncoding enc;
  PaillierRandom rng(9);
  std::mt19937_64 gen(10);
  std::uniform_int_distribution<int> nd(2, 8);
  std::uniform_int_distribution<std::size_t> dd(4, 32);
  for (int round = 0; round < 30; ++round) {
    const int n = nd(gen);
    const std::size_t d = dd(gen);
    const std::vector<ParamVector> u = RandomUpdates(n, d, gen, 2.0);
    const WeightVector w = RandomWeights(n, gen);
    std::vector<CipherVector> c;
    for (const ParamVector& x : u) c.push_back(EncodeVector(x, enc, kp.pub, rng));
    const ParamVector secure = SecureWeightedAggregate(c, w, kp, enc);
    const ParamVector plain = WeightedAggregate(u, w);
    const double bound = SecureAggregationBound(static_cast<std::size_t>(n), MaxAbs(u), enc);
    for (std::size_t k = 0; k < d; ++k) {
      EXPECT_LE(std::fabs(secure[k] - plain[k]), bound) << "round " << round;
    }
  }
}

TEST(SecureWeightedAggregateTest, GuardRejectsSmallModulus) {
  const KeyPair kp = GenerateKeyPair(64, 2);
  // 1024 * 2^16 * 2^40 = 2^66 exceeds a 64-bit modulus.
  const FixedPointEncoding enc{40, 1024.0};
  PaillierRandom rng(1);
  const std::vector<CipherVector> c = {EncodeVector(ParamVector({1.0}), enc, kp.pub, rng)};
  EXPECT_THROW(SecureWeightedAggregate(c, WeightVector({1.0}, {0}), kp, enc),
               ConfigError);
}

TEST(QuantizeWeightsTest, SixteenBitFixedPoint) {
  const std::vector<mpz_class> k = QuantizeWeights(WeightVector({0.75, 0.25}, {0, 1}));
  EXPECT_EQ(k[0], 49152);
  EXPECT_EQ(k[1], 16384);
}

TEST(MaskedWeightedAggregateTest, MatchesPlaintextWithinResolution) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 6;
    const std::vector<ParamVector> u = RandomUpdates(n, 7, gen);
    const WeightVector w = RandomWeights(n, gen);
    const ParamVector masked =
        MaskedWeightedAggregate(u, w, MaskSchedule{1, static_cast<std::uint64_t>(trial)}, 24);
    const ParamVector plain = WeightedAggregate(u, w);
    for (std::size_t k = 0; k < 7; ++k) {
      EXPECT_LE(std::fabs(masked[k] - plain[k]), n * std::ldexp(1.0, -24));
    }
  }
}

}  // namespace
}  // namespace fedsec
