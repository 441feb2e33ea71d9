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

#ifndef FEDSEC_RANDOM_H_
#define FEDSEC_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace fedsec {

using Rng = std::mt19937_64;

// Stream tags keep independent consumers of randomness from sharing state, so
// adding draws in one stream never shifts another.
enum class Stream : std::uint64_t {
  kData = 1,
  kInit = 2,
  kPoison = 3,
  kNodeTrain = 4,
  kEncrypt = 5,
  kMask = 6,
  kDpNoise = 7,
  kNetwork = 8,
  kKeygen = 9,
};

// splitmix64 finalizer.
constexpr std::uint64_t Mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Folds a base seed and any number of tags into one 64-bit seed.
inline std::uint64_t DeriveSeed(std::uint64_t base,
                                std::initializer_list<std::uint64_t> tags) {
  std::uint64_t h = Mix64(base);
  for (std::uint64_t t : tags) h = Mix64(h ^ Mix64(t));
  return h;
}

inline Rng MakeRng(std::uint64_t base, Stream stream,
                   std::initializer_list<std::uint64_t> tags = {}) {
  std::uint64_t h = DeriveSeed(base, {static_cast<std::uint64_t>(stream)});
  for (std::uint64_t t : tags) h = Mix64(h ^ Mix64(t));
  return Rng(h);
}

}  // namespace fedsec

#endif  // FEDSEC_RANDOM_H_
