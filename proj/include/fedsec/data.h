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

#ifndef FEDSEC_DATA_H_
#define FEDSEC_DATA_H_

#include <cstddef>
#include <string>
#include <vector>

#include "fedsec/config.h"
#include "fedsec/model.h"
#include "fedsec/random.h"

namespace fedsec {

// Reads a header row followed by rows of m decimal features and an integer
// `label` as the final column (Edge-IIoTset style exports after external
// preprocessing). The class count is max(label) + 1, at least 2. Errors name
// the 1-based line number.
Dataset LoadCsv(const std::string& path);
Dataset ParseCsv(const std::string& text);

// Gaussian clusters with unit covariance, one per class, centered at
// cluster_separation / 2 along a random direction per class (antipodal for
// two classes). Labels are balanced before label noise is applied.
Dataset Synthesize(const SynthSpec& spec, Rng& rng);

struct Split {
  Dataset train;
  Dataset test;
};

// Shuffled split; both sides are non-empty.
Split TrainTestSplit(const Dataset& data, double test_fraction, Rng& rng);

// For every class, node shares are drawn from Dirichlet(skew, ..., skew) and
// the class's shuffled indices are cut accordingly. Partitions with an empty
// node are redrawn (with a warning appended to `warnings`) up to 10 times,
// then ConfigError.
std::vector<std::vector<std::size_t>> DirichletPartition(
    const Dataset& data, int num_nodes, double skew, Rng& rng,
    std::vector<std::string>* warnings = nullptr);

struct NodeData {
  Dataset train;
  Dataset validation;  // may be empty
};

struct FederatedData {
  std::vector<NodeData> nodes;
  Dataset test;
  Dataset train;  // union of the node splits
  std::vector<std::vector<std::size_t>> partition;  // indices into `train`
  std::vector<std::string> warnings;
};

// Deterministic for a given config and seed.
FederatedData LoadOrSynthesize(const ExperimentConfig& config,
                               std::uint64_t seed);

}  // namespace fedsec

#endif  // FEDSEC_DATA_H_
