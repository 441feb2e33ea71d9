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
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string_view>
#include <utility>

#include "fedsec/errors.h"

namespace fedsec {
namespace {

constexpr int kPartitionAttempts = 10;

std::vector<std::string> SplitCells(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string_view TrimView(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

template <typename T>
bool ParseCell(std::string_view s, T* out) {
  s = TrimView(s);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

Dataset ParseCsv(const std::string& text) {
  std::stringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!TrimView(line).empty()) break;
  }
  if (line_no == 0 || TrimView(line).empty()) {
    throw ParseError("csv: missing header row");
  }
  const std::vector<std::string> header = SplitCells(line);
  width = header.size();
  if (width < 2 || TrimView(header.back()) != "label") {
    throw ParseError("csv line " + std::to_string(line_no) +
                     ": header must end with a 'label' column");
  }

  std::vector<Sample> samples;
  int max_label = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (TrimView(line).empty()) continue;
    const std::vector<std::string> cells = SplitCells(line);
    if (cells.size() != width) {
      throw ParseError("csv line " + std::to_string(line_no) + ": expected " +
                       std::to_string(width) + " cells, got " +
                       std::to_string(cells.size()));
    }
    Sample s;
    s.features.resize(width - 1);
    for (std::size_t k = 0; k + 1 < width; ++k) {
      if (!ParseCell(cells[k], &s.features[k]) || !std::isfinite(s.features[k])) {
        throw ParseError("csv line " + std::to_string(line_no) + ": column " +
                         std::to_string(k + 1) + " is not a number ('" +
                         cells[k] + "')");
      }
    }
    if (!ParseCell(cells.back(), &s.label) || s.label < 0) {
      throw ParseError("csv line " + std::to_string(line_no) +
                       ": label is not a non-negative integer ('" +
                       cells.back() + "')");
    }
    max_label = std::max(max_label, s.label);
    samples.push_back(std::move(s));
  }
  if (samples.empty()) throw ParseError("csv: no data rows");
  return Dataset(std::move(samples), std::max(2, max_label + 1));
}

Dataset LoadCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open csv '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseCsv(ss.str());
}

Dataset Synthesize(const SynthSpec& spec, Rng& rng) {
  const auto m = static_cast<std::size_t>(spec.input_dim);
  const auto c = static_cast<std::size_t>(spec.num_classes);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::vector<double>> centers(c, std::vector<double>(m));
  for (std::size_t k = 0; k < c; ++k) {
    if (c == 2 && k == 1) {
      for (std::size_t j = 0; j < m; ++j) centers[1][j] = -centers[0][j];
      break;
    }
    double norm = 0.0;
    for (double& v : centers[k]) {
      v = gauss(rng);
      norm += v * v;
    }
    norm = std::sqrt(norm);
    for (double& v : centers[k]) v *= 0.5 * spec.cluster_separation / norm;
  }
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_int_distribution<int> other(1, spec.num_classes - 1);
  std::vector<Sample> samples;
  samples.reserve(static_cast<std::size_t>(spec.num_samples));
  for (int i = 0; i < spec.num_samples; ++i) {
    Sample s;
    const int cls = i % spec.num_classes;
    s.features.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
      s.features[j] = centers[static_cast<std::size_t>(cls)][j] + gauss(rng);
    }
    s.label = cls;
    if (unif(rng) < spec.label_noise) {
      s.label = (cls + other(rng)) % spec.num_classes;
    }
    samples.push_back(std::move(s));
  }
  return Dataset(std::move(samples), spec.num_classes);
}

Split TrainTestSplit(const Dataset& data, double test_fraction, Rng& rng) {
  if (data.size() < 2) throw InvalidArgument("TrainTestSplit: need >= 2 samples");
  std::vector<std::size_t> idx(data.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  auto n_test = static_cast<std::size_t>(
      std::llround(test_fraction * static_cast<double>(data.size())));
  n_test = std::clamp<std::size_t>(n_test, 1, data.size() - 1);
  std::vector<std::size_t> test_idx(idx.begin(), idx.begin() + n_test);
  std::vector<std::size_t> train_idx(idx.begin() + n_test, idx.end());
  std::sort(test_idx.begin(), test_idx.end());
  std::sort(train_idx.begin(), train_idx.end());
  return {data.Subset(train_idx), data.Subset(test_idx)};
}

std::vector<std::vector<std::size_t>> DirichletPartition(
    const Dataset& data, int num_nodes, double skew, Rng& rng,
    std::vector<std::string>* warnings) {
  if (num_nodes < 1) throw InvalidArgument("DirichletPartition: no nodes");
  if (!(skew > 0.0)) throw InvalidArgument("DirichletPartition: skew <= 0");
  const auto n = static_cast<std::size_t>(num_nodes);
  std::vector<std::vector<std::size_t>> by_class(
      static_cast<std::size_t>(data.num_classes()));
  for (std::size_t i = 0; i < data.size(); ++i) {
    by_class[static_cast<std::size_t>(data[i].label)].push_back(i);
  }
  std::gamma_distribution<double> gamma(skew, 1.0);
  for (int attempt = 1; attempt <= kPartitionAttempts; ++attempt) {
    std::vector<std::vector<std::size_t>> parts(n);
    for (std::vector<std::size_t> members : by_class) {
      std::shuffle(members.begin(), members.end(), rng);
      std::vector<double> share(n);
      double total = 0.0;
      for (double& s : share) {
        s = gamma(rng);
        total += s;
      }
      if (!(total > 0.0)) {
        // Every gamma draw underflowed; fall back to an even split.
        std::fill(share.begin(), share.end(), 1.0);
        total = static_cast<double>(n);
      }
      std::size_t start = 0;
      double cumulative = 0.0;
      for (std::size_t node = 0; node < n; ++node) {
        cumulative += share[node];
        const std::size_t end =
            node + 1 == n
                ? members.size()
                : static_cast<std::size_t>(std::llround(
                      cumulative / total * static_cast<double>(members.size())));
        const std::size_t stop = std::clamp(end, start, members.size());
        parts[node].insert(parts[node].end(), members.begin() + start,
                           members.begin() + stop);
        start = stop;
      }
    }
    const bool any_empty = std::any_of(
        parts.begin(), parts.end(), [](const auto& p) { return p.empty(); });
    if (!any_empty) {
      for (auto& p : parts) std::sort(p.begin(), p.end());
      return parts;
    }
    if (warnings != nullptr) {
      warnings->push_back("partition attempt " + std::to_string(attempt) +
                          " left a node without data; redrawing");
    }
  }
  throw ConfigError("DirichletPartition: a node stayed empty after " +
                    std::to_string(kPartitionAttempts) + " attempts");
}

FederatedData LoadOrSynthesize(const ExperimentConfig& config,
                               std::uint64_t seed) {
  Rng rng = MakeRng(seed, Stream::kData);
  Dataset all = config.data.source == DataSourceKind::kCsv
                    ? LoadCsv(config.data.csv_path)
                    : Synthesize(config.data.synth, rng);
  Split split = TrainTestSplit(all, config.data.test_fraction, rng);
  FederatedData out;
  out.partition = DirichletPartition(split.train, config.nodes,
                                     config.data.synth.non_iid_skew, rng,
                                     &out.warnings);
  for (const std::vector<std::size_t>& part : out.partition) {
    std::vector<std::size_t> idx = part;
    std::shuffle(idx.begin(), idx.end(), rng);
    auto n_val = static_cast<std::size_t>(std::floor(
        config.data.validation_fraction * static_cast<double>(idx.size())));
    n_val = std::min(n_val, idx.size() - 1);
    std::vector<std::size_t> val(idx.begin(), idx.begin() + n_val);
    std::vector<std::size_t> tr(idx.begin() + n_val, idx.end());
    std::sort(val.begin(), val.end());
    std::sort(tr.begin(), tr.end());
    out.nodes.push_back({split.train.Subset(tr), split.train.Subset(val)});
  }
  out.test = std::move(split.test);
  out.train = std::move(split.train);
  return out;
}

}  // namespace fedsec
