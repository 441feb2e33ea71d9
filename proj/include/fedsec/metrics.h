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

#ifndef FEDSEC_METRICS_H_
#define FEDSEC_METRICS_H_

#include <cstdint>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "fedsec/config.h"

namespace fedsec {

// One row per (seed, method, round).
struct MetricsRecord {
  std::uint64_t seed = 0;
  std::string method;
  int round = 0;
  double global_accuracy = 0.0;
  double global_loss = 0.0;
  double adv_accuracy = 0.0;
  double round_latency_ms = 0.0;
  std::uint64_t uplink_bytes = 0;
  std::string mode;
  int flagged_count = 0;
  int fallback_events = 0;

  friend bool operator==(const MetricsRecord&, const MetricsRecord&) = default;
};

// Column order of the CSV format, also the key order of each JSONL object.
const std::vector<std::string>& MetricsColumns();

// Floats are printed with 9 significant digits ("%.9g").
std::string FormatDouble(double v);
std::string CsvHeader();
std::string ToCsvRow(const MetricsRecord& r);
std::string ToJsonLine(const MetricsRecord& r);

// Streams records to a file as they are produced. Throws IoError when the
// path cannot be opened. The CSV header is written on construction, so an
// empty run still yields a header-only file.
class MetricsWriter {
 public:
  MetricsWriter(const std::string& path, OutputFormat format);

  void Write(const MetricsRecord& r);
  std::size_t count() const { return count_; }

 private:
  std::ofstream out_;
  OutputFormat format_;
  std::size_t count_ = 0;
};

void Emit(std::span<const MetricsRecord> records, OutputFormat format,
          const std::string& path);

std::vector<MetricsRecord> ReadMetricsCsv(const std::string& path);
std::vector<MetricsRecord> ParseMetricsCsv(const std::string& text);

}  // namespace fedsec

#endif  // FEDSEC_METRICS_H_
