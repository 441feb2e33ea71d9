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

#include "fedsec/metrics.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "fedsec/errors.h"

namespace fedsec {

const std::vector<std::string>& MetricsColumns() {
  static const std::vector<std::string> kColumns = {
      "seed",         "method",           "round",        "global_accuracy",
      "global_loss",  "adv_accuracy",     "round_latency_ms",
      "uplink_bytes", "mode",             "flagged_count", "fallback_events"};
  return kColumns;
}

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string CsvHeader() {
  std::string out;
  for (const std::string& c : MetricsColumns()) {
    if (!out.empty()) out += ',';
    out += c;
  }
  return out;
}

std::string ToCsvRow(const MetricsRecord& r) {
  std::ostringstream os;
  os << r.seed << ',' << r.method << ',' << r.round << ','
     << FormatDouble(r.global_accuracy) << ',' << FormatDouble(r.global_loss)
     << ',' << FormatDouble(r.adv_accuracy) << ','
     << FormatDouble(r.round_latency_ms) << ',' << r.uplink_bytes << ','
     << r.mode << ',' << r.flagged_count << ',' << r.fallback_events;
  return os.str();
}

std::string ToJsonLine(const MetricsRecord& r) {
  // Doubles go through FormatDouble so both formats carry 9 digits.
  auto num = [](double v) { return nlohmann::json::parse(FormatDouble(v)); };
  nlohmann::ordered_json j;
  j["seed"] = r.seed;
  j["method"] = r.method;
  j["round"] = r.round;
  j["global_accuracy"] = num(r.global_accuracy);
  j["global_loss"] = num(r.global_loss);
  j["adv_accuracy"] = num(r.adv_accuracy);
  j["round_latency_ms"] = num(r.round_latency_ms);
  j["uplink_bytes"] = r.uplink_bytes;
  j["mode"] = r.mode;
  j["flagged_count"] = r.flagged_count;
  j["fallback_events"] = r.fallback_events;
  return j.dump();
}

MetricsWriter::MetricsWriter(const std::string& path, OutputFormat format)
    : out_(path, std::ios::out | std::ios::trunc), format_(format) {
  if (!out_) throw IoError("cannot write metrics to '" + path + "'");
  if (format_ == OutputFormat::kCsv) out_ << CsvHeader() << '\n';
}

void MetricsWriter::Write(const MetricsRecord& r) {
  out_ << (format_ == OutputFormat::kCsv ? ToCsvRow(r) : ToJsonLine(r)) << '\n';
  out_.flush();
  if (!out_) throw IoError("metrics write failed");
  ++count_;
}

void Emit(std::span<const MetricsRecord> records, OutputFormat format,
          const std::string& path) {
  MetricsWriter w(path, format);
  for (const MetricsRecord& r : records) w.Write(r);
}

std::vector<MetricsRecord> ParseMetricsCsv(const std::string& text) {
  std::stringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != CsvHeader()) {
    throw ParseError("metrics csv: unexpected header");
  }
  std::vector<MetricsRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != MetricsColumns().size()) {
      throw ParseError("metrics csv line " + std::to_string(line_no) +
                       ": wrong column count");
    }
    try {
      MetricsRecord r;
      r.seed = std::stoull(cells[0]);
      r.method = cells[1];
      r.round = std::stoi(cells[2]);
      r.global_accuracy = std::stod(cells[3]);
      r.global_loss = std::stod(cells[4]);
      r.adv_accuracy = std::stod(cells[5]);
      r.round_latency_ms = std::stod(cells[6]);
      r.uplink_bytes = std::stoull(cells[7]);
      r.mode = cells[8];
      r.flagged_count = std::stoi(cells[9]);
      r.fallback_events = std::stoi(cells[10]);
      out.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw ParseError("metrics csv line " + std::to_string(line_no) +
                       ": malformed value");
    }
  }
  return out;
}

std::vector<MetricsRecord> ReadMetricsCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseMetricsCsv(ss.str());
}

}  // namespace fedsec
