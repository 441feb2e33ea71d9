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

#include "fedsec/llm_scorer.h"

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <string>
#include <utility>

#include "httplib.h"
#include "json.hpp"
#include "fedsec/prompts.h"

namespace fedsec {
namespace {

using nlohmann::json;

struct ParsedUrl {
  std::string origin;  // scheme://host:port
  std::string path;
};

std::optional<ParsedUrl> SplitUrl(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) return std::nullopt;
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return ParsedUrl{url, "/"};
  return ParsedUrl{url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

std::string_view PromptTemplate(std::string_view prompt_id) {
  if (prompt_id == "node_scoring_v1") return kNodeScoringV1Prompt;
  return {};
}

std::string BuildScoringRequest(int round,
                                std::span<const NodeSummary> summaries,
                                std::span<const int> flagged,
                                std::string_view prompt_id) {
  json body;
  body["round"] = round;
  body["prompt_id"] = std::string(prompt_id);
  body["instructions"] = std::string(PromptTemplate(prompt_id));
  json list = json::array();
  for (const NodeSummary& s : summaries) {
    const bool is_flagged =
        std::find(flagged.begin(), flagged.end(), s.node_id) != flagged.end();
    list.push_back({{"node_id", s.node_id},
                    {"performance", s.performance},
                    {"update_l2", s.update_l2},
                    {"drift", s.drift},
                    {"delay_ms", s.delay_ms},
                    {"rounds_since_upload", s.rounds_since_upload},
                    {"flagged", is_flagged}});
  }
  body["summaries"] = std::move(list);
  return body.dump();
}

std::optional<std::vector<double>> ParseScoreReply(std::string_view body,
                                                   std::size_t expected,
                                                   std::string* error) {
  const json reply = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (reply.is_discarded() || !reply.is_array()) {
    *error = "reply is not a JSON array";
    return std::nullopt;
  }
  if (reply.size() != expected) {
    *error = "reply has " + std::to_string(reply.size()) + " scores, expected " +
             std::to_string(expected);
    return std::nullopt;
  }
  std::vector<double> scores;
  scores.reserve(expected);
  for (const json& v : reply) {
    if (!v.is_number()) {
      *error = "reply contains a non-numeric score";
      return std::nullopt;
    }
    const double s = v.get<double>();
    if (!std::isfinite(s) || s < 0.0 || s > 1.0) {
      *error = "reply score out of [0, 1]";
      return std::nullopt;
    }
    scores.push_back(s);
  }
  return scores;
}

ExternalLlmScorer::ExternalLlmScorer(ExternalScorerConfig config,
                                     ScoreKnobs fallback_knobs)
    : config_(std::move(config)), fallback_(fallback_knobs) {}

NodeScorer::Result ExternalLlmScorer::Score(
    int round, std::span<const NodeSummary> summaries,
    std::span<const int> flagged) {
  std::string error;
  std::optional<std::vector<double>> scores;
  const std::optional<ParsedUrl> url = SplitUrl(config_.endpoint);
  if (!url) {
    error = "invalid endpoint '" + config_.endpoint + "'";
  } else {
    httplib::Client client(url->origin);
    if (!client.is_valid()) {
      error = "unsupported endpoint '" + config_.endpoint + "'";
    } else {
      const auto secs = static_cast<time_t>(config_.timeout_s);
      const auto usecs = static_cast<time_t>(
          (config_.timeout_s - static_cast<double>(secs)) * 1e6);
      client.set_connection_timeout(secs, usecs);
      client.set_read_timeout(secs, usecs);
      client.set_write_timeout(secs, usecs);
      httplib::Headers headers;
      if (!config_.token.empty()) {
        headers.emplace("Authorization", "Bearer " + config_.token);
      }
      const std::string body =
          BuildScoringRequest(round, summaries, flagged, config_.prompt_id);
      auto res = client.Post(url->path, headers, body, "application/json");
      if (!res) {
        error = "transport error: " + httplib::to_string(res.error());
      } else if (res->status != 200) {
        error = "HTTP status " + std::to_string(res->status);
      } else {
        scores = ParseScoreReply(res->body, summaries.size(), &error);
      }
    }
  }
  if (scores) return {std::move(*scores), false, {}};

  ++fallback_count_;
  std::clog << "[fedsec] round " << round
            << ": external scorer fallback to heuristic (" << error << ")\n";
  Result r = fallback_.Score(round, summaries, flagged);
  r.fell_back = true;
  r.message = std::move(error);
  return r;
}

ExternalScorerConfig WithEnvironment(ExternalScorerConfig config) {
  if (config.endpoint.empty()) {
    if (const char* v = std::getenv(std::string(kScorerEndpointEnv).c_str())) {
      config.endpoint = v;
    }
  }
  if (config.token.empty()) {
    if (const char* v = std::getenv(std::string(kScorerTokenEnv).c_str())) {
      config.token = v;
    }
  }
  return config;
}

}  // namespace fedsec
