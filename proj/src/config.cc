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

#include "fedsec/config.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <string_view>
#include <utility>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "fedsec/aggregation.h"
#include "fedsec/errors.h"

namespace fedsec {
namespace {

namespace pt = boost::property_tree;

std::string Lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T ParseNumber(const std::string& where, const std::string& raw) {
  const std::string s = Trim(raw);
  T v{};
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc() || ptr != end) {
    throw ConfigError(where + ": cannot parse '" + raw + "'");
  }
  return v;
}

// Binds INI keys of one section to setters and rejects unknown keys.
class SectionReader {
 public:
  explicit SectionReader(std::string section) : section_(std::move(section)) {}

  SectionReader& Double(const std::string& key, double* out) {
    handlers_[key] = [out](const std::string& where, const std::string& v) {
      *out = ParseNumber<double>(where, v);
    };
    return *this;
  }
  template <typename Int>
  SectionReader& Integer(const std::string& key, Int* out) {
    handlers_[key] = [out](const std::string& where, const std::string& v) {
      *out = ParseNumber<Int>(where, v);
    };
    return *this;
  }
  SectionReader& String(const std::string& key, std::string* out) {
    handlers_[key] = [out](const std::string&, const std::string& v) {
      *out = Trim(v);
    };
    return *this;
  }
  SectionReader& Custom(
      const std::string& key,
      std::function<void(const std::string&, const std::string&)> fn) {
    handlers_[key] = std::move(fn);
    return *this;
  }

  void Apply(const pt::ptree& tree) const {
    for (const auto& [key, node] : tree) {
      const std::string where = section_ + "." + key;
      auto it = handlers_.find(key);
      if (it == handlers_.end()) throw ConfigError("unknown key " + where);
      it->second(where, node.get_value<std::string>());
    }
  }

 private:
  std::string section_;
  std::map<std::string,
           std::function<void(const std::string&, const std::string&)>>
      handlers_;
};

PNorm ParsePNorm(const std::string& where, const std::string& v) {
  const std::string s = Lower(Trim(v));
  if (s == "inf" || s == "linf") return PNorm::kInf;
  if (s == "2" || s == "two" || s == "l2") return PNorm::kTwo;
  throw ConfigError(where + ": expected inf or 2, got '" + v + "'");
}

AttackKind ParseAttack(const std::string& where, const std::string& v) {
  const std::string s = Lower(Trim(v));
  if (s == "none") return AttackKind::kNone;
  if (s == "label_flip") return AttackKind::kLabelFlip;
  if (s == "grad_scale") return AttackKind::kGradScale;
  if (s == "grad_negate") return AttackKind::kGradNegate;
  throw ConfigError(where + ": unknown attack '" + v + "'");
}

bool ParseBool(const std::string& where, const std::string& v) {
  const std::string s = Lower(Trim(v));
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError(where + ": expected a boolean, got '" + v + "'");
}

SectionReader LinkReader(const std::string& section, LinkProfile* link) {
  SectionReader r(section);
  r.Double("base_ms", &link->base_ms)
      .Double("bytes_per_ms", &link->bytes_per_ms)
      .Double("jitter_ms", &link->jitter_ms);
  return r;
}

void Require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

std::vector<LinkProfile> ExperimentConfig::Links() const {
  std::vector<LinkProfile> out(static_cast<std::size_t>(std::max(nodes, 0)),
                               link);
  for (const auto& [id, profile] : link_overrides) {
    if (id >= 0 && id < nodes) out[static_cast<std::size_t>(id)] = profile;
  }
  return out;
}

std::vector<std::uint64_t> ParseSeedList(const std::string& text) {
  const std::string s = Trim(text);
  std::vector<std::uint64_t> out;
  if (const auto dots = s.find(".."); dots != std::string::npos) {
    const auto lo = ParseNumber<std::uint64_t>("seeds", s.substr(0, dots));
    const auto hi = ParseNumber<std::uint64_t>("seeds", s.substr(dots + 2));
    Require(lo <= hi, "seeds: empty range '" + text + "'");
    for (std::uint64_t v = lo; v <= hi; ++v) out.push_back(v);
    return out;
  }
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(ParseNumber<std::uint64_t>("seeds", item));
  }
  Require(!out.empty(), "seeds: empty list");
  return out;
}

ExperimentConfig ParseConfig(const std::string& text) {
  // Boost's INI reader only knows ';' comments.
  std::stringstream cleaned;
  {
    std::stringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      const std::string t = Trim(line);
      if (!t.empty() && t.front() == '#') continue;
      cleaned << line << '\n';
    }
  }
  pt::ptree tree;
  try {
    pt::read_ini(cleaned, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  ExperimentConfig c;
  std::map<std::string, SectionReader> readers;
  auto add = [&](SectionReader r, const std::string& name) {
    readers.emplace(name, std::move(r));
  };

  add(SectionReader("experiment")
          .Custom("method",
                  [&c](const std::string& where, const std::string& v) {
                    auto m = ParseMethod(Trim(v));
                    if (!m) throw ConfigError(where + ": unknown method '" + v + "'");
                    c.method = *m;
                  })
          .Integer("nodes", &c.nodes)
          .Integer("rounds", &c.rounds)
          .Integer("local_epochs", &c.local_epochs)
          .Integer("threads", &c.threads)
          .Custom("seeds",
                  [&c](const std::string&, const std::string& v) {
                    c.seeds = ParseSeedList(v);
                  })
          .String("output", &c.output)
          .Custom("format",
                  [&c](const std::string& where, const std::string& v) {
                    const std::string s = Lower(Trim(v));
                    if (s == "csv") {
                      c.format = OutputFormat::kCsv;
                    } else if (s == "jsonl") {
                      c.format = OutputFormat::kJsonl;
                    } else {
                      throw ConfigError(where + ": expected csv or jsonl");
                    }
                  }),
      "experiment");
  add(SectionReader("model")
          .Custom("kind",
                  [&c](const std::string& where, const std::string& v) {
                    const std::string s = Lower(Trim(v));
                    if (s == "logreg") {
                      c.model_kind = ModelKind::kLogReg;
                    } else if (s == "mlp1") {
                      c.model_kind = ModelKind::kMlp1;
                    } else {
                      throw ConfigError(where + ": expected logreg or mlp1");
                    }
                  })
          .Integer("hidden_dim", &c.hidden_dim)
          .Double("init_scale", &c.init_scale),
      "model");
  add(SectionReader("train")
          .Double("eta", &c.hyper.eta)
          .Double("lambda", &c.hyper.lambda)
          .Integer("batch_size", &c.hyper.batch_size),
      "train");
  auto perturb_reader = [](const std::string& name, PerturbSpec* p) {
    SectionReader r(name);
    r.Double("epsilon", &p->epsilon)
        .Custom("p_norm",
                [p](const std::string& where, const std::string& v) {
                  p->p_norm = ParsePNorm(where, v);
                })
        .Integer("steps", &p->steps)
        .Double("step_size", &p->step_size);
    return r;
  };
  add(perturb_reader("perturb", &c.perturb), "perturb");
  add(perturb_reader("eval", &c.eval_perturb), "eval");
  add(SectionReader("attack")
          .Custom("kind",
                  [&c](const std::string& where, const std::string& v) {
                    c.attack.kind = ParseAttack(where, v);
                  })
          .Double("poison_fraction", &c.attack.poison_fraction)
          .Double("scale", &c.attack.scale),
      "attack");
  add(SectionReader("crypto")
          .Integer("key_bits", &c.key_bits)
          .Integer("scale_bits", &c.encoding.scale_bits)
          .Double("clamp_abs", &c.encoding.clamp_abs),
      "crypto");
  add(SectionReader("coordinator")
          .Double("alpha", &c.coordinator.alpha)
          .Double("z_threshold", &c.coordinator.z_threshold)
          .Double("drift_cap", &c.coordinator.drift_cap)
          .Double("tau_part", &c.coordinator.tau_part)
          .Integer("max_silent", &c.coordinator.max_silent)
          .Double("tau_risk", &c.coordinator.tau_risk)
          .Double("w_drift", &c.coordinator.w_drift)
          .Double("w_flag", &c.coordinator.w_flag)
          .Double("cold_start_performance",
                  &c.coordinator.cold_start_performance)
          .Custom("allow_plain",
                  [&c](const std::string& where, const std::string& v) {
                    c.coordinator.allow_plain = ParseBool(where, v);
                  })
          .Custom("scorer",
                  [&c](const std::string& where, const std::string& v) {
                    const std::string s = Lower(Trim(v));
                    if (s == "heuristic") {
                      c.scorer = ScorerKind::kHeuristic;
                    } else if (s == "external") {
                      c.scorer = ScorerKind::kExternalLlm;
                    } else {
                      throw ConfigError(where + ": expected heuristic or external");
                    }
                  }),
      "coordinator");
  add(SectionReader("external_scorer")
          .String("endpoint", &c.external.endpoint)
          .String("token", &c.external.token)
          .Double("timeout_s", &c.external.timeout_s)
          .String("prompt_id", &c.external.prompt_id),
      "external_scorer");
  add(SectionReader("dp").Double("clip", &c.dp.clip).Double("sigma", &c.dp.sigma),
      "dp");
  add(LinkReader("link", &c.link), "link");
  add(SectionReader("cost")
          .Double("encrypt_ms_per_elem", &c.cost.encrypt_ms_per_elem)
          .Double("decrypt_ms_per_elem", &c.cost.decrypt_ms_per_elem)
          .Double("homadd_ms_per_elem", &c.cost.homadd_ms_per_elem)
          .Double("mask_ms_per_elem", &c.cost.mask_ms_per_elem),
      "cost");
  add(SectionReader("data")
          .Custom("source",
                  [&c](const std::string& where, const std::string& v) {
                    const std::string s = Lower(Trim(v));
                    if (s == "synth") {
                      c.data.source = DataSourceKind::kSynth;
                    } else if (s == "csv") {
                      c.data.source = DataSourceKind::kCsv;
                    } else {
                      throw ConfigError(where + ": expected synth or csv");
                    }
                  })
          .String("csv_path", &c.data.csv_path)
          .Double("test_fraction", &c.data.test_fraction)
          .Double("validation_fraction", &c.data.validation_fraction)
          .Integer("num_samples", &c.data.synth.num_samples)
          .Integer("input_dim", &c.data.synth.input_dim)
          .Integer("num_classes", &c.data.synth.num_classes)
          .Double("cluster_separation", &c.data.synth.cluster_separation)
          .Double("label_noise", &c.data.synth.label_noise)
          .Double("non_iid_skew", &c.data.synth.non_iid_skew),
      "data");

  // Sections are applied in a fixed order so [link] defaults land before
  // per-node [link.N] overrides regardless of file order.
  std::vector<std::pair<int, const pt::ptree*>> overrides;
  for (const auto& [section, body] : tree) {
    if (section.rfind("link.", 0) == 0) {
      const int id = ParseNumber<int>("section [" + section + "]",
                                      section.substr(5));
      overrides.emplace_back(id, &body);
      continue;
    }
    if (body.empty() && !body.data().empty()) {
      throw ConfigError("config: key '" + section + "' outside any section");
    }
    auto it = readers.find(section);
    if (it == readers.end()) {
      throw ConfigError("unknown section [" + section + "]");
    }
    it->second.Apply(body);
  }
  for (const auto& [id, body] : overrides) {
    LinkProfile profile = c.link;
    LinkReader("link." + std::to_string(id), &profile).Apply(*body);
    c.link_overrides[id] = profile;
  }
  ValidateConfig(c);
  return c;
}

ExperimentConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseConfig(ss.str());
}

void ValidateConfig(const ExperimentConfig& c) {
  Require(c.nodes >= 1, "experiment.nodes must be >= 1");
  Require(c.rounds >= 0, "experiment.rounds must be >= 0");
  Require(c.local_epochs >= 1, "experiment.local_epochs must be >= 1");
  Require(c.threads >= 1, "experiment.threads must be >= 1");
  Require(!c.seeds.empty(), "experiment.seeds must not be empty");
  Require(c.model_kind == ModelKind::kLogReg || c.hidden_dim >= 1,
          "model.hidden_dim must be >= 1 for mlp1");
  Require(c.init_scale >= 0.0, "model.init_scale must be >= 0");
  Require(c.hyper.eta > 0.0, "train.eta must be > 0");
  Require(c.hyper.lambda >= 0.0, "train.lambda must be >= 0");
  Require(c.hyper.batch_size >= 1, "train.batch_size must be >= 1");
  for (const PerturbSpec* p : {&c.perturb, &c.eval_perturb}) {
    Require(p->epsilon >= 0.0, "perturbation epsilon must be >= 0");
    Require(p->steps >= 1, "perturbation steps must be >= 1");
    Require(p->step_size > 0.0, "perturbation step_size must be > 0");
  }
  Require(c.attack.poison_fraction >= 0.0 && c.attack.poison_fraction <= 1.0,
          "attack.poison_fraction must be in [0, 1]");
  Require(c.encoding.scale_bits >= 1 && c.encoding.scale_bits <= 40,
          "crypto.scale_bits must be in [1, 40]");
  Require(c.encoding.clamp_abs > 0.0, "crypto.clamp_abs must be > 0");
  Require(c.key_bits >= 64, "crypto.key_bits must be >= 64");
  const CoordinatorConfig& k = c.coordinator;
  Require(k.alpha >= 0.0, "coordinator.alpha must be >= 0");
  Require(k.z_threshold > 0.0, "coordinator.z_threshold must be > 0");
  Require(k.drift_cap >= 0.0, "coordinator.drift_cap must be >= 0");
  Require(k.tau_part >= 0.0, "coordinator.tau_part must be >= 0");
  Require(k.max_silent >= 1, "coordinator.max_silent must be >= 1");
  Require(k.tau_risk >= 0.0, "coordinator.tau_risk must be >= 0");
  Require(k.cold_start_performance >= 0.0 && k.cold_start_performance <= 1.0,
          "coordinator.cold_start_performance must be in [0, 1]");
  Require(c.external.timeout_s > 0.0, "external_scorer.timeout_s must be > 0");
  Require(c.dp.clip > 0.0, "dp.clip must be > 0");
  Require(c.dp.sigma >= 0.0, "dp.sigma must be >= 0");
  for (const LinkProfile& l : c.Links()) {
    Require(l.base_ms >= 0.0 && l.bytes_per_ms > 0.0 && l.jitter_ms >= 0.0,
            "link profiles need base_ms >= 0, bytes_per_ms > 0, jitter_ms >= 0");
  }
  for (const auto& [id, _] : c.link_overrides) {
    Require(id >= 0 && id < c.nodes,
            "[link." + std::to_string(id) + "] names a node that does not exist");
  }
  Require(c.cost.encrypt_ms_per_elem >= 0.0 && c.cost.decrypt_ms_per_elem >= 0.0 &&
              c.cost.homadd_ms_per_elem >= 0.0 && c.cost.mask_ms_per_elem >= 0.0,
          "cost charges must be >= 0");
  Require(c.data.test_fraction > 0.0 && c.data.test_fraction < 1.0,
          "data.test_fraction must be in (0, 1)");
  Require(c.data.validation_fraction >= 0.0 && c.data.validation_fraction < 1.0,
          "data.validation_fraction must be in [0, 1)");
  if (c.data.source == DataSourceKind::kCsv) {
    Require(!c.data.csv_path.empty(), "data.csv_path required for csv source");
  } else {
    const SynthSpec& s = c.data.synth;
    Require(s.num_samples >= 2, "data.num_samples must be >= 2");
    Require(s.input_dim >= 1, "data.input_dim must be >= 1");
    Require(s.num_classes >= 2, "data.num_classes must be >= 2");
    Require(s.cluster_separation >= 0.0, "data.cluster_separation must be >= 0");
    Require(s.label_noise >= 0.0 && s.label_noise <= 1.0,
            "data.label_noise must be in [0, 1]");
  }
  Require(c.data.synth.non_iid_skew > 0.0, "data.non_iid_skew must be > 0");

  // No-wraparound guard. n >= 2^(key_bits - 1), so n/2 >= 2^(key_bits - 2).
  // The largest aggregate is sum_i round(w_i 2^16) * 2^s * clamp_abs with the
  // quantized weights summing to at most 2^16 + nodes.
  const double log2_bound =
      std::log2(std::ldexp(1.0, kWeightBits) + c.nodes) +
      c.encoding.scale_bits + std::log2(std::ceil(c.encoding.clamp_abs));
  Require(log2_bound < static_cast<double>(c.key_bits) - 2.0,
          "wraparound guard: nodes * 2^16 * 2^scale_bits * clamp_abs must stay "
          "below n/2; increase crypto.key_bits or reduce scale_bits/clamp_abs");
}

}  // namespace fedsec
