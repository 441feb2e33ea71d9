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

// Command-line front end: run, sweep and bench-crypto.

#include <chrono>
#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fedsec/baselines.h"
#include "fedsec/config.h"
#include "fedsec/errors.h"
#include "fedsec/experiment.h"
#include "fedsec/masking.h"
#include "fedsec/metrics.h"
#include "fedsec/paillier.h"
#include "fedsec/random.h"

namespace {

using Clock = std::chrono::steady_clock;

fedsec::OutputFormat ParseFormat(const std::string& s) {
  if (s == "csv") return fedsec::OutputFormat::kCsv;
  if (s == "jsonl") return fedsec::OutputFormat::kJsonl;
  throw fedsec::InvalidArgument("unknown format '" + s + "' (csv|jsonl)");
}

fedsec::MethodId RequireMethod(const std::string& name) {
  const auto m = fedsec::ParseMethod(name);
  if (!m) throw fedsec::InvalidArgument("unknown method '" + name + "'");
  return *m;
}

std::vector<fedsec::MethodId> ParseMethodList(const std::string& text) {
  if (text == "all") return fedsec::AllMethods();
  std::vector<fedsec::MethodId> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(RequireMethod(item));
  if (out.empty()) throw fedsec::InvalidArgument("empty method list");
  return out;
}

void PrintSummary(const fedsec::RunSummary& s) {
  std::cerr << fedsec::ToString(s.method) << " seed=" << s.seed
            << " rounds=" << s.rounds << " final_acc=" << s.final_accuracy
            << " adv_acc=" << s.final_adv_accuracy
            << " mean_latency_ms=" << s.mean_latency_ms
            << " trigger_rate=" << s.TriggerRate()
            << " fallbacks=" << s.fallback_events << '\n';
}

double MsSince(Clock::time_point start, int count) {
  const std::chrono::duration<double, std::milli> d = Clock::now() - start;
  return d.count() / count;
}

void BenchCrypto(std::size_t key_bits, std::size_t dim, int nodes) {
  using namespace fedsec;
  const KeyPair kp = GenerateKeyPair(key_bits, 1);
  const FixedPointEncoding enc;
  Rng rng = MakeRng(1, Stream::kData);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> values(dim);
  for (double& v : values) v = normal(rng);
  const ParamVector v(values);
  PaillierRandom prng(7);

  auto t0 = Clock::now();
  const CipherVector a = EncodeVector(v, enc, kp.pub, prng);
  const double encrypt = MsSince(t0, static_cast<int>(dim));
  const CipherVector b = EncodeVector(v, enc, kp.pub, prng);

  t0 = Clock::now();
  std::vector<Ciphertext> sum;
  for (std::size_t i = 0; i < dim; ++i) {
    sum.push_back(AddCiphertexts(kp.pub, a.entries[i], b.entries[i]));
  }
  const double homadd = MsSince(t0, static_cast<int>(dim));

  t0 = Clock::now();
  const std::vector<mpz_class> plain = DecryptVector(kp, a);
  const double decrypt = MsSince(t0, static_cast<int>(dim));

  std::vector<int> cohort(static_cast<std::size_t>(nodes));
  for (int i = 0; i < nodes; ++i) cohort[static_cast<std::size_t>(i)] = i;
  const int reps = 50;
  t0 = Clock::now();
  for (int r = 0; r < reps; ++r) {
    const RingVector share =
        MaskedShare(v, 0, cohort, MaskSchedule{1, static_cast<std::uint64_t>(r)},
                    enc.scale_bits);
    if (share.size() != dim) throw Error("bench: bad share size");
  }
  const double mask =
      MsSince(t0, reps * static_cast<int>(dim) * (nodes - 1));

  std::cout << "key_bits=" << key_bits << " dim=" << dim
            << " cohort=" << nodes << '\n'
            << "encrypt_ms_per_elem=" << encrypt << '\n'
            << "decrypt_ms_per_elem=" << decrypt << '\n'
            << "homadd_ms_per_elem=" << homadd << '\n'
            << "mask_ms_per_elem=" << mask << '\n'
            << "(mask cost is per element per peer)\n"
            << "\n[cost]\n"
            << "encrypt_ms_per_elem = " << encrypt << '\n'
            << "decrypt_ms_per_elem = " << decrypt << '\n'
            << "homadd_ms_per_elem = " << homadd << '\n'
            << "mask_ms_per_elem = " << mask << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Federated learning simulator with secure aggregation"};
  app.require_subcommand(1);

  std::string config_path;
  std::string method_name;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  std::string format_name;
  auto* run = app.add_subcommand("run", "Run one method");
  run->add_option("--config", config_path, "INI config file")->required();
  run->add_option("--method", method_name, "OURS, VFL, DP_FL, SMC_FL, HE_FL");
  run->add_option("--seed", seed, "Seed (overrides the config seed list)");
  run->add_option("--out", out_path, "Metrics output path");
  run->add_option("--format", format_name, "csv or jsonl");

  std::string sweep_config;
  std::string methods_text = "all";
  std::string seeds_text;
  std::string sweep_out;
  std::string sweep_format;
  auto* sweep = app.add_subcommand("sweep", "Run several methods and seeds");
  sweep->add_option("--config", sweep_config, "INI config file")->required();
  sweep->add_option("--methods", methods_text, "'all' or comma list");
  sweep->add_option("--seeds", seeds_text, "e.g. 1..5 or 1,3,9");
  sweep->add_option("--out", sweep_out, "Metrics output path");
  sweep->add_option("--format", sweep_format, "csv or jsonl");

  std::size_t key_bits = 512;
  std::size_t dim = 64;
  int cohort = 10;
  auto* bench = app.add_subcommand("bench-crypto", "Time crypto primitives");
  bench->add_option("--key-bits", key_bits, "Paillier modulus size");
  bench->add_option("--dim", dim, "Vector length");
  bench->add_option("--nodes", cohort, "Masking cohort size");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*bench) {
      if (cohort < 2) throw fedsec::InvalidArgument("--nodes must be >= 2");
      BenchCrypto(key_bits, dim, cohort);
      return 0;
    }
    const bool is_run = static_cast<bool>(*run);
    fedsec::ExperimentConfig config =
        fedsec::LoadConfig(is_run ? config_path : sweep_config);
    const std::string& fmt = is_run ? format_name : sweep_format;
    if (!fmt.empty()) config.format = ParseFormat(fmt);
    const std::string& out = is_run ? out_path : sweep_out;
    if (!out.empty()) config.output = out;

    std::vector<fedsec::MethodId> methods;
    std::vector<std::uint64_t> seeds = config.seeds;
    if (is_run) {
      if (!method_name.empty()) config.method = RequireMethod(method_name);
      methods = {config.method};
      if (seed) seeds = {*seed};
    } else {
      methods = ParseMethodList(methods_text);
      if (!seeds_text.empty()) seeds = fedsec::ParseSeedList(seeds_text);
    }

    fedsec::MetricsWriter writer(config.output, config.format);
    const auto summaries = fedsec::RunSweep(
        config, methods, seeds,
        [&writer](const fedsec::MetricsRecord& r) { writer.Write(r); });
    for (const auto& s : summaries) PrintSummary(s);
    std::cerr << "wrote " << writer.count() << " records to " << config.output
              << '\n';
  } catch (const std::exception& e) {
    std::cerr << "fedsec: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
