// Copyright 2026 The swingfill Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// swingfill: per-bit read-swing optimizer.
//
//   swingfill solve --criterion min-energy --bits 8 --psnr 30 --format json
//   swingfill sweep --scheme min-energy,max-speed --sweep 20:40:0.5
//   swingfill compare --bits 8
//   swingfill simulate --criterion min-edp --psnr 30 --corpus image.pgm
//   swingfill kkt-check --bits 16
//
// Settings come from flags, then the JSON file named by --config or
// SWINGFILL_CONFIG, then built-in defaults. Exit status: 0 when every point
// succeeded, 1 when some point failed, 2 for usage or configuration errors.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "swingfill/runner.hpp"

namespace {

struct Flags {
  std::vector<std::string> schemes;
  std::optional<int> bits;
  std::optional<double> sigma;
  std::optional<std::string> noise;
  std::optional<double> psnr;
  std::optional<double> mse;
  std::optional<double> beta;
  std::optional<std::string> sweep;
  std::optional<std::string> corpus;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> samples;
  std::vector<double> swings;
  std::optional<std::string> format;
  std::optional<std::string> out;
  std::optional<unsigned> workers;
  std::optional<std::string> config;
};

void add_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--criterion,--scheme", f.schemes,
                  "min-energy, max-speed, min-edp, levin-campello, lsb-drop-L, secc-7-4, secc-7-4-discard, "
                  "secc-15-11 (comma-separated or repeated)")
      ->delimiter(',');
  cmd->add_option("--bits", f.bits, "word width B (default 8)");
  cmd->add_option("--sigma", f.sigma, "noise standard deviation (default 1)");
  cmd->add_option("--noise", f.noise, "gaussian, laplace or uniform (default gaussian)");
  cmd->add_option("--psnr", f.psnr, "target PSNR in dB");
  cmd->add_option("--mse", f.mse, "target MSE budget");
  cmd->add_option("--beta", f.beta, "swing granularity in units of sigma; selects the discrete algorithms");
  cmd->add_option("--sweep", f.sweep, "PSNR range START:STOP:STEP in dB (default 20:40:0.5)");
  cmd->add_option("--corpus", f.corpus, "PGM (P5) or raw byte file used as the word source");
  cmd->add_option("--seed", f.seed, "simulation seed (default 1)");
  cmd->add_option("--samples", f.samples, "simulated reads (default 1000000)");
  cmd->add_option("--swings", f.swings, "explicit swings for simulate, LSB first")->delimiter(',');
  cmd->add_option("--format", f.format, "csv or json (default csv)");
  cmd->add_option("--out", f.out, "write output here instead of stdout");
  cmd->add_option("--workers", f.workers, "worker threads (default: hardware concurrency)");
  cmd->add_option("--config", f.config, "JSON config file (overrides SWINGFILL_CONFIG)");
}

swingfill::RunConfig build_config(const std::string& command, const Flags& f) {
  swingfill::RunConfig cfg;
  std::optional<std::string> config_path = f.config;
  if (!config_path)
    if (const char* env = std::getenv("SWINGFILL_CONFIG"); env && *env) config_path = env;
  if (config_path) cfg = swingfill::load_config_file(*config_path, cfg);
  cfg.command = command;

  if (!f.schemes.empty()) cfg.schemes = f.schemes;
  if (f.bits) cfg.bits = *f.bits;
  if (f.sigma) cfg.sigma = *f.sigma;
  if (f.noise) {
    try {
      cfg.noise = swingfill::parse_noise_kind(*f.noise);
    } catch (const std::invalid_argument& e) {
      throw swingfill::ConfigError(e.what());
    }
  }
  // A target given on the command line replaces any target from the file.
  if (f.psnr || f.mse || f.sweep) {
    cfg.psnr_db.reset();
    cfg.mse.reset();
    cfg.sweep.reset();
  }
  if (f.psnr) cfg.psnr_db = *f.psnr;
  if (f.mse) cfg.mse = *f.mse;
  if (f.sweep) cfg.sweep = swingfill::SweepRange::parse(*f.sweep);
  if (f.beta) cfg.beta = *f.beta;
  if (f.corpus) cfg.corpus = *f.corpus;
  if (f.seed) cfg.seed = *f.seed;
  if (f.samples) cfg.samples = *f.samples;
  if (!f.swings.empty()) cfg.swings = f.swings;
  if (f.format) cfg.format = *f.format;
  if (f.out) cfg.out = *f.out;
  if (f.workers) cfg.workers = *f.workers;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Per-bit read-swing optimization under an MSE fidelity budget"};
  app.require_subcommand(1);
  Flags flags;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"solve", "solve one target and print swings, duals and metrics"},
      {"sweep", "solve every scheme over a PSNR range"},
      {"compare", "energy needed by the optimum and the baseline schemes over a PSNR range"},
      {"simulate", "Monte-Carlo read simulation against the analytic MSE"},
      {"kkt-check", "verify optimality conditions of the continuous solvers over a PSNR range"},
  };
  for (const auto& [name, help] : commands) add_flags(app.add_subcommand(name, help), flags);
  CLI11_PARSE(app, argc, argv);

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const auto cfg = build_config(command, flags);
    const auto result = swingfill::run_command(cfg);
    if (cfg.out) {
      std::ofstream out(*cfg.out, std::ios::binary);
      if (!out) throw swingfill::ConfigError("cannot write " + *cfg.out);
      swingfill::write_result(result, cfg.format, out);
    } else {
      swingfill::write_result(result, cfg.format, std::cout);
    }
    if (!result.ok) {
      for (const auto& row : result.rows)
        if (row.contains("message") && row["message"].is_string() && !row["message"].get<std::string>().empty())
          std::cerr << "swingfill: " << row["scheme"].get<std::string>() << " @ " << row["psnr_db"].dump() << ": "
                    << row["message"].get<std::string>() << '\n';
      return 1;
    }
    return 0;
  } catch (const swingfill::ConfigError& e) {
    std::cerr << "swingfill: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "swingfill: " << e.what() << '\n';
    return 1;
  }
}
