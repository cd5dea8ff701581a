// Copyright 2026 The stmr Authors
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

// Batch driver: one verb per benchmark experiment.

#include <cstdio>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "stmr/stmr.hpp"

namespace {

// Exit codes by failure category.
constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kNumericError = 3;
constexpr int kIoError = 4;
constexpr int kOtherError = 5;

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
  int reps = 0;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "Config file path");
  cmd->add_option("--out", args.out_dir, "Output directory");
  cmd->add_option("--seed", args.seed, "Root RNG seed (overrides config)")
      ->each([&args](const std::string&) { args.seed_set = true; });
  cmd->add_option("--threads", args.threads,
                  "Worker threads (0 = hardware concurrency)");
  cmd->add_option("--reps", args.reps,
                  "Override repetitions per grid cell (0 = config value)");
  cmd->add_flag("--quiet", args.quiet, "Suppress progress output");
}

stmr::ExperimentConfig resolve_config(const CommonArgs& args) {
  stmr::ExperimentConfig cfg;
  if (!args.config_path.empty()) {
    cfg = stmr::load_config(args.config_path);
  } else {
    stmr::finalize_config(cfg);
    stmr::validate_config(cfg);
  }
  if (args.seed_set) cfg.seed = args.seed;
  if (!args.out_dir.empty()) cfg.output_dir = args.out_dir;
  return cfg;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stmr: STM Rydberg RF receiver simulations"};
  app.require_subcommand(1);

  CommonArgs args;
  CLI::App* pulse = app.add_subcommand(
      "pulse-response", "RF-on/off probe pulse traces per (T, rep) pair");
  CLI::App* snr = app.add_subcommand(
      "snr-sweep", "SNR over the (RF power, data rate) grid");
  CLI::App* ber = app.add_subcommand(
      "ber-map", "BER map over the (RF power, data rate) grid");
  CLI::App* spectrum = app.add_subcommand(
      "spectrum", "Steady-state probe transmission vs coupling detuning");
  for (CLI::App* cmd : {pulse, snr, ber, spectrum}) add_common(cmd, args);

  CLI11_PARSE(app, argc, argv);

  try {
    const stmr::ExperimentConfig cfg = resolve_config(args);
    const int threads = resolve_threads(args.threads);
    const bool progress = !args.quiet;
    stmr::RunSummary summary;
    if (pulse->parsed()) {
      summary = stmr::run_pulse_response(cfg, threads, 3, progress);
    } else if (snr->parsed()) {
      summary = stmr::run_snr_sweep(cfg, threads, progress, args.reps);
    } else if (ber->parsed()) {
      summary = stmr::run_ber_map(cfg, threads, progress, args.reps);
    } else {
      summary = stmr::run_spectrum(cfg, threads, progress);
    }
    for (const auto& f : summary.files) std::printf("%s\n", f.c_str());
    return kOk;
  } catch (const stmr::ConfigParseError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const stmr::ConfigValidationError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const stmr::InvalidParameterError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const stmr::IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return kIoError;
  } catch (const stmr::Error& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return kNumericError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kOtherError;
  }
}
