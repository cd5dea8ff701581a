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

#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"
#include "stmr/dsp/metrics.hpp"
#include "stmr/harness/config.hpp"
#include "stmr/harness/csv.hpp"
#include "stmr/optical/spectrum.hpp"
#include "stmr/receiver/pulse_response.hpp"
#include "stmr/util/parallel.hpp"

namespace stmr {

inline OpticalBench make_bench(const ExperimentConfig& cfg) {
  OpticalBench bench;
  bench.atomic = cfg.atomic;
  bench.cell = cfg.cell;
  bench.detunings.delta1 = constants::two_pi * cfg.probe_detuning_hz;
  bench.detunings.delta2 = constants::two_pi * cfg.coupling_detuning_hz;
  bench.detunings.delta3 = constants::two_pi * cfg.rf_detuning_hz;
  bench.probe_power = cfg.probe_power;
  bench.coupling_power = cfg.coupling_power;
  bench.coupling_waist = cfg.coupling_waist;
  bench.output_scale = cfg.output_scale;
  return bench;
}

inline VelocityGrid make_vgrid(const ExperimentConfig& cfg) {
  return build_velocity_grid(cfg.cell.temperature, cfg.atomic.atom_mass,
                             cfg.n_velocity_classes);
}

// Incident dBm -> Rabi via the aperture/plane-wave/dipole chain.
inline double rf_rabi_for_power(const ExperimentConfig& cfg, double dbm) {
  return rf_rabi_from_dbm(dbm, cfg.atomic.d43_si(), cfg.rf_aperture);
}

// The benchmark tone's Rabi frequency (rad/s).
inline double benchmark_rf_rabi(const ExperimentConfig& cfg) {
  return constants::two_pi * cfg.rf_rabi_on_hz;
}

// Seed tied to a cell's physical coordinates, so dropping other cells from
// the grid cannot change this cell's draws.
inline uint64_t cell_seed(uint64_t root, double power_dbm, double rate_hz) {
  const uint64_t a = std::bit_cast<uint64_t>(power_dbm);
  const uint64_t b = std::bit_cast<uint64_t>(rate_hz);
  return derive_seed(derive_seed(root, 0xce11, a), 0xce11, b);
}

struct SnrCell {
  double rf_power_dbm = 0.0;
  double data_rate_hz = 0.0;
  double pulse_width = 0.0;
  bool ok = false;
  std::string error;
  DetectionRecord rec;
  bool relax_warning = false;
  bool gain_warning = false;
};

struct SlopeFit {
  double rf_power_dbm = 0.0;
  double slope_low = std::numeric_limits<double>::quiet_NaN();   // 1-10 MHz
  double slope_high = std::numeric_limits<double>::quiet_NaN();  // 50-100 MHz
};

struct SweepResult {
  std::vector<double> powers_dbm;
  std::vector<double> rates_hz;
  std::vector<SnrCell> cells;  // power-major: cells[ip * n_rates + ir]
  std::vector<SlopeFit> slopes;
  bool partial = false;
};

// Least-squares slope of log10(y) vs log10(x).
inline double fit_loglog_slope(const std::vector<double>& x,
                               const std::vector<double>& y) {
  if (x.size() != y.size()) throw ShapeError("fit_loglog_slope: size mismatch");
  if (x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log10(x[i]);
    const double ly = std::log10(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(x.size());
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / denom;
}

inline void fit_sweep_slopes(SweepResult& res) {
  res.slopes.clear();
  const size_t n_rates = res.rates_hz.size();
  for (size_t ip = 0; ip < res.powers_dbm.size(); ++ip) {
    SlopeFit fit;
    fit.rf_power_dbm = res.powers_dbm[ip];
    std::vector<double> xl, yl, xh, yh;
    for (size_t ir = 0; ir < n_rates; ++ir) {
      const SnrCell& c = res.cells[ip * n_rates + ir];
      if (!c.ok || !(c.rec.snr > 0.0)) continue;
      const double r = c.data_rate_hz;
      if (r >= 1e6 && r <= 10e6) {
        xl.push_back(r);
        yl.push_back(c.rec.snr);
      }
      if (r >= 50e6 && r <= 100e6) {
        xh.push_back(r);
        yh.push_back(c.rec.snr);
      }
    }
    fit.slope_low = fit_loglog_slope(xl, yl);
    fit.slope_high = fit_loglog_slope(xh, yh);
    res.slopes.push_back(fit);
  }
}

// SNR/BER over the (power, rate) grid. Each cell: one noiseless pulse-pair
// simulation, then `repetitions` noisy matched-filter measurements. Cell
// failures are recorded and the sweep continues.
inline SweepResult compute_snr_sweep(const ExperimentConfig& cfg,
                                     int n_threads = 1,
                                     bool progress = false,
                                     int reps_override = 0) {
  validate_config(cfg);
  const OpticalBench bench = make_bench(cfg);
  const VelocityGrid vgrid = make_vgrid(cfg);
  const int reps = reps_override > 0 ? reps_override : cfg.repetitions;

  SweepResult res;
  res.powers_dbm = cfg.rf_power_dbm;
  res.rates_hz = cfg.data_rates_hz;
  const size_t n_rates = res.rates_hz.size();
  const size_t n_cells = res.powers_dbm.size() * n_rates;
  res.cells.resize(n_cells);

  std::atomic<long> n_done{0};
  parallel_for(n_cells, n_threads, [&](size_t idx) {
    const size_t ip = idx / n_rates;
    const size_t ir = idx % n_rates;
    SnrCell& cell = res.cells[idx];
    cell.rf_power_dbm = res.powers_dbm[ip];
    cell.data_rate_hz = res.rates_hz[ir];
    cell.pulse_width = 1.0 / cell.data_rate_hz;
    try {
      const double rep_period =
          std::max(2.0 * cell.pulse_width, 1.0 / cfg.f_r);
      const double omega_rf = rf_rabi_for_power(cfg, cell.rf_power_dbm);
      const DetectedPulsePair pair = simulate_detected_pair(
          bench, cell.pulse_width, rep_period, omega_rf, cfg.detector, vgrid,
          /*n_threads=*/1, cfg.dt_factor);
      cell.relax_warning = pair.relax_warning;
      cell.gain_warning = pair.gain_warning;
      cell.rec = measure_detection(
          pair.v_on, pair.v_off, pair.grid.dt, cell.pulse_width, cfg.detector,
          pair.mean_current, reps,
          cell_seed(cfg.seed, cell.rf_power_dbm, cell.data_rate_hz),
          cfg.min_repetitions, cfg.noise_metric);
      cell.ok = true;
    } catch (const std::exception& e) {
      cell.ok = false;
      cell.error = e.what();
    }
    const long done = ++n_done;
    if (progress) {
      std::fprintf(stderr, "[sweep] %ld/%zu  %+.1f dBm  %.3g MHz  %s\n",
                   done, n_cells, cell.rf_power_dbm,
                   cell.data_rate_hz / 1e6,
                   cell.ok ? "ok" : cell.error.c_str());
    }
  });

  res.partial = std::any_of(res.cells.begin(), res.cells.end(),
                            [](const SnrCell& c) { return !c.ok; });
  fit_sweep_slopes(res);
  return res;
}

struct RunSummary {
  nlohmann::json json;
  std::vector<std::string> files;
};

namespace harness_detail {

inline std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

inline void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "'");
}

inline nlohmann::json summary_base(const char* verb,
                                   const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["verb"] = verb;
  j["schema_version"] = kCsvSchemaVersion;
  j["config_hash"] = config_hash_hex(cfg);
  j["seed"] = cfg.seed;
  j["library_version"] = "0.1.0";
  return j;
}

inline void write_summary(RunSummary& summary, const ExperimentConfig& cfg,
                          const char* verb, double wall_seconds) {
  summary.json["wall_seconds"] = wall_seconds;
  summary.json["files"] = summary.files;
  const std::string path = join_path(
      cfg.output_dir, std::string("summary_") + verb + ".json");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << summary.json.dump(2) << "\n";
}

class WallClock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now() - t0_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point t0_ =
      std::chrono::steady_clock::now();
};

}  // namespace harness_detail

// RF-on/off per-pulse voltage traces for every configured (T, rep) pair.
inline RunSummary run_pulse_response(const ExperimentConfig& cfg,
                                     int n_threads = 1, int n_pulses = 3,
                                     bool progress = false) {
  validate_config(cfg);
  harness_detail::WallClock clock;
  harness_detail::ensure_dir(cfg.output_dir);
  RunSummary summary;
  summary.json = harness_detail::summary_base("pulse-response", cfg);
  nlohmann::json warnings = nlohmann::json::array();

  if (cfg.pulse_pairs.empty()) {
    std::fprintf(stderr, "[pulse-response] empty pulse list, nothing to do\n");
    warnings.push_back("empty pulse list: no trace files written");
    summary.json["warnings"] = warnings;
    summary.json["n_pairs"] = 0;
    harness_detail::write_summary(summary, cfg, "pulse-response",
                                  clock.seconds());
    return summary;
  }

  const OpticalBench bench = make_bench(cfg);
  const VelocityGrid vgrid = make_vgrid(cfg);
  const double omega_rf = benchmark_rf_rabi(cfg);
  const std::string hash = config_hash_hex(cfg);

  for (size_t i = 0; i < cfg.pulse_pairs.size(); ++i) {
    const auto& p = cfg.pulse_pairs[i];
    if (progress) {
      std::fprintf(stderr, "[pulse-response] pair %zu/%zu  T=%.4g ns\n", i + 1,
                   cfg.pulse_pairs.size(), p.pulse_width * 1e9);
    }
    PulseTrain train;
    train.pulse_width = p.pulse_width;
    train.rep_period = p.rep_period;
    train.amplitude = bench.omega_probe();
    train.n_pulses = n_pulses;
    const PulseResponse resp = simulate_pulse_response(
        bench, train, omega_rf, cfg.detector, vgrid,
        derive_seed(cfg.seed, 0x9a15e, i), n_threads, cfg.dt_factor);
    if (resp.pair.relax_warning) {
      warnings.push_back("pair " + std::to_string(i) +
                         ": repetition period shorter than 5/Gamma21");
    }
    if (resp.pair.gain_warning) {
      warnings.push_back("pair " + std::to_string(i) +
                         ": negative Im(chi) encountered");
    }
    char name[64];
    std::snprintf(name, sizeof name, "pulse_traces_T%gns.csv",
                  p.pulse_width * 1e9);
    const std::string path = harness_detail::join_path(cfg.output_dir, name);
    CsvWriter csv(path, "pulse-response", hash,
                  {"time_s", "v_rf_on_V", "v_rf_off_V", "beam_index",
                   "pulse_index"},
                  {"pulse_width_s=" + CsvWriter::fmt(p.pulse_width),
                   "rep_period_s=" + CsvWriter::fmt(p.rep_period)});
    for (int j = 0; j < train.n_pulses; ++j) {
      for (size_t k = 0; k < resp.pair.t.size(); ++k) {
        csv.row({resp.pair.t[k], resp.v_on_j[j][k], resp.v_off_j[j][k]},
                {0, j});
      }
    }
    summary.files.push_back(path);
  }
  summary.json["warnings"] = warnings;
  summary.json["n_pairs"] = cfg.pulse_pairs.size();
  harness_detail::write_summary(summary, cfg, "pulse-response",
                                clock.seconds());
  return summary;
}

inline void write_sweep_csv(const std::string& path, const std::string& hash,
                            const SweepResult& res) {
  CsvWriter csv(path, "snr-sweep", hash,
                {"data_rate_hz", "pulse_width_s", "rf_power_dbm", "snr", "ber",
                 "n_repetitions"});
  const size_t n_rates = res.rates_hz.size();
  for (size_t ip = 0; ip < res.powers_dbm.size(); ++ip) {
    for (size_t ir = 0; ir < n_rates; ++ir) {
      const SnrCell& c = res.cells[ip * n_rates + ir];
      if (!c.ok) continue;
      csv.row({c.data_rate_hz, c.pulse_width, c.rf_power_dbm, c.rec.snr,
               c.rec.ber},
              {c.rec.n_reps});
    }
  }
}

inline void write_slope_csv(const std::string& path, const std::string& hash,
                            const SweepResult& res) {
  CsvWriter csv(path, "snr-slopes", hash,
                {"rf_power_dbm", "slope_1_10mhz", "slope_50_100mhz"});
  for (const auto& s : res.slopes) {
    csv.row({s.rf_power_dbm, s.slope_low, s.slope_high});
  }
}

inline void add_sweep_summary(nlohmann::json& j, const SweepResult& res) {
  j["n_cells"] = res.cells.size();
  j["partial"] = res.partial;
  nlohmann::json missing = nlohmann::json::array();
  for (const auto& c : res.cells) {
    if (c.ok) continue;
    missing.push_back({{"rf_power_dbm", c.rf_power_dbm},
                       {"data_rate_hz", c.data_rate_hz},
                       {"error", c.error}});
  }
  j["missing_cells"] = missing;
}

inline RunSummary run_snr_sweep(const ExperimentConfig& cfg, int n_threads = 1,
                                bool progress = false,
                                int reps_override = 0) {
  harness_detail::WallClock clock;
  harness_detail::ensure_dir(cfg.output_dir);
  const SweepResult res =
      compute_snr_sweep(cfg, n_threads, progress, reps_override);
  const std::string hash = config_hash_hex(cfg);
  RunSummary summary;
  summary.json = harness_detail::summary_base("snr-sweep", cfg);
  add_sweep_summary(summary.json, res);

  const std::string sweep_path =
      harness_detail::join_path(cfg.output_dir, "snr_sweep.csv");
  write_sweep_csv(sweep_path, hash, res);
  summary.files.push_back(sweep_path);
  const std::string slope_path =
      harness_detail::join_path(cfg.output_dir, "snr_slopes.csv");
  write_slope_csv(slope_path, hash, res);
  summary.files.push_back(slope_path);
  harness_detail::write_summary(summary, cfg, "snr-sweep", clock.seconds());
  return summary;
}

// BER over the same grid; contour column carries log10(BER) clamped to
// [-30, -3] so everything worse than 1e-3 lands in one band.
inline RunSummary run_ber_map(const ExperimentConfig& cfg, int n_threads = 1,
                              bool progress = false, int reps_override = 0) {
  harness_detail::WallClock clock;
  harness_detail::ensure_dir(cfg.output_dir);
  const SweepResult res =
      compute_snr_sweep(cfg, n_threads, progress, reps_override);
  const std::string hash = config_hash_hex(cfg);
  RunSummary summary;
  summary.json = harness_detail::summary_base("ber-map", cfg);
  add_sweep_summary(summary.json, res);

  const std::string path =
      harness_detail::join_path(cfg.output_dir, "ber_map.csv");
  CsvWriter csv(path, "ber-map", hash,
                {"data_rate_hz", "pulse_width_s", "rf_power_dbm", "ber",
                 "log10_ber_band", "snr", "n_repetitions"});
  const size_t n_rates = res.rates_hz.size();
  for (size_t ip = 0; ip < res.powers_dbm.size(); ++ip) {
    for (size_t ir = 0; ir < n_rates; ++ir) {
      const SnrCell& c = res.cells[ip * n_rates + ir];
      if (!c.ok) continue;
      const double band =
          std::clamp(std::log10(c.rec.ber), -30.0, -3.0);
      csv.row({c.data_rate_hz, c.pulse_width, c.rf_power_dbm, c.rec.ber, band,
               c.rec.snr},
              {c.rec.n_reps});
    }
  }
  summary.files.push_back(path);
  harness_detail::write_summary(summary, cfg, "ber-map", clock.seconds());
  return summary;
}

// Steady-state transmission vs coupling detuning at the benchmark RF tone.
inline RunSummary run_spectrum(const ExperimentConfig& cfg, int n_threads = 1,
                               bool progress = false) {
  validate_config(cfg);
  harness_detail::WallClock clock;
  harness_detail::ensure_dir(cfg.output_dir);
  const OpticalBench bench = make_bench(cfg);
  const VelocityGrid vgrid = make_vgrid(cfg);

  std::vector<double> sweep(cfg.spectrum_points);
  const double span = constants::two_pi * cfg.spectrum_span_hz;
  for (int i = 0; i < cfg.spectrum_points; ++i) {
    sweep[i] = -span + 2.0 * span * static_cast<double>(i) /
                           static_cast<double>(cfg.spectrum_points - 1);
  }
  if (progress) {
    std::fprintf(stderr, "[spectrum] %d points, %d classes, rf %s\n",
                 cfg.spectrum_points, cfg.n_velocity_classes,
                 cfg.spectrum_rf_on ? "on" : "off");
  }
  DriveValues dv{bench.omega_probe(), bench.omega_coupling(),
                 benchmark_rf_rabi(cfg)};
  const SpectrumResult spec =
      eit_spectrum(cfg.atomic, cfg.cell, dv, bench.probe_field(), sweep,
                   cfg.spectrum_rf_on, bench.detunings, vgrid, n_threads,
                   cfg.dt_factor);

  const std::string hash = config_hash_hex(cfg);
  RunSummary summary;
  summary.json = harness_detail::summary_base("spectrum", cfg);
  const std::string path =
      harness_detail::join_path(cfg.output_dir, "spectrum.csv");
  CsvWriter csv(path, "spectrum", hash,
                {"coupling_detuning_hz", "transmission"});
  for (size_t i = 0; i < spec.delta2.size(); ++i) {
    csv.row({spec.delta2[i] / constants::two_pi, spec.transmission[i]});
  }
  summary.files.push_back(path);
  summary.json["n_points"] = cfg.spectrum_points;
  if (cfg.spectrum_rf_on) {
    try {
      summary.json["peak_separation_hz"] =
          estimate_peak_separation(spec) / constants::two_pi;
    } catch (const Error&) {
      summary.json["peak_separation_hz"] = nullptr;
    }
  }
  harness_detail::write_summary(summary, cfg, "spectrum", clock.seconds());
  return summary;
}

}  // namespace stmr
