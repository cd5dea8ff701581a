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

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "stmr/atomic/ladder.hpp"
#include "stmr/constants.hpp"
#include "stmr/dsp/metrics.hpp"
#include "stmr/errors.hpp"
#include "stmr/optical/vapor.hpp"
#include "stmr/receiver/detector.hpp"
#include "stmr/receiver/ook.hpp"

namespace stmr {

struct PulsePairSpec {
  double pulse_width = 0.0;  // s
  double rep_period = 0.0;   // s
};

// Full description of one batch run. Frequencies and rates in the file are
// plain Hz (cycles); they are converted to angular units where the physics
// needs them.
struct ExperimentConfig {
  // [atomic]
  LadderConfig atomic;
  bool transit_auto = true;

  // [cell]
  VaporCellParams cell = VaporCellParams::room_temperature_rb85();
  bool density_auto = true;

  // [laser]
  double probe_power = 4.7e-6;     // W
  double coupling_power = 0.6;     // W
  double coupling_waist = 200e-6;  // m
  double probe_detuning_hz = 0.0;
  double coupling_detuning_hz = 0.0;
  double rf_detuning_hz = 0.0;
  double output_scale = 1.0;

  // [detector]
  DetectorModel detector;

  // [schedule]
  double f_s = 100e6;
  double f_r = 2e6;
  double pulse_width = 10e-9;
  std::vector<PulsePairSpec> pulse_pairs{{10e-9, 500e-9},
                                         {50e-9, 1000e-9},
                                         {100e-9, 1000e-9},
                                         {1000e-9, 2000e-9}};

  // [rf]
  double rf_rabi_on_hz = 17.11e6;               // benchmark tone
  double rf_aperture = kDefaultRfAperture;      // m^2
  std::vector<double> rf_power_dbm;             // default filled below
  std::vector<double> data_rates_hz{1e6, 2e6, 5e6, 10e6, 20e6, 50e6, 100e6};
  std::string bit_pattern = "10";

  // [numerics]
  double dt_factor = 1.0;
  int n_velocity_classes = 101;
  int repetitions = 200;
  int min_repetitions = 30;
  uint64_t seed = 12345;
  NoiseMetricMode noise_metric = NoiseMetricMode::kPair;

  // [spectrum]
  double spectrum_span_hz = 40e6;  // coupling detuning swept over +-span
  int spectrum_points = 161;
  bool spectrum_rf_on = true;

  // [output]
  std::string output_dir = ".";
  std::string output_format = "csv";

  ExperimentConfig() {
    for (double p = -55.0; p <= -25.0 + 1e-9; p += 2.5) {
      rf_power_dbm.push_back(p);
    }
  }
};

namespace config_detail {

inline std::string trim(const std::string& s) {
  const char* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline double parse_double(const std::string& v, int line) {
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigParseError("cannot parse '" + v + "' as a number", line);
  }
}

inline long parse_long(const std::string& v, int line) {
  try {
    size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigParseError("cannot parse '" + v + "' as an integer", line);
  }
}

inline uint64_t parse_uint64(const std::string& v, int line) {
  try {
    // stoull accepts "-5" and wraps; reject signs up front.
    if (v.empty() || v[0] == '-' || v[0] == '+') throw std::invalid_argument(v);
    size_t pos = 0;
    const unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return static_cast<uint64_t>(x);
  } catch (const std::exception&) {
    throw ConfigParseError("cannot parse '" + v + "' as an unsigned integer",
                           line);
  }
}

inline bool parse_bool(const std::string& v, int line) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigParseError("cannot parse '" + v + "' as a boolean", line);
}

// List elements are numbers or inclusive ranges start:stop:step.
inline std::vector<double> parse_double_list(const std::string& v, int line) {
  std::vector<double> out;
  for (const auto& tok : split_list(v)) {
    const auto c1 = tok.find(':');
    if (c1 == std::string::npos) {
      out.push_back(parse_double(tok, line));
      continue;
    }
    const auto c2 = tok.find(':', c1 + 1);
    if (c2 == std::string::npos) {
      throw ConfigParseError("range '" + tok + "' needs start:stop:step", line);
    }
    const double start = parse_double(tok.substr(0, c1), line);
    const double stop = parse_double(tok.substr(c1 + 1, c2 - c1 - 1), line);
    const double step = parse_double(tok.substr(c2 + 1), line);
    if (!(step > 0.0) || stop < start) {
      throw ConfigParseError("range '" + tok + "' must have step > 0 and "
                             "stop >= start", line);
    }
    for (double x = start; x <= stop + 0.5 * step; x += step) {
      out.push_back(std::min(x, stop));
    }
  }
  return out;
}

// Pulse pairs: "width:rep width:rep ..." in seconds.
inline std::vector<PulsePairSpec> parse_pair_list(const std::string& v,
                                                  int line) {
  std::vector<PulsePairSpec> out;
  for (const auto& tok : split_list(v)) {
    const auto c = tok.find(':');
    if (c == std::string::npos) {
      throw ConfigParseError("pulse pair '" + tok + "' needs width:rep", line);
    }
    PulsePairSpec p;
    p.pulse_width = parse_double(tok.substr(0, c), line);
    p.rep_period = parse_double(tok.substr(c + 1), line);
    out.push_back(p);
  }
  return out;
}

inline std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string fmt_double_list(const std::vector<double>& xs) {
  std::string out;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += fmt_double(xs[i]);
  }
  return out;
}

inline std::string fmt_pair_list(const std::vector<PulsePairSpec>& xs) {
  std::string out;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += fmt_double(xs[i].pulse_width) + ":" + fmt_double(xs[i].rep_period);
  }
  return out;
}

struct KeyHandler {
  std::function<void(ExperimentConfig&, const std::string&, int)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

// Fixed schema; order defines the canonical serialization (and thus the
// config hash).
inline const std::vector<std::pair<std::string, KeyHandler>>& schema() {
  static const std::vector<std::pair<std::string, KeyHandler>> tbl = [] {
    std::vector<std::pair<std::string, KeyHandler>> t;
    auto dbl = [&t](const std::string& key, auto member) {
      t.push_back({key,
                   {[member](ExperimentConfig& c, const std::string& v,
                             int line) { c.*member = parse_double(v, line); },
                    [member](const ExperimentConfig& c) {
                      return fmt_double(c.*member);
                    }}});
    };
    // [atomic]
    t.push_back({"atomic.dipole_d21_ea0",
                 {[](ExperimentConfig& c, const std::string& v, int line) {
                    c.atomic.dipole_d21 = parse_double(v, line);
                  },
                  [](const ExperimentConfig& c) {
                    return fmt_double(c.atomic.dipole_d21);
                  }}});
    t.push_back({"atomic.dipole_d32_ea0",
                 {[](ExperimentConfig& c, const std::string& v, int line) {
                    c.atomic.dipole_d32 = parse_double(v, line);
                  },
                  [](const ExperimentConfig& c) {
                    return fmt_double(c.atomic.dipole_d32);
                  }}});
    t.push_back({"atomic.dipole_d43_ea0",
                 {[](ExperimentConfig& c, const std::string& v, int line) {
                    c.atomic.dipole_d43 = parse_double(v, line);
                  },
                  [](const ExperimentConfig& c) {
                    return fmt_double(c.atomic.dipole_d43);
                  }}});
    auto rate_hz = [](double LadderConfig::*member) {
      return KeyHandler{
          [member](ExperimentConfig& c, const std::string& v, int line) {
            c.atomic.*member = constants::two_pi * parse_double(v, line);
          },
          [member](const ExperimentConfig& c) {
            return fmt_double(c.atomic.*member / constants::two_pi);
          }};
    };
    t.push_back({"atomic.gamma_21_hz", rate_hz(&LadderConfig::gamma_21)});
    t.push_back({"atomic.gamma_32_hz", rate_hz(&LadderConfig::gamma_32)});
    t.push_back({"atomic.gamma_43_hz", rate_hz(&LadderConfig::gamma_43)});
    for (int k = 0; k < 3; ++k) {
      t.push_back({"atomic.dephasing_" + std::to_string(k + 2) + "_hz",
                   {[k](ExperimentConfig& c, const std::string& v, int line) {
                      c.atomic.dephasing_gamma[k] =
                          constants::two_pi * parse_double(v, line);
                    },
                    [k](const ExperimentConfig& c) {
                      return fmt_double(c.atomic.dephasing_gamma[k] /
                                        constants::two_pi);
                    }}});
    }
    t.push_back(
        {"atomic.transit_rate_hz",
         {[](ExperimentConfig& c, const std::string& v, int line) {
            if (v == "auto") {
              c.transit_auto = true;
            } else {
              c.transit_auto = false;
              c.atomic.transit_rate = constants::two_pi * parse_double(v, line);
            }
          },
          [](const ExperimentConfig& c) {
            return c.transit_auto
                       ? std::string("auto")
                       : fmt_double(c.atomic.transit_rate / constants::two_pi);
          }}});
    t.push_back({"atomic.atom_mass_u",
                 {[](ExperimentConfig& c, const std::string& v, int line) {
                    c.atomic.atom_mass =
                        parse_double(v, line) * constants::atomic_mass_unit;
                  },
                  [](const ExperimentConfig& c) {
                    return fmt_double(c.atomic.atom_mass /
                                      constants::atomic_mass_unit);
                  }}});
    t.push_back({"atomic.beam_waist_m",
                 {[](ExperimentConfig& c, const std::string& v, int line) {
                    c.atomic.beam_waist = parse_double(v, line);
                  },
                  [](const ExperimentConfig& c) {
                    return fmt_double(c.atomic.beam_waist);
                  }}});
    t.push_back({"atomic.lambda_probe_m",
                 {[](ExperimentConfig& c, const std::string& v, int line) {
                    c.atomic.lambda_probe = parse_double(v, line);
                  },
                  [](const ExperimentConfig& c) {
                    return fmt_double(c.atomic.lambda_probe);
                  }}});
    t.push_back({"atomic.lambda_coupling_m",
                 {[](ExperimentConfig& c, const std::string& v, int line) {
                    c.atomic.lambda_coupling = parse_double(v, line);
                  },
                  [](const ExperimentConfig& c) {
                    return fmt_double(c.atomic.lambda_coupling);
                  }}});
    // [cell]
    t.push_back({"cell.temperature_k",
                 {[](ExperimentConfig& c, const std::string& v, int line) {
                    c.cell.temperature = parse_double(v, line);
                  },
                  [](const ExperimentConfig& c) {
                    return fmt_double(c.cell.temperature);
                  }}});
    t.push_back({"cell.length_m",
                 {[](ExperimentConfig& c, const std::string& v, int line) {
                    c.cell.length = parse_double(v, line);
                  },
                  [](const ExperimentConfig& c) {
                    return fmt_double(c.cell.length);
                  }}});
    t.push_back({"cell.isotope_fraction",
                 {[](ExperimentConfig& c, const std::string& v, int line) {
                    c.cell.isotope_fraction = parse_double(v, line);
                  },
                  [](const ExperimentConfig& c) {
                    return fmt_double(c.cell.isotope_fraction);
                  }}});
    t.push_back({"cell.density_m3",
                 {[](ExperimentConfig& c, const std::string& v, int line) {
                    if (v == "auto") {
                      c.density_auto = true;
                    } else {
                      c.density_auto = false;
                      c.cell.density_n0 = parse_double(v, line);
                    }
                  },
                  [](const ExperimentConfig& c) {
                    return c.density_auto ? std::string("auto")
                                          : fmt_double(c.cell.density_n0);
                  }}});
    // [laser]
    dbl("laser.probe_power_w", &ExperimentConfig::probe_power);
    dbl("laser.coupling_power_w", &ExperimentConfig::coupling_power);
    dbl("laser.coupling_waist_m", &ExperimentConfig::coupling_waist);
    dbl("laser.probe_detuning_hz", &ExperimentConfig::probe_detuning_hz);
    dbl("laser.coupling_detuning_hz", &ExperimentConfig::coupling_detuning_hz);
    dbl("laser.rf_detuning_hz", &ExperimentConfig::rf_detuning_hz);
    dbl("laser.output_scale", &ExperimentConfig::output_scale);
    // [detector]
    auto det = [&t](const std::string& key, double DetectorModel::*member) {
      t.push_back({key,
                   {[member](ExperimentConfig& c, const std::string& v,
                             int line) {
                      c.detector.*member = parse_double(v, line);
                    },
                    [member](const ExperimentConfig& c) {
                      return fmt_double(c.detector.*member);
                    }}});
    };
    det("detector.responsivity_a_per_w", &DetectorModel::responsivity);
    det("detector.gain_v_per_a", &DetectorModel::gain);
    det("detector.bandwidth_hz", &DetectorModel::bandwidth);
    det("detector.dark_current_a", &DetectorModel::dark_current);
    det("detector.load_resistance_ohm", &DetectorModel::load_resistance);
    det("detector.temperature_k", &DetectorModel::temperature);
    // [schedule]
    dbl("schedule.f_s_hz", &ExperimentConfig::f_s);
    dbl("schedule.f_r_hz", &ExperimentConfig::f_r);
    dbl("schedule.pulse_width_s", &ExperimentConfig::pulse_width);
    t.push_back({"schedule.pulse_pairs",
                 {[](ExperimentConfig& c, const std::string& v, int line) {
                    c.pulse_pairs = parse_pair_list(v, line);
                  },
                  [](const ExperimentConfig& c) {
                    return fmt_pair_list(c.pulse_pairs);
                  }}});
    // [rf]
    dbl("rf.rabi_on_hz", &ExperimentConfig::rf_rabi_on_hz);
    dbl("rf.aperture_m2", &ExperimentConfig::rf_aperture);
    t.push_back({"rf.power_dbm",
                 {[](ExperimentConfig& c, const std::string& v, int line) {
                    c.rf_power_dbm = parse_double_list(v, line);
                  },
                  [](const ExperimentConfig& c) {
                    return fmt_double_list(c.rf_power_dbm);
                  }}});
    t.push_back({"rf.data_rate_hz",
                 {[](ExperimentConfig& c, const std::string& v, int line) {
                    c.data_rates_hz = parse_double_list(v, line);
                  },
                  [](const ExperimentConfig& c) {
                    return fmt_double_list(c.data_rates_hz);
                  }}});
    t.push_back({"rf.bit_pattern",
                 {[](ExperimentConfig& c, const std::string& v, int) {
                    c.bit_pattern = v;
                  },
                  [](const ExperimentConfig& c) { return c.bit_pattern; }}});
    // [numerics]
    dbl("numerics.dt_factor", &ExperimentConfig::dt_factor);
    t.push_back({"numerics.velocity_classes",
                 {[](ExperimentConfig& c, const std::string& v, int line) {
                    c.n_velocity_classes =
                        static_cast<int>(parse_long(v, line));
                  },
                  [](const ExperimentConfig& c) {
                    return std::to_string(c.n_velocity_classes);
                  }}});
    t.push_back({"numerics.repetitions",
                 {[](ExperimentConfig& c, const std::string& v, int line) {
                    c.repetitions = static_cast<int>(parse_long(v, line));
                  },
                  [](const ExperimentConfig& c) {
                    return std::to_string(c.repetitions);
                  }}});
    t.push_back({"numerics.min_repetitions",
                 {[](ExperimentConfig& c, const std::string& v, int line) {
                    c.min_repetitions = static_cast<int>(parse_long(v, line));
                  },
                  [](const ExperimentConfig& c) {
                    return std::to_string(c.min_repetitions);
                  }}});
    t.push_back({"numerics.seed",
                 {[](ExperimentConfig& c, const std::string& v, int line) {
                    c.seed = parse_uint64(v, line);
                  },
                  [](const ExperimentConfig& c) {
                    return std::to_string(c.seed);
                  }}});
    t.push_back({"numerics.noise_metric",
                 {[](ExperimentConfig& c, const std::string& v, int line) {
                    if (v == "pair") {
                      c.noise_metric = NoiseMetricMode::kPair;
                    } else if (v == "single") {
                      c.noise_metric = NoiseMetricMode::kSingle;
                    } else {
                      throw ConfigParseError(
                          "noise_metric must be 'pair' or 'single'", line);
                    }
                  },
                  [](const ExperimentConfig& c) {
                    return std::string(
                        c.noise_metric == NoiseMetricMode::kPair ? "pair"
                                                                 : "single");
                  }}});
    // [spectrum]
    dbl("spectrum.span_hz", &ExperimentConfig::spectrum_span_hz);
    t.push_back({"spectrum.points",
                 {[](ExperimentConfig& c, const std::string& v, int line) {
                    c.spectrum_points = static_cast<int>(parse_long(v, line));
                  },
                  [](const ExperimentConfig& c) {
                    return std::to_string(c.spectrum_points);
                  }}});
    t.push_back({"spectrum.rf_on",
                 {[](ExperimentConfig& c, const std::string& v, int line) {
                    c.spectrum_rf_on = parse_bool(v, line);
                  },
                  [](const ExperimentConfig& c) {
                    return std::string(c.spectrum_rf_on ? "true" : "false");
                  }}});
    // [output]
    t.push_back({"output.directory",
                 {[](ExperimentConfig& c, const std::string& v, int) {
                    c.output_dir = v;
                  },
                  [](const ExperimentConfig& c) { return c.output_dir; }}});
    t.push_back({"output.format",
                 {[](ExperimentConfig& c, const std::string& v, int) {
                    c.output_format = v;
                  },
                  [](const ExperimentConfig& c) { return c.output_format; }}});
    return t;
  }();
  return tbl;
}

}  // namespace config_detail

// Resolve "auto" fields and keep the duplicated geometry/temperature entries
// in sync.
inline void finalize_config(ExperimentConfig& cfg) {
  cfg.atomic.temperature = cfg.cell.temperature;
  cfg.atomic.cell_length = cfg.cell.length;
  if (cfg.transit_auto && cfg.cell.temperature > 0.0 &&
      cfg.atomic.atom_mass > 0.0 && cfg.atomic.beam_waist > 0.0) {
    cfg.atomic.transit_rate = transit_rate_from_geometry(
        cfg.cell.temperature, cfg.atomic.atom_mass, cfg.atomic.beam_waist);
  }
  if (cfg.density_auto && cfg.cell.temperature > 0.0) {
    cfg.cell.density_n0 =
        rb_number_density(cfg.cell.temperature) * cfg.cell.isotope_fraction;
  }
}

// Collects every violated constraint into one error.
inline void validate_config(const ExperimentConfig& cfg) {
  std::vector<std::string> bad;
  auto check = [&bad](bool ok, const std::string& msg) {
    if (!ok) bad.push_back(msg);
  };
  try {
    cfg.atomic.validate();
  } catch (const InvalidParameterError& e) {
    bad.push_back(e.what());
  }
  try {
    cfg.cell.validate();
  } catch (const InvalidParameterError& e) {
    bad.push_back(e.what());
  }
  try {
    cfg.detector.validate();
  } catch (const InvalidParameterError& e) {
    bad.push_back(e.what());
  }
  check(cfg.probe_power > 0.0, "laser.probe_power_w must be > 0");
  check(cfg.coupling_power > 0.0, "laser.coupling_power_w must be > 0");
  check(cfg.coupling_waist > 0.0, "laser.coupling_waist_m must be > 0");
  check(cfg.output_scale > 0.0, "laser.output_scale must be > 0");
  check(cfg.f_s > 0.0, "schedule.f_s_hz must be > 0");
  check(cfg.f_r > 0.0, "schedule.f_r_hz must be > 0");
  check(cfg.pulse_width > 0.0, "schedule.pulse_width_s must be > 0");
  if (cfg.f_s > 0.0 && cfg.f_r > 0.0) {
    const double ratio = cfg.f_s / cfg.f_r;
    check(std::abs(ratio - std::round(ratio)) <= 1e-9 * ratio &&
              std::round(ratio) >= 1.0,
          "schedule: f_s / f_r must be a positive integer");
    check(cfg.pulse_width <= 1.0 / cfg.f_s * (1.0 + 1e-12),
          "schedule: pulse_width_s must not exceed 1 / f_s_hz");
  }
  for (const auto& p : cfg.pulse_pairs) {
    if (!(p.pulse_width > 0.0) || !(p.rep_period > p.pulse_width)) {
      bad.push_back("schedule.pulse_pairs: need 0 < width < rep for pair " +
                    config_detail::fmt_double(p.pulse_width) + ":" +
                    config_detail::fmt_double(p.rep_period));
    }
  }
  check(cfg.rf_rabi_on_hz >= 0.0, "rf.rabi_on_hz must be >= 0");
  check(cfg.rf_aperture > 0.0, "rf.aperture_m2 must be > 0");
  check(!cfg.rf_power_dbm.empty(), "rf.power_dbm must be non-empty");
  for (double p : cfg.rf_power_dbm) {
    if (!std::isfinite(p)) {
      bad.push_back("rf.power_dbm entries must be finite");
      break;
    }
  }
  check(!cfg.data_rates_hz.empty(), "rf.data_rate_hz must be non-empty");
  for (double r : cfg.data_rates_hz) {
    if (!(r > 0.0)) {
      bad.push_back("rf.data_rate_hz entries must be > 0");
      break;
    }
  }
  check(!cfg.bit_pattern.empty(), "rf.bit_pattern must be non-empty");
  for (char b : cfg.bit_pattern) {
    if (b != '0' && b != '1') {
      bad.push_back("rf.bit_pattern must contain only 0 and 1");
      break;
    }
  }
  check(cfg.dt_factor >= 1.0, "numerics.dt_factor must be >= 1");
  check(cfg.n_velocity_classes >= 3 && cfg.n_velocity_classes % 2 == 1,
        "numerics.velocity_classes must be odd and >= 3");
  check(cfg.min_repetitions >= 1, "numerics.min_repetitions must be >= 1");
  check(cfg.repetitions >= cfg.min_repetitions,
        "numerics.repetitions must be >= numerics.min_repetitions");
  check(cfg.spectrum_span_hz > 0.0, "spectrum.span_hz must be > 0");
  check(cfg.spectrum_points >= 3, "spectrum.points must be >= 3");
  check(!cfg.output_dir.empty(), "output.directory must be non-empty");
  check(cfg.output_format == "csv", "output.format must be 'csv'");
  if (!bad.empty()) {
    std::string msg = "invalid config:";
    for (const auto& m : bad) msg += "\n  - " + m;
    throw ConfigValidationError(msg);
  }
}

inline ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  const auto& tbl = config_detail::schema();
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto hash = raw.find_first_of("#;");
    std::string line =
        config_detail::trim(hash == std::string::npos ? raw
                                                      : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ConfigParseError("malformed section header '" + line + "'",
                               line_no);
      }
      section = config_detail::trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigParseError("expected 'key = value', got '" + line + "'",
                             line_no);
    }
    const std::string key =
        section + "." + config_detail::trim(line.substr(0, eq));
    const std::string value = config_detail::trim(line.substr(eq + 1));
    bool found = false;
    for (const auto& [name, handler] : tbl) {
      if (name == key) {
        handler.set(cfg, value, line_no);
        found = true;
        break;
      }
    }
    if (!found) {
      throw ConfigParseError("unknown key '" + key + "'", line_no);
    }
  }
  finalize_config(cfg);
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  ExperimentConfig cfg = parse_config_text(buf.str());
  validate_config(cfg);
  return cfg;
}

// Canonical form: every key in schema order. Loading the output reproduces
// the config (and its hash) exactly.
inline std::string serialize_config(const ExperimentConfig& cfg) {
  std::string out;
  std::string section;
  for (const auto& [name, handler] : config_detail::schema()) {
    const auto dot = name.find('.');
    const std::string sec = name.substr(0, dot);
    if (sec != section) {
      if (!out.empty()) out += "\n";
      out += "[" + sec + "]\n";
      section = sec;
    }
    out += name.substr(dot + 1) + " = " + handler.get(cfg) + "\n";
  }
  return out;
}

// FNV-1a over the canonical serialization.
inline uint64_t config_hash(const ExperimentConfig& cfg) {
  const std::string s = serialize_config(cfg);
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string config_hash_hex(const ExperimentConfig& cfg) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(config_hash(cfg)));
  return buf;
}

}  // namespace stmr
