// Copyright 2026 The mecafuse Authors
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

#include "mecafuse/harness/config.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "mecafuse/errors.h"

namespace mecafuse::harness {
namespace {

namespace pt = boost::property_tree;

std::string Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> Split(std::string_view s, char delimiter) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(delimiter, start);
    parts.push_back(Trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double ParseDouble(const std::string& field, std::string_view text) {
  const std::string value = Trim(text);
  double out = 0.0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() ||
      value.empty() || !std::isfinite(out)) {
    throw ConfigError(field, "expected a finite number, got '" + value + "'");
  }
  return out;
}

std::int64_t ParseInteger(const std::string& field, std::string_view text) {
  const std::string value = Trim(text);
  std::int64_t out = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() ||
      value.empty()) {
    throw ConfigError(field, "expected an integer, got '" + value + "'");
  }
  return out;
}

bool ParseBool(const std::string& field, std::string_view text) {
  const std::string value = Trim(text);
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError(field, "expected true or false, got '" + value + "'");
}

double Positive(const std::string& field, double value) {
  if (value <= 0.0) throw ConfigError(field, "must be positive");
  return value;
}

double NonNegative(const std::string& field, double value) {
  if (value < 0.0) throw ConfigError(field, "must be >= 0");
  return value;
}

std::string Num(double value) { return fmt::format("{}", value); }

using Setter = std::function<void(ExperimentConfig&, const std::string& field,
                                  const std::string& value)>;
using Getter = std::function<std::string(const ExperimentConfig&)>;

struct Field {
  std::string section;
  std::string key;
  Setter set;
  Getter get;
};

// `units_per_si` is the number of file units in one stored SI unit (1000
// for a value written in mm and stored in m).
template <typename Access>
Field DoubleField(std::string section, std::string key, Access access,
                  bool allow_zero, double units_per_si = 1.0) {
  return Field{
      std::move(section), std::move(key),
      [access, allow_zero, units_per_si](ExperimentConfig& c, const std::string& f,
                                  const std::string& v) {
        const double parsed = ParseDouble(f, v);
        access(c) =
            (allow_zero ? NonNegative(f, parsed) : Positive(f, parsed)) / units_per_si;
      },
      [access, units_per_si](const ExperimentConfig& c) {
        return Num(access(c) * units_per_si);
      }};
}

template <typename Access>
Field BoolField(std::string section, std::string key, Access access) {
  return Field{std::move(section), std::move(key),
               [access](ExperimentConfig& c, const std::string& f,
                        const std::string& v) { access(c) = ParseBool(f, v); },
               [access](const ExperimentConfig& c) {
                 return std::string(access(c) ? "true" : "false");
               }};
}

std::string FormatBeacons(const BeaconLayout& layout) {
  std::string out;
  for (std::size_t i = 0; i < layout.size(); ++i) {
    const Eigen::Vector3d& b = layout.beacons()[i];
    if (i > 0) out += "; ";
    out += fmt::format("{} {} {}", b.x(), b.y(), b.z());
  }
  return out;
}

BeaconLayout ParseBeacons(const std::string& field, const std::string& value,
                          double speed_of_sound) {
  std::vector<Eigen::Vector3d> beacons;
  for (const std::string& entry : Split(value, ';')) {
    if (entry.empty()) continue;
    std::istringstream in(entry);
    std::vector<double> coords;
    std::string token;
    while (in >> token) coords.push_back(ParseDouble(field, token));
    if (coords.size() != 3) {
      throw ConfigError(field, "each beacon needs 'x y z', got '" + entry + "'");
    }
    beacons.emplace_back(coords[0], coords[1], coords[2]);
  }
  try {
    return BeaconLayout(std::move(beacons), speed_of_sound);
  } catch (const InvalidInput& e) {
    throw ConfigError(field, e.what());
  }
}

const std::vector<Field>& Fields() {
  static const std::vector<Field> fields = [] {
    std::vector<Field> f;
    // [geometry]
    f.push_back(DoubleField(
        "geometry", "wheel_radius_mm",
        [](auto& c) -> auto& {
          return c.world.geometry.wheel_radius;
        },
        false, 1e3));
    f.push_back(DoubleField(
        "geometry", "half_wheelbase_mm",
        [](auto& c) -> auto& {
          return c.world.geometry.half_wheelbase;
        },
        false, 1e3));
    f.push_back(DoubleField(
        "geometry", "half_track_mm",
        [](auto& c) -> auto& {
          return c.world.geometry.half_track;
        },
        false, 1e3));
    f.push_back(DoubleField(
        "geometry", "encoder_ppr",
        [](auto& c) -> auto& { return c.world.odometry.ppr; },
        false));

    // [plan]
    f.push_back(DoubleField(
        "plan", "side_length_m",
        [](auto& c) -> auto& {
          return c.world.plan.side_length;
        },
        false));
    f.push_back(DoubleField(
        "plan", "cruise_speed_mps",
        [](auto& c) -> auto& {
          return c.world.plan.cruise_speed;
        },
        false));
    f.push_back(Field{
        "plan", "odometry_rate_hz",
        [](ExperimentConfig& c, const std::string& field,
           const std::string& v) {
          c.world.plan.dt = 1.0 / Positive(field, ParseDouble(field, v));
        },
        [](const ExperimentConfig& c) { return Num(1.0 / c.world.plan.dt); }});
    f.push_back(Field{
        "plan", "laps",
        [](ExperimentConfig& c, const std::string& field,
           const std::string& v) {
          const auto laps = ParseInteger(field, v);
          if (laps < 1 || laps > 10000) {
            throw ConfigError(field, "must lie in [1, 10000]");
          }
          c.world.plan.laps = static_cast<int>(laps);
        },
        [](const ExperimentConfig& c) {
          return std::to_string(c.world.plan.laps);
        }});
    f.push_back(Field{
        "plan", "truth_substeps",
        [](ExperimentConfig& c, const std::string& field,
           const std::string& v) {
          const auto n = ParseInteger(field, v);
          if (n < 1 || n > 1000) {
            throw ConfigError(field, "must lie in [1, 1000]");
          }
          c.world.plan.truth_substeps = static_cast<int>(n);
        },
        [](const ExperimentConfig& c) {
          return std::to_string(c.world.plan.truth_substeps);
        }});

    // [slip]
    f.push_back(Field{
        "slip", "mode",
        [](ExperimentConfig& c, const std::string& field,
           const std::string& v) {
          const std::string mode = Trim(v);
          if (mode == "over_report") {
            c.world.slip.mode = SlipMode::kOverReport;
          } else if (mode == "under_report") {
            c.world.slip.mode = SlipMode::kUnderReport;
          } else {
            throw ConfigError(field,
                              "expected over_report or under_report, got '" +
                                  mode + "'");
          }
        },
        [](const ExperimentConfig& c) {
          return std::string(c.world.slip.mode == SlipMode::kOverReport
                                 ? "over_report"
                                 : "under_report");
        }});
    f.push_back(Field{
        "slip", "factors",
        [](ExperimentConfig& c, const std::string& field,
           const std::string& v) {
          const auto parts = Split(v, ',');
          if (parts.size() != kNumWheels) {
            throw ConfigError(field, "expected four comma-separated factors "
                                     "(front_left, front_right, rear_left, "
                                     "rear_right)");
          }
          for (int i = 0; i < kNumWheels; ++i) {
            c.world.slip.factors[i] =
                Positive(field, ParseDouble(field, parts[i]));
          }
        },
        [](const ExperimentConfig& c) {
          const auto& s = c.world.slip.factors;
          return fmt::format("{}, {}, {}, {}", s[0], s[1], s[2], s[3]);
        }});
    f.push_back(DoubleField(
        "slip", "jitter_std",
        [](auto& c) -> auto& {
          return c.world.slip.jitter_std;
        },
        true));

    // [odometry]
    f.push_back(Field{
        "odometry", "noise_mode",
        [](ExperimentConfig& c, const std::string& field,
           const std::string& v) {
          const std::string mode = Trim(v);
          if (mode == "encoder") {
            c.world.odometry.mode = OdometryNoiseMode::kEncoder;
          } else if (mode == "twist") {
            c.world.odometry.mode = OdometryNoiseMode::kTwist;
          } else {
            throw ConfigError(field,
                              "expected encoder or twist, got '" + mode + "'");
          }
        },
        [](const ExperimentConfig& c) {
          return std::string(
              c.world.odometry.mode == OdometryNoiseMode::kEncoder ? "encoder"
                                                                   : "twist");
        }});
    f.push_back(DoubleField(
        "odometry", "sigma_vx_mps",
        [](auto& c) -> auto& {
          return c.world.odometry.sigma_vx;
        },
        true));
    f.push_back(DoubleField(
        "odometry", "sigma_vy_mps",
        [](auto& c) -> auto& {
          return c.world.odometry.sigma_vy;
        },
        true));
    f.push_back(DoubleField(
        "odometry", "sigma_omega_radps",
        [](auto& c) -> auto& {
          return c.world.odometry.sigma_omega;
        },
        true));

    // [ips]
    f.push_back(BoolField("ips", "enabled",
                          [](auto& c) -> auto& {
                            return c.world.ips.enabled;
                          }));
    f.push_back(Field{
        "ips", "noise_mode",
        [](ExperimentConfig& c, const std::string& field,
           const std::string& v) {
          const std::string mode = Trim(v);
          if (mode == "range") {
            c.world.ips.noise_mode = IpsNoiseMode::kRange;
          } else if (mode == "coordinate") {
            c.world.ips.noise_mode = IpsNoiseMode::kCoordinate;
          } else {
            throw ConfigError(
                field, "expected range or coordinate, got '" + mode + "'");
          }
        },
        [](const ExperimentConfig& c) {
          return std::string(c.world.ips.noise_mode == IpsNoiseMode::kRange
                                 ? "range"
                                 : "coordinate");
        }});
    f.push_back(DoubleField(
        "ips", "sigma_range_m",
        [](auto& c) -> auto& { return c.world.ips.sigma_range; },
        true));
    f.push_back(DoubleField(
        "ips", "sigma_xy_m",
        [](auto& c) -> auto& { return c.world.ips.sigma_xy; },
        true));
    f.push_back(DoubleField(
        "ips", "rate_hz",
        [](auto& c) -> auto& { return c.world.ips.rate_hz; },
        false));
    f.push_back(Field{
        "ips", "dropout_prob",
        [](ExperimentConfig& c, const std::string& field,
           const std::string& v) {
          const double p = ParseDouble(field, v);
          if (!(p >= 0.0 && p < 1.0)) {
            throw ConfigError(field, "must lie in [0, 1)");
          }
          c.world.ips.dropout_prob = p;
        },
        [](const ExperimentConfig& c) {
          return Num(c.world.ips.dropout_prob);
        }});
    f.push_back(DoubleField(
        "ips", "mobile_height_m",
        [](auto& c) -> auto& {
          return c.world.ips.mobile_height;
        },
        true));
    f.push_back(Field{
        "ips", "speed_of_sound_mps",
        [](ExperimentConfig& c, const std::string& field,
           const std::string& v) {
          const double speed = Positive(field, ParseDouble(field, v));
          c.world.ips.layout =
              BeaconLayout(c.world.ips.layout.beacons(), speed);
        },
        [](const ExperimentConfig& c) {
          return Num(c.world.ips.layout.speed_of_sound());
        }});
    f.push_back(Field{
        "ips", "beacons_m",
        [](ExperimentConfig& c, const std::string& field,
           const std::string& v) {
          c.world.ips.layout =
              ParseBeacons(field, v, c.world.ips.layout.speed_of_sound());
        },
        [](const ExperimentConfig& c) {
          return FormatBeacons(c.world.ips.layout);
        }});

    // [filter]
    f.push_back(DoubleField(
        "filter", "sigma_vx_mps",
        [](auto& c) -> auto& {
          return c.filter.process.sigma_vx;
        },
        false));
    f.push_back(DoubleField(
        "filter", "sigma_vy_mps",
        [](auto& c) -> auto& {
          return c.filter.process.sigma_vy;
        },
        false));
    f.push_back(DoubleField(
        "filter", "sigma_omega_radps",
        [](auto& c) -> auto& {
          return c.filter.process.sigma_omega;
        },
        false));
    f.push_back(DoubleField(
        "filter", "sigma_ips_m",
        [](auto& c) -> auto& {
          return c.filter.measurement.sigma_ips;
        },
        false));
    f.push_back(DoubleField(
        "filter", "initial_var_x_m2",
        [](auto& c) -> auto& { return c.initial_variance(0); },
        false));
    f.push_back(DoubleField(
        "filter", "initial_var_y_m2",
        [](auto& c) -> auto& { return c.initial_variance(1); },
        false));
    f.push_back(DoubleField(
        "filter", "initial_var_theta_rad2",
        [](auto& c) -> auto& { return c.initial_variance(2); },
        false));
    f.push_back(BoolField("filter", "gate_enabled",
                          [](auto& c) -> auto& {
                            return c.filter.gate_enabled;
                          }));
    f.push_back(DoubleField(
        "filter", "gate_threshold",
        [](auto& c) -> auto& {
          return c.filter.gate_threshold;
        },
        false));

    // [run]
    f.push_back(Field{
        "run", "seed",
        [](ExperimentConfig& c, const std::string& field,
           const std::string& v) {
          const auto seed = ParseInteger(field, v);
          if (seed < 0) throw ConfigError(field, "must be >= 0");
          c.seed = static_cast<std::uint64_t>(seed);
        },
        [](const ExperimentConfig& c) { return std::to_string(c.seed); }});
    f.push_back(Field{
        "run", "runs",
        [](ExperimentConfig& c, const std::string& field,
           const std::string& v) {
          const auto runs = ParseInteger(field, v);
          if (runs < 1 || runs > 100000) {
            throw ConfigError(field, "must lie in [1, 100000]");
          }
          c.runs = static_cast<int>(runs);
        },
        [](const ExperimentConfig& c) { return std::to_string(c.runs); }});
    return f;
  }();
  return fields;
}

}  // namespace

ExperimentConfig::ExperimentConfig() {
  world.slip.factors = {1.02, 1.02, 1.0, 1.0};
  world.slip.jitter_std = 0.005;
  world.slip.mode = SlipMode::kOverReport;
}

void ExperimentConfig::Validate() const {
  const auto wrap = [](const char* field, const auto& check) {
    try {
      check();
    } catch (const ConfigError&) {
      throw;
    } catch (const InvalidInput& e) {
      throw ConfigError(field, e.what());
    }
  };
  wrap("geometry", [&] { world.geometry.Validate(); });
  wrap("plan", [&] { world.plan.Validate(); });
  wrap("slip", [&] { world.slip.Validate(); });
  wrap("odometry", [&] { world.odometry.Validate(); });
  wrap("ips", [&] { world.ips.Validate(); });
  wrap("filter", [&] {
    filter.process.Validate();
    filter.measurement.Validate();
    if (!(initial_variance.array() > 0.0).all()) {
      throw InvalidInput("initial variances must be positive");
    }
  });
  if (runs < 1) throw ConfigError("run.runs", "must be >= 1");
}

ExperimentConfig ParseConfig(std::string_view text, std::string_view source) {
  pt::ptree tree;
  {
    std::istringstream in{std::string(text)};
    try {
      pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
      throw ConfigError(fmt::format("{}:{}", source, e.line()), e.message());
    }
  }

  ExperimentConfig config;
  const auto& fields = Fields();
  for (const auto& [section, keys] : tree) {
    if (keys.empty() && !keys.data().empty()) {
      throw ConfigError(section, "key outside of any [section]");
    }
    const bool known_section =
        std::any_of(fields.begin(), fields.end(),
                    [&](const Field& f) { return f.section == section; });
    if (!known_section) throw ConfigError(section, "unknown section");
    for (const auto& [key, value] : keys) {
      const std::string name = section + "." + key;
      const auto it = std::find_if(fields.begin(), fields.end(),
                                   [&](const Field& f) {
                                     return f.section == section && f.key == key;
                                   });
      if (it == fields.end()) throw ConfigError(name, "unknown key");
      it->set(config, name, value.data());
    }
  }
  config.Validate();
  return config;
}

ExperimentConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open config file");
  std::ostringstream text;
  text << in.rdbuf();
  return ParseConfig(text.str(), path.string());
}

std::string FormatConfig(const ExperimentConfig& config) {
  std::string out;
  std::string section;
  for (const Field& f : Fields()) {
    if (f.section != section) {
      if (!section.empty()) out += "\n";
      section = f.section;
      out += "[" + section + "]\n";
    }
    out += f.key + " = " + f.get(config) + "\n";
  }
  return out;
}

}  // namespace mecafuse::harness
