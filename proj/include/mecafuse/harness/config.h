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

#ifndef MECAFUSE_HARNESS_CONFIG_H_
#define MECAFUSE_HARNESS_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "mecafuse/ekf.h"
#include "mecafuse/world.h"

namespace mecafuse::harness {

// Everything one experiment needs. Defaults reproduce the reference
// platform (46.875 mm wheels, 135/125 mm half wheelbase/track, 1700 PPR
// encoders, 3 x 3 m arena, beacons at 2 m) with the drift-producing slip
// configuration used for acceptance runs.
struct ExperimentConfig {
  WorldConfig world;
  FilterOptions filter;
  Eigen::Vector3d initial_variance{0.01, 0.01, 0.01};
  std::uint64_t seed = 1;
  int runs = 1;

  ExperimentConfig();
  void Validate() const;
};

// Parses the sectioned key-value format:
//
//   [geometry]
//   wheel_radius_mm = 46.875
//   ...
//
// Keys omitted from the text keep their defaults. Unknown sections or keys,
// malformed values and values failing validation raise ConfigError naming
// the field as "section.key". `source` is used in messages only.
ExperimentConfig ParseConfig(std::string_view text,
                             std::string_view source = "<config>");

ExperimentConfig LoadConfig(const std::filesystem::path& path);

// Writes every key with its resolved value in the file units.
std::string FormatConfig(const ExperimentConfig& config);

}  // namespace mecafuse::harness

#endif  // MECAFUSE_HARNESS_CONFIG_H_
