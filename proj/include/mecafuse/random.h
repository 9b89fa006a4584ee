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

#ifndef MECAFUSE_RANDOM_H_
#define MECAFUSE_RANDOM_H_

#include <cstdint>
#include <random>

namespace mecafuse {

using Rng = std::mt19937_64;

// Independent, reproducible generator for one (seed, stream) pair. Each
// simulated sensor draws from its own stream so enabling one sensor does not
// perturb the noise sequence of another.
inline Rng MakeRng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

}  // namespace mecafuse

#endif  // MECAFUSE_RANDOM_H_
