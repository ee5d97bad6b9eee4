// Copyright 2026 The floqopt authors
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

#pragma once

#include <cstdint>
#include <random>

namespace floqopt {

// All randomness in a run derives from one master seed through
// counter-based splitting, so that independent streams (initial draws,
// ensembles, restarts, jitter) stay reproducible and order-independent.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

enum class Stream : std::uint64_t {
  init_amplitudes = 1,
  restart = 2,
  jitter = 3,
  ensemble_train = 4,
  ensemble_test = 5,
  validation = 6,
};

inline std::uint64_t derive_seed(std::uint64_t master, Stream stream,
                                 std::uint64_t counter = 0) {
  return splitmix64(splitmix64(master ^ (static_cast<std::uint64_t>(stream)
                                         << 32)) +
                    counter);
}

inline std::mt19937_64 make_rng(std::uint64_t master, Stream stream,
                                std::uint64_t counter = 0) {
  return std::mt19937_64(derive_seed(master, stream, counter));
}

}  // namespace floqopt
