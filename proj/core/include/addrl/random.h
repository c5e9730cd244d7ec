// Copyright 2026 The addrl Authors.
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

#ifndef ADDRL_RANDOM_H_
#define ADDRL_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace addrl {

// Counter-based generator: the n-th output is a pure function of
// (key, n), where the key is derived from a seed and any number of stream
// identifiers. Two generators built from the same seed and streams produce
// identical sequences on every platform.
//
// Satisfies UniformRandomBitGenerator so it composes with <algorithm>.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed,
                      std::initializer_list<std::uint64_t> streams = {});

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform();
  // Uniform in [lo, hi).
  double uniform(double lo, double hi);
  // Uniform integer in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n);
  // Standard normal via Box-Muller (one value per call, no caching).
  double normal();

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }
  void set_counter(std::uint64_t counter) { counter_ = counter; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// SplitMix64 finalizer; bijective 64-bit mixing.
std::uint64_t Mix64(std::uint64_t x);

}  // namespace addrl

#endif  // ADDRL_RANDOM_H_
