// Copyright 2026 The crnn authors
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

#ifndef CRNN_RNG_HPP
#define CRNN_RNG_HPP

#include <cstdint>
#include <vector>

namespace crnn {

// xoshiro256++ seeded through splitmix64. The generator is pinned (not the
// platform default) so that a given seed produces the same stream
// everywhere, which keeps seeded runs reproducible across toolchains.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t next_u64();

  // Uniform double in [0, 1) with 53 bits of randomness.
  double uniform();
  // Uniform double in [lo, hi).
  double uniform(double lo, double hi);
  // Uniform integer in [0, n). n must be positive.
  int uniform_int(int n);

  // Independent generator for (seed, stream); draws from a child never
  // depend on draws from the parent, so per-sample streams can be created
  // in any order.
  Rng child(uint64_t stream) const;

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(uniform_int(static_cast<int>(i)));
      std::swap(v[i - 1], v[j]);
    }
  }

  uint64_t seed() const { return seed_; }

 private:
  uint64_t seed_;
  uint64_t state_[4];
};

}  // namespace crnn

#endif  // CRNN_RNG_HPP
