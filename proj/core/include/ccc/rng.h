// Copyright 2026 The CCC Toolkit Authors.
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

#ifndef CCC_RNG_H_
#define CCC_RNG_H_

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace ccc {

// Seedable, splittable random stream.
//
// A stream is named by (seed, stream index); the engine state is derived
// from both through std::seed_seq, so stream i of seed s is the same on
// every run and every worker. Bounded draws use rejection sampling over raw
// engine output rather than <random> distributions, whose algorithms are
// implementation-defined, so sequences are identical across standard
// libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  // Independent child stream.
  Rng Split(std::uint64_t child) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  std::uint64_t NextU64() { return engine_(); }
  // Uniform on [0, n). n must be > 0.
  std::uint64_t Uniform(std::uint64_t n);
  // Uniform on [0, 1) with 53 bits of precision.
  double UniformReal();
  bool Bernoulli(double p) { return UniformReal() < p; }

  template <typename T>
  void Shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(Uniform(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

}  // namespace ccc

#endif  // CCC_RNG_H_
