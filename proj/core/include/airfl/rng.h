// Copyright 2026 The AirFL Authors
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

#ifndef AIRFL_RNG_H_
#define AIRFL_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>

#include <Eigen/Core>

namespace airfl {

// Seeded generator with named substreams.
//
// A substream is derived from the parent's seed and a label only, so it does
// not depend on how many values the parent has already produced. Experiments
// give the channel, dataset and noise draws their own substreams; adding or
// removing a consumer never shifts the values another consumer sees.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  Rng Substream(std::string_view name) const;
  Rng Substream(std::uint64_t index) const;

  std::uint64_t seed() const { return seed_; }

  // Standard normal draw.
  double Gaussian() { return normal_(engine_); }
  // Uniform on [0, 1).
  double Uniform();
  std::uint64_t NextU64() { return engine_(); }

  // Vector of i.i.d. N(0, stddev^2) entries.
  Eigen::VectorXd GaussianVector(Eigen::Index size, double stddev = 1.0);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

// SplitMix64 finalizer; a bijective 64-bit mixer.
std::uint64_t MixBits(std::uint64_t x);

}  // namespace airfl

#endif  // AIRFL_RNG_H_
