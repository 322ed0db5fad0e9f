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

#ifndef AIRFL_CHANNEL_H_
#define AIRFL_CHANNEL_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "airfl/rng.h"

namespace airfl {

// Flat-fading Gaussian multiple-access channel between K users and the
// parameter server. Phases are stored but the simulation runs on the real
// baseband after each user's phase pre-correction, so only |h_k| scales the
// transmitted signal.
struct ChannelState {
  std::vector<double> gain;   // |h_k|, > 0
  std::vector<double> phase;  // phi_k in [0, 2pi), radians
  std::vector<double> power;  // P_k, watts, > 0
  double noise_var = 1.0;     // receiver noise variance sigma_m^2, >= 0

  std::size_t num_users() const { return gain.size(); }

  // |h_k|^2 P_k
  double effective_snr(std::size_t k) const {
    return gain[k] * gain[k] * power[k];
  }

  // Throws std::invalid_argument on any invariant violation.
  void Validate() const;
};

// P_watts = 10^((P_dBm - 30) / 10).
double DbmToWatts(double dbm);

// Draws h_k ~ CN(0, 1) for every user. Power and receiver noise are filled
// with the given defaults. Throws std::invalid_argument when num_users == 0.
ChannelState SampleChannel(std::size_t num_users, Rng& rng,
                           double power_watts = 1.0, double noise_var = 1.0);
ChannelState SampleChannel(std::size_t num_users, std::uint64_t seed,
                           double power_watts = 1.0, double noise_var = 1.0);

// All |h_k| = 1 and phi_k = 0.
ChannelState SymmetricChannel(std::size_t num_users, double power_watts,
                              double noise_var);

// One batched use of the channel per vector entry: returns
// sum_k |h_k| x_k + m with m ~ N(0, noise_var I). Receiver noise is drawn
// from `noise_rng` only when noise_var > 0.
Eigen::VectorXd MacTransmit(const ChannelState& ch,
                            std::span<const Eigen::VectorXd> signals,
                            Rng& noise_rng);

// min_j |h_j|^2 P_j, the SNR that limits gradient alignment.
double MinEffectiveSnr(const ChannelState& ch);

// Index of the user attaining MinEffectiveSnr (lowest index on ties).
std::size_t WorstSnrUser(const ChannelState& ch);

}  // namespace airfl

#endif  // AIRFL_CHANNEL_H_
