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

#include "airfl/channel.h"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace airfl {

void ChannelState::Validate() const {
  const std::size_t k = gain.size();
  if (k == 0) throw std::invalid_argument("channel: need at least one user");
  if (phase.size() != k || power.size() != k) {
    throw std::invalid_argument(
        "channel: gain, phase and power must all have length K");
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (!(gain[i] > 0.0) || !std::isfinite(gain[i])) {
      throw std::invalid_argument("channel: |h_" + std::to_string(i) +
                                  "| must be positive and finite");
    }
    if (!(power[i] > 0.0) || !std::isfinite(power[i])) {
      throw std::invalid_argument("channel: P_" + std::to_string(i) +
                                  " must be positive and finite");
    }
  }
  if (!(noise_var >= 0.0) || !std::isfinite(noise_var)) {
    throw std::invalid_argument("channel: noise variance must be >= 0");
  }
}

double DbmToWatts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

ChannelState SampleChannel(std::size_t num_users, Rng& rng,
                           double power_watts, double noise_var) {
  if (num_users == 0) {
    throw std::invalid_argument("SampleChannel: K must be at least 1");
  }
  ChannelState ch;
  ch.gain.resize(num_users);
  ch.phase.resize(num_users);
  ch.power.assign(num_users, power_watts);
  ch.noise_var = noise_var;
  // CN(0, 1): real and imaginary parts each N(0, 1/2).
  const double scale = std::sqrt(0.5);
  for (std::size_t k = 0; k < num_users; ++k) {
    const double re = scale * rng.Gaussian();
    const double im = scale * rng.Gaussian();
    ch.gain[k] = std::hypot(re, im);
    double phi = std::atan2(im, re);
    if (phi < 0.0) phi += 2.0 * std::numbers::pi;
    if (phi >= 2.0 * std::numbers::pi) phi = 0.0;
    ch.phase[k] = phi;
  }
  ch.Validate();
  return ch;
}

ChannelState SampleChannel(std::size_t num_users, std::uint64_t seed,
                           double power_watts, double noise_var) {
  Rng rng(seed);
  return SampleChannel(num_users, rng, power_watts, noise_var);
}

ChannelState SymmetricChannel(std::size_t num_users, double power_watts,
                              double noise_var) {
  ChannelState ch;
  ch.gain.assign(num_users, 1.0);
  ch.phase.assign(num_users, 0.0);
  ch.power.assign(num_users, power_watts);
  ch.noise_var = noise_var;
  ch.Validate();
  return ch;
}

Eigen::VectorXd MacTransmit(const ChannelState& ch,
                            std::span<const Eigen::VectorXd> signals,
                            Rng& noise_rng) {
  if (signals.size() != ch.num_users()) {
    throw std::invalid_argument("MacTransmit: expected one signal per user");
  }
  const Eigen::Index d = signals.front().size();
  if (d < 1) throw std::invalid_argument("MacTransmit: empty signal");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(d);
  for (std::size_t k = 0; k < signals.size(); ++k) {
    if (signals[k].size() != d) {
      throw std::invalid_argument("MacTransmit: signal lengths differ");
    }
    y.noalias() += ch.gain[k] * signals[k];
  }
  if (ch.noise_var > 0.0) {
    y += noise_rng.GaussianVector(d, std::sqrt(ch.noise_var));
  }
  return y;
}

double MinEffectiveSnr(const ChannelState& ch) {
  return ch.effective_snr(WorstSnrUser(ch));
}

std::size_t WorstSnrUser(const ChannelState& ch) {
  std::size_t worst = 0;
  for (std::size_t k = 1; k < ch.num_users(); ++k) {
    if (ch.effective_snr(k) < ch.effective_snr(worst)) worst = k;
  }
  return worst;
}

}  // namespace airfl
