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

#include "airfl/alignment.h"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace airfl {
namespace {

constexpr double kAlignmentTolerance = 1e-9;
// Slack for gradients that were clipped to exactly L.
constexpr double kClipSlack = 1e-12;

void CheckGradients(const ChannelState& ch,
                    std::span<const Eigen::VectorXd> gradients) {
  if (gradients.size() != ch.num_users()) {
    throw std::invalid_argument("expected one gradient per user");
  }
  const Eigen::Index d = gradients.front().size();
  if (d < 1) throw std::invalid_argument("gradients must be non-empty");
  for (const auto& g : gradients) {
    if (g.size() != d) {
      throw std::invalid_argument("gradient dimensions differ across users");
    }
  }
}

}  // namespace

void PowerPlan::ValidateBudget(const ChannelState& ch) const {
  const std::size_t k = ch.num_users();
  if (alpha.size() != k || beta.size() != k) {
    throw std::invalid_argument("power plan: alpha and beta need K entries");
  }
  if (!(clip_norm > 0.0)) {
    throw std::invalid_argument("power plan: clip norm must be positive");
  }
  if (!(backoff > 0.0 && backoff <= 1.0)) {
    throw std::invalid_argument("power plan: backoff must lie in (0, 1]");
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (!(alpha[i] >= 0.0 && alpha[i] <= 1.0)) {
      throw std::invalid_argument("power plan: alpha_" + std::to_string(i) +
                                  " outside [0, 1]");
    }
    if (!(beta[i] >= 0.0 && beta[i] <= 1.0 - alpha[i] + 1e-12)) {
      throw std::invalid_argument("power plan: beta_" + std::to_string(i) +
                                  " outside [0, 1 - alpha]");
    }
  }
}

void PowerPlan::ValidateAlignment(const ChannelState& ch) const {
  ValidateBudget(ch);
  if (!(c > 0.0)) throw std::invalid_argument("power plan: c must be > 0");
  for (std::size_t i = 0; i < ch.num_users(); ++i) {
    const double gain = ch.gain[i] * std::sqrt(alpha[i] * ch.power[i]) /
                        clip_norm;
    if (std::abs(gain - c) > kAlignmentTolerance * c) {
      throw std::invalid_argument("power plan: user " + std::to_string(i) +
                                  " is not aligned");
    }
  }
}

Eigen::VectorXd ClipGradient(const Eigen::VectorXd& g, double clip_norm) {
  const double norm = g.norm();
  if (norm <= clip_norm) return g;
  return g * (clip_norm / norm);
}

Alignment ComputeAlignment(const ChannelState& ch, double clip_norm,
                           double backoff) {
  ch.Validate();
  if (!(clip_norm > 0.0)) {
    throw std::invalid_argument("ComputeAlignment: clip norm must be > 0");
  }
  if (!(backoff > 0.0 && backoff <= 1.0)) {
    throw std::invalid_argument("ComputeAlignment: backoff must be in (0, 1]");
  }
  const double min_snr = MinEffectiveSnr(ch);
  Alignment out;
  out.c = backoff * std::sqrt(min_snr) / clip_norm;
  out.alpha.resize(ch.num_users());
  const double scaled_min = backoff * backoff * min_snr;
  for (std::size_t k = 0; k < ch.num_users(); ++k) {
    out.alpha[k] = scaled_min / ch.effective_snr(k);
  }
  return out;
}

PowerPlan MakePowerPlan(const ChannelState& ch, double clip_norm,
                        std::vector<double> beta, double backoff) {
  Alignment a = ComputeAlignment(ch, clip_norm, backoff);
  PowerPlan plan{.alpha = std::move(a.alpha),
                 .beta = std::move(beta),
                 .c = a.c,
                 .clip_norm = clip_norm,
                 .backoff = backoff};
  plan.ValidateAlignment(ch);
  return plan;
}

Eigen::VectorXd BuildTransmitSignal(const Eigen::VectorXd& g_clipped,
                                    std::size_t user, const PowerPlan& plan,
                                    const ChannelState& ch, Rng& rng) {
  if (user >= ch.num_users()) {
    throw std::invalid_argument("BuildTransmitSignal: user out of range");
  }
  if (g_clipped.norm() > plan.clip_norm * (1.0 + kClipSlack)) {
    throw std::domain_error(
        "BuildTransmitSignal: gradient norm exceeds the clipping bound");
  }
  const double p = ch.power[user];
  Eigen::VectorXd x = (std::sqrt(plan.alpha[user] * p) / plan.clip_norm) *
                      g_clipped;
  if (plan.beta[user] > 0.0) {
    x += rng.GaussianVector(x.size(), std::sqrt(plan.beta[user] * p));
  }
  return x;
}

double EffectiveNoiseVariance(const ChannelState& ch, const PowerPlan& plan) {
  double noise = ch.noise_var;
  for (std::size_t k = 0; k < ch.num_users(); ++k) {
    noise += ch.effective_snr(k) * plan.beta[k];
  }
  const double kc = static_cast<double>(ch.num_users()) * plan.c;
  return noise / (kc * kc);
}

AggregateResult AggregateRound(const ChannelState& ch, const PowerPlan& plan,
                               std::span<const Eigen::VectorXd> gradients,
                               Rng& rng) {
  CheckGradients(ch, gradients);
  std::vector<Eigen::VectorXd> signals;
  signals.reserve(gradients.size());
  for (std::size_t k = 0; k < gradients.size(); ++k) {
    signals.push_back(BuildTransmitSignal(gradients[k], k, plan, ch, rng));
  }
  Eigen::VectorXd y = MacTransmit(ch, signals, rng);
  const double kc = static_cast<double>(ch.num_users()) * plan.c;
  return {.estimate = y / kc, .noise_var = EffectiveNoiseVariance(ch, plan)};
}

AggregateResult OrthogonalRound(const ChannelState& ch, const PowerPlan& plan,
                                std::span<const Eigen::VectorXd> gradients,
                                Rng& rng) {
  CheckGradients(ch, gradients);
  const std::size_t num_users = ch.num_users();
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(gradients.front().size());
  for (std::size_t k = 0; k < num_users; ++k) {
    if (!(plan.alpha[k] > 0.0)) {
      throw std::invalid_argument(
          "OrthogonalRound: every user needs alpha > 0");
    }
    Eigen::VectorXd x = BuildTransmitSignal(gradients[k], k, plan, ch, rng);
    Eigen::VectorXd y = ch.gain[k] * x;
    if (ch.noise_var > 0.0) {
      y += rng.GaussianVector(y.size(), std::sqrt(ch.noise_var));
    }
    const double gain =
        ch.gain[k] * std::sqrt(plan.alpha[k] * ch.power[k]) / plan.clip_norm;
    sum += y / gain;
  }
  return {.estimate = sum / static_cast<double>(num_users),
          .noise_var = OrthogonalNoiseVariance(ch, plan)};
}

double OrthogonalNoiseVariance(const ChannelState& ch, const PowerPlan& plan) {
  const double num_users = static_cast<double>(ch.num_users());
  const double l_sq = plan.clip_norm * plan.clip_norm;
  double total = 0.0;
  for (std::size_t k = 0; k < ch.num_users(); ++k) {
    const double snr = ch.effective_snr(k);
    total += (snr * plan.beta[k] + ch.noise_var) * l_sq / (snr * plan.alpha[k]);
  }
  return total / (num_users * num_users);
}

}  // namespace airfl
