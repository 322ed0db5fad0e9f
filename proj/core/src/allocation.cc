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

#include "airfl/allocation.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "airfl/errors.h"
#include "airfl/privacy.h"

namespace airfl {
namespace {

constexpr std::size_t kMaxOracleUsers = 6;

double Total(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0);
}

void CheckTargets(std::span<const double> eps_target, std::size_t num_users,
                  double delta) {
  if (eps_target.size() != num_users) {
    throw std::invalid_argument("need one epsilon target per user");
  }
  for (double e : eps_target) {
    if (!(e > 0.0)) throw std::invalid_argument("epsilon targets must be > 0");
  }
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1]");
  }
}

}  // namespace

void AllocationProblem::Validate() const {
  if (leftover.empty()) {
    throw std::invalid_argument("allocation: need at least one user");
  }
  for (double l : leftover) {
    if (!(l >= 0.0) || !std::isfinite(l)) {
      throw std::invalid_argument("allocation: leftover power must be >= 0");
    }
  }
  if (!std::isfinite(threshold)) {
    throw std::invalid_argument("allocation: threshold must be finite");
  }
}

double PrivacyThreshold(const ChannelState& ch,
                        std::span<const double> eps_target, double delta,
                        double backoff) {
  CheckTargets(eps_target, ch.num_users(), delta);
  const double tightest = *std::min_element(eps_target.begin(),
                                            eps_target.end());
  const double min_snr = backoff * backoff * MinEffectiveSnr(ch);
  return 8.0 * min_snr / (tightest * tightest) * std::log(1.25 / delta) -
         ch.noise_var;
}

AllocationProblem MakeAllocationProblem(const ChannelState& ch,
                                        std::span<const double> alpha,
                                        std::span<const double> eps_target,
                                        double delta, double backoff) {
  ch.Validate();
  if (alpha.size() != ch.num_users()) {
    throw std::invalid_argument("need one alpha per user");
  }
  AllocationProblem prob;
  prob.leftover.resize(ch.num_users());
  for (std::size_t k = 0; k < ch.num_users(); ++k) {
    prob.leftover[k] = ch.effective_snr(k) * (1.0 - alpha[k]);
  }
  prob.threshold = PrivacyThreshold(ch, eps_target, delta, backoff);
  return prob;
}

bool CheckFeasibility(const AllocationProblem& prob) {
  return prob.threshold <= 0.0 || Total(prob.leftover) >= prob.threshold;
}

std::vector<double> GreedyNoisePowers(const AllocationProblem& prob) {
  prob.Validate();
  const std::size_t num_users = prob.leftover.size();
  if (!CheckFeasibility(prob)) {
    throw InfeasibleError(prob.threshold - Total(prob.leftover),
                          std::numeric_limits<double>::quiet_NaN());
  }
  std::vector<double> z(num_users, 0.0);
  if (prob.threshold <= 0.0) return z;

  std::vector<std::size_t> order(num_users);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return prob.leftover[a] < prob.leftover[b];
                   });
  double remaining = prob.threshold;
  for (std::size_t k : order) {
    z[k] = std::min(prob.leftover[k], std::max(remaining, 0.0));
    remaining -= z[k];
  }
  return z;
}

std::vector<double> AllocateNoise(const ChannelState& ch,
                                  std::span<const double> alpha,
                                  std::span<const double> eps_target,
                                  double delta, double backoff) {
  const AllocationProblem prob =
      MakeAllocationProblem(ch, alpha, eps_target, delta, backoff);
  if (!CheckFeasibility(prob)) {
    double min_eps = std::numeric_limits<double>::infinity();
    const double cap_noise = Total(prob.leftover) + ch.noise_var;
    if (cap_noise > 0.0) {
      min_eps = GaussianMechanismEpsilon(Sensitivity(ch, backoff),
                                         std::sqrt(cap_noise), delta);
    }
    throw InfeasibleError(prob.threshold - Total(prob.leftover), min_eps);
  }
  const std::vector<double> z = GreedyNoisePowers(prob);
  std::vector<double> beta(ch.num_users());
  for (std::size_t k = 0; k < beta.size(); ++k) {
    beta[k] = std::min(z[k] / ch.effective_snr(k), 1.0 - alpha[k]);
  }
  return beta;
}

std::vector<double> BruteForceAllocation(const AllocationProblem& prob,
                                         std::uint64_t grid_steps) {
  prob.Validate();
  const std::size_t num_users = prob.leftover.size();
  if (num_users > kMaxOracleUsers) {
    throw std::invalid_argument("BruteForceAllocation: K must be <= 6");
  }
  if (grid_steps == 0) {
    throw std::invalid_argument("BruteForceAllocation: grid_steps must be > 0");
  }
  const double psi = prob.threshold;
  const double slack = 1e-12 * std::max(1.0, std::abs(psi));

  // State per user: 0 = off, 1 = at cap, 2 = free. At most one free user.
  std::size_t combos = 1;
  for (std::size_t k = 0; k < num_users; ++k) combos *= 3;

  std::vector<double> best;
  double best_total = std::numeric_limits<double>::infinity();
  std::vector<double> z(num_users);
  for (std::size_t code = 0; code < combos; ++code) {
    std::size_t rest = code;
    std::size_t free_user = num_users;
    int free_count = 0;
    double fixed = 0.0;
    for (std::size_t k = 0; k < num_users; ++k) {
      const std::size_t state = rest % 3;
      rest /= 3;
      z[k] = 0.0;
      if (state == 1) {
        z[k] = prob.leftover[k];
        fixed += z[k];
      } else if (state == 2) {
        free_user = k;
        ++free_count;
      }
    }
    if (free_count > 1) continue;
    double total = fixed;
    if (free_count == 1) {
      const double cap = prob.leftover[free_user];
      const double needed = psi - fixed;
      if (needed <= 0.0 || cap == 0.0) continue;  // covered by the off state
      const double step = cap / static_cast<double>(grid_steps);
      const double ticks = std::ceil(needed / step);
      z[free_user] = std::min(cap, ticks * step);
      total += z[free_user];
    }
    if (total + slack < psi) continue;
    if (total < best_total) {
      best_total = total;
      best = z;
    }
  }
  if (best.empty()) {
    throw InfeasibleError(psi - Total(prob.leftover),
                          std::numeric_limits<double>::quiet_NaN());
  }
  return best;
}

double OptimizedConvergenceBound(const ChannelState& ch, const PowerPlan& plan,
                                 const ConvergenceParams& params) {
  double noise_power = 0.0;
  for (std::size_t k = 0; k < ch.num_users(); ++k) {
    noise_power += ch.effective_snr(k) * plan.beta[k];
  }
  const double kc = static_cast<double>(ch.num_users()) * plan.c;
  const double lambda = params.strong_convexity;
  const double g_sq = plan.clip_norm * plan.clip_norm +
                      params.dim / (kc * kc) * (noise_power + ch.noise_var);
  return 2.0 * params.smoothness / (lambda * lambda * params.rounds) * g_sq;
}

PowerPlan OrthogonalPlan(const ChannelState& ch, double clip_norm,
                         std::span<const double> eps_target, double delta) {
  ch.Validate();
  CheckTargets(eps_target, ch.num_users(), delta);
  if (!(clip_norm > 0.0)) {
    throw std::invalid_argument("OrthogonalPlan: clip norm must be > 0");
  }
  PowerPlan plan;
  plan.clip_norm = clip_norm;
  plan.alpha.resize(ch.num_users());
  plan.beta.resize(ch.num_users());
  for (std::size_t k = 0; k < ch.num_users(); ++k) {
    // Required noise-to-signal ratio (|h|^2 beta P + sigma^2) / (|h|^2 alpha P).
    const double ratio = 8.0 * std::log(1.25 / delta) /
                         (eps_target[k] * eps_target[k]);
    const double receiver = ch.noise_var / ch.effective_snr(k);
    const double beta = std::max(0.0, (ratio - receiver) / (1.0 + ratio));
    plan.beta[k] = beta;
    plan.alpha[k] = 1.0 - beta;
  }
  plan.ValidateBudget(ch);
  return plan;
}

}  // namespace airfl
