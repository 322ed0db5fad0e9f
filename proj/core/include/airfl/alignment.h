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

#ifndef AIRFL_ALIGNMENT_H_
#define AIRFL_ALIGNMENT_H_

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "airfl/channel.h"
#include "airfl/rng.h"

namespace airfl {

// Per-user power split between the scaled gradient (alpha) and artificial
// Gaussian noise (beta), plus the common received gain c of the aligned
// gradients and the clipping norm L.
//
// For the aligned scheme |h_k| sqrt(alpha_k P_k) / L == c for every k. The
// orthogonal baseline reuses this type with c unused.
struct PowerPlan {
  std::vector<double> alpha;
  std::vector<double> beta;
  double c = 0.0;
  double clip_norm = 1.0;
  // rho in (0, 1]; c is rho times its largest feasible value. 1 reproduces
  // the maximal-signal alignment.
  double backoff = 1.0;

  // 0 <= alpha_k <= 1, 0 <= beta_k <= 1 - alpha_k, sizes match the channel.
  void ValidateBudget(const ChannelState& ch) const;
  // ValidateBudget plus the alignment identity to 1e-9 relative.
  void ValidateAlignment(const ChannelState& ch) const;
};

struct Alignment {
  double c = 0.0;
  std::vector<double> alpha;
};

// Rescales g onto the L2 ball of radius clip_norm when it lies outside.
Eigen::VectorXd ClipGradient(const Eigen::VectorXd& g, double clip_norm);

// c = rho sqrt(min_j |h_j|^2 P_j) / L and
// alpha_k = rho^2 min_j |h_j|^2 P_j / (|h_k|^2 P_k).
// With rho = 1 the worst-SNR user gets alpha = 1 exactly.
Alignment ComputeAlignment(const ChannelState& ch, double clip_norm,
                           double backoff = 1.0);

// Aligned plan with the given noise fractions.
PowerPlan MakePowerPlan(const ChannelState& ch, double clip_norm,
                        std::vector<double> beta, double backoff = 1.0);

// x_k = (sqrt(alpha_k P_k) / L) g + sqrt(beta_k P_k) n, n ~ N(0, I).
// Noise is drawn only when beta_k > 0. Throws std::domain_error if
// ||g|| exceeds the clipping norm.
Eigen::VectorXd BuildTransmitSignal(const Eigen::VectorXd& g_clipped,
                                    std::size_t user, const PowerPlan& plan,
                                    const ChannelState& ch, Rng& rng);

// sigma_z^2 = (sum_k |h_k|^2 beta_k P_k + sigma_m^2) / (K^2 c^2).
double EffectiveNoiseVariance(const ChannelState& ch, const PowerPlan& plan);

struct AggregateResult {
  Eigen::VectorXd estimate;  // g_hat
  double noise_var = 0.0;    // analytic per-entry variance of g_hat
};

// One over-the-air round: every user transmits at once, the server scales
// the superposition by 1 / (K c). The estimate is the average gradient plus
// N(0, sigma_z^2 I).
AggregateResult AggregateRound(const ChannelState& ch, const PowerPlan& plan,
                               std::span<const Eigen::VectorXd> gradients,
                               Rng& rng);

// Orthogonal baseline: each user gets its own channel use, the server
// inverts that user's gain and averages the K unbiased estimates.
AggregateResult OrthogonalRound(const ChannelState& ch, const PowerPlan& plan,
                                std::span<const Eigen::VectorXd> gradients,
                                Rng& rng);

// (1/K^2) sum_k (|h_k|^2 beta_k P_k + sigma_m^2) L^2 / (|h_k|^2 alpha_k P_k).
double OrthogonalNoiseVariance(const ChannelState& ch, const PowerPlan& plan);

}  // namespace airfl

#endif  // AIRFL_ALIGNMENT_H_
