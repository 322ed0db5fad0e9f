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

#ifndef AIRFL_ALLOCATION_H_
#define AIRFL_ALLOCATION_H_

#include <cstdint>
#include <span>
#include <vector>

#include "airfl/alignment.h"
#include "airfl/channel.h"

namespace airfl {

// Minimise the total received artificial-noise power sum_k Z_k subject to
// 0 <= Z_k <= leftover_k and sum_k Z_k >= threshold.
//
// leftover_k = |h_k|^2 P_k (1 - alpha_k) is the received power a user still
// has after aligning its gradient; threshold (Psi) is the noise power every
// user's epsilon target demands beyond the receiver noise.
struct AllocationProblem {
  std::vector<double> leftover;
  double threshold = 0.0;

  void Validate() const;
};

// Psi = max_i 8 rho^2 min_j |h_j|^2 P_j / eps_i^2 * log(1.25 / delta)
//       - sigma_m^2.
// Negative when receiver noise alone meets every target.
double PrivacyThreshold(const ChannelState& ch,
                        std::span<const double> eps_target, double delta,
                        double backoff = 1.0);

AllocationProblem MakeAllocationProblem(const ChannelState& ch,
                                        std::span<const double> alpha,
                                        std::span<const double> eps_target,
                                        double delta, double backoff = 1.0);

// sum_k leftover_k >= threshold. A non-positive threshold is always feasible.
bool CheckFeasibility(const AllocationProblem& prob);

// Greedy water-filling: visit users by ascending leftover power (ties by
// index) and give each Z_k = min(leftover_k, (Psi - assigned so far)^+).
// Returns Z in original user order. Throws InfeasibleError (min_epsilon
// unknown, reported as NaN) when the problem is infeasible.
std::vector<double> GreedyNoisePowers(const AllocationProblem& prob);

// Noise fractions beta_k = Z_k / (|h_k|^2 P_k) meeting every target with the
// least total noise. On infeasibility the thrown InfeasibleError carries the
// smallest common epsilon reachable with every beta at its cap.
std::vector<double> AllocateNoise(const ChannelState& ch,
                                  std::span<const double> alpha,
                                  std::span<const double> eps_target,
                                  double delta, double backoff = 1.0);

// Exhaustive oracle for small K (<= 6): enumerates every assignment with
// each user at 0, at its cap, or as the single free coordinate rounded up to
// a grid of `grid_steps` intervals over [0, leftover]. The optimum lies in
// this set, so the result is within one grid step of the exact minimum.
// Throws InfeasibleError when infeasible and std::invalid_argument for K > 6.
std::vector<double> BruteForceAllocation(const AllocationProblem& prob,
                                         std::uint64_t grid_steps);

struct ConvergenceParams {
  double smoothness = 1.0;         // mu
  double strong_convexity = 1.0;   // lambda
  int rounds = 1;                  // T
  int dim = 1;                     // d
};

// 2 mu / (lambda^2 T) [L^2 + d / (K^2 c^2) (sum_k Z_k + sigma_m^2)], with
// Z_k = |h_k|^2 beta_k P_k taken from the plan.
double OptimizedConvergenceBound(const ChannelState& ch, const PowerPlan& plan,
                                 const ConvergenceParams& params);

// Orthogonal baseline plan: each user splits its own power so that its
// single-user epsilon equals its target (alpha = 1, beta = 0 when receiver
// noise already suffices). c is left at zero.
PowerPlan OrthogonalPlan(const ChannelState& ch, double clip_norm,
                         std::span<const double> eps_target, double delta);

}  // namespace airfl

#endif  // AIRFL_ALLOCATION_H_
