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

#ifndef AIRFL_PRIVACY_H_
#define AIRFL_PRIVACY_H_

#include <vector>

#include "airfl/alignment.h"
#include "airfl/channel.h"

namespace airfl {

// Per-user LDP targets for a training run.
struct PrivacyBudget {
  std::vector<double> eps_target;  // per user, > 0
  double delta = 1e-4;             // per iteration, in (0, 1]
  double delta_prime = 1e-5;       // composition slack, in (0, 1]
  int rounds = 1;                  // T >= 1

  void Validate() const;
  double Tightest() const;  // min_k eps_target_k
};

// Gaussian mechanism: eps = (sensitivity / sigma) sqrt(2 log(1.25 / delta)).
// Throws InfiniteEpsilonError when sigma == 0.
double GaussianMechanismEpsilon(double sensitivity, double sigma,
                                double delta);

// Worst-case change of the received aligned sum when one user swaps its
// data: 2 c L = 2 rho sqrt(min_j |h_j|^2 P_j).
double Sensitivity(const ChannelState& ch, double backoff = 1.0);

// sum_k |h_k|^2 beta_k P_k + sigma_m^2, the variance of the received noise.
double ReceivedNoisePower(const ChannelState& ch, const PowerPlan& plan);

// Per-iteration epsilon of the aligned scheme, reported once per user (the
// value is common to all users). Throws InfiniteEpsilonError when the
// received noise power is zero.
std::vector<double> PerIterationEpsilon(const ChannelState& ch,
                                        const PowerPlan& plan, double delta);

// (1/sqrt(K)) 2 rho sqrt(min |h|^2 P) / sqrt(min_k |h_k|^2 beta_k P_k)
//   * sqrt(2 log(1.25 / delta)).
// Throws NotApplicableError when some beta_k is zero.
double EpsilonUpperBound(const ChannelState& ch, const PowerPlan& plan,
                         double delta);

// Epsilon of the same user transmitting over its own orthogonal channel:
// 2 |h_k| sqrt(alpha_k P_k) / sqrt(|h_k|^2 beta_k P_k + sigma_m^2)
//   * sqrt(2 log(1.25 / delta)).
std::vector<double> OrthogonalEpsilon(const ChannelState& ch,
                                      const PowerPlan& plan, double delta);

struct ComposedPrivacy {
  double epsilon = 0.0;
  double delta = 0.0;
};

// Advanced composition over T rounds:
// eps_T = sqrt(2 T log(1/delta')) eps + T eps (e^eps - 1),
// delta_T = T delta + delta'.
ComposedPrivacy Compose(double eps, double delta, int rounds,
                        double delta_prime);

}  // namespace airfl

#endif  // AIRFL_PRIVACY_H_
