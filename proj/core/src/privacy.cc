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

#include "airfl/privacy.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "airfl/errors.h"

namespace airfl {
namespace {

void CheckDelta(double delta, const char* what) {
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in (0, 1]");
  }
}

// sqrt(2 log(1.25 / delta))
double GaussianTail(double delta) {
  return std::sqrt(2.0 * std::log(1.25 / delta));
}

}  // namespace

void PrivacyBudget::Validate() const {
  if (eps_target.empty()) {
    throw std::invalid_argument("privacy budget: no epsilon targets");
  }
  for (double e : eps_target) {
    if (!(e > 0.0) || !std::isfinite(e)) {
      throw std::invalid_argument("privacy budget: epsilon must be > 0");
    }
  }
  CheckDelta(delta, "privacy budget: delta");
  CheckDelta(delta_prime, "privacy budget: delta_prime");
  if (rounds < 1) throw std::invalid_argument("privacy budget: T must be >= 1");
}

double PrivacyBudget::Tightest() const {
  return *std::min_element(eps_target.begin(), eps_target.end());
}

double GaussianMechanismEpsilon(double sensitivity, double sigma,
                                double delta) {
  if (!(sensitivity > 0.0)) {
    throw std::invalid_argument("sensitivity must be positive");
  }
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be >= 0");
  CheckDelta(delta, "delta");
  if (sigma == 0.0) {
    throw InfiniteEpsilonError("Gaussian mechanism without noise");
  }
  return sensitivity / sigma * GaussianTail(delta);
}

double Sensitivity(const ChannelState& ch, double backoff) {
  return 2.0 * backoff * std::sqrt(MinEffectiveSnr(ch));
}

double ReceivedNoisePower(const ChannelState& ch, const PowerPlan& plan) {
  double total = 0.0;
  for (std::size_t k = 0; k < ch.num_users(); ++k) {
    total += ch.effective_snr(k) * plan.beta[k];
  }
  return total + ch.noise_var;
}

std::vector<double> PerIterationEpsilon(const ChannelState& ch,
                                        const PowerPlan& plan, double delta) {
  plan.ValidateBudget(ch);
  const double eps =
      GaussianMechanismEpsilon(Sensitivity(ch, plan.backoff),
                               std::sqrt(ReceivedNoisePower(ch, plan)), delta);
  return std::vector<double>(ch.num_users(), eps);
}

double EpsilonUpperBound(const ChannelState& ch, const PowerPlan& plan,
                         double delta) {
  plan.ValidateBudget(ch);
  CheckDelta(delta, "delta");
  double min_noise = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < ch.num_users(); ++k) {
    min_noise = std::min(min_noise, ch.effective_snr(k) * plan.beta[k]);
  }
  if (!(min_noise > 0.0)) {
    throw NotApplicableError(
        "upper bound needs artificial noise at every user");
  }
  const double k = static_cast<double>(ch.num_users());
  return Sensitivity(ch, plan.backoff) / std::sqrt(min_noise) *
         GaussianTail(delta) / std::sqrt(k);
}

std::vector<double> OrthogonalEpsilon(const ChannelState& ch,
                                      const PowerPlan& plan, double delta) {
  plan.ValidateBudget(ch);
  CheckDelta(delta, "delta");
  std::vector<double> eps(ch.num_users());
  for (std::size_t k = 0; k < ch.num_users(); ++k) {
    const double noise = ch.effective_snr(k) * plan.beta[k] + ch.noise_var;
    if (noise == 0.0) {
      throw InfiniteEpsilonError("orthogonal user " + std::to_string(k) +
                                 " transmits without noise");
    }
    const double signal = ch.gain[k] * std::sqrt(plan.alpha[k] * ch.power[k]);
    eps[k] = 2.0 * signal / std::sqrt(noise) * GaussianTail(delta);
  }
  return eps;
}

ComposedPrivacy Compose(double eps, double delta, int rounds,
                        double delta_prime) {
  if (!(eps >= 0.0)) throw std::invalid_argument("epsilon must be >= 0");
  if (rounds < 1) throw std::invalid_argument("T must be >= 1");
  CheckDelta(delta_prime, "delta_prime");
  const double t = static_cast<double>(rounds);
  return {.epsilon = std::sqrt(2.0 * t * std::log(1.0 / delta_prime)) * eps +
                     t * eps * std::expm1(eps),
          .delta = t * delta + delta_prime};
}

}  // namespace airfl
