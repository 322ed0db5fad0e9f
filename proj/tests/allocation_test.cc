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
#include <numeric>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "airfl/errors.h"
#include "airfl/privacy.h"

namespace airfl {
namespace {

constexpr double kPsiExample = 5.437751649736401;  // 2 ln 25 - 1

double Sum(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0);
}

TEST(PrivacyThresholdTest, SymmetricExample) {
  const ChannelState ch = SymmetricChannel(3, 1.0, 1.0);
  const std::vector<double> eps(3, 2.0);
  EXPECT_NEAR(PrivacyThreshold(ch, eps, 0.05), kPsiExample, 1e-12);
}

TEST(PrivacyThresholdTest, LoudReceiverIsNegative) {
  const ChannelState ch = SymmetricChannel(3, 1.0, 1e6);
  EXPECT_LT(PrivacyThreshold(ch, std::vector<double>(3, 1.2), 1e-4), 0.0);
}

TEST(PrivacyThresholdTest, TightestTargetDecides) {
  const ChannelState ch = SymmetricChannel(3, 1.0, 1.0);
  const std::vector<double> mixed{5.0, 0.7, 3.0};
  EXPECT_EQ(PrivacyThreshold(ch, mixed, 1e-4),
            PrivacyThreshold(ch, std::vector<double>(3, 0.7), 1e-4));
}

TEST(CheckFeasibilityTest, Examples) {
  EXPECT_FALSE(CheckFeasibility({.leftover = {1, 1}, .threshold = 3}));
  EXPECT_TRUE(CheckFeasibility({.leftover = {0, 0}, .threshold = -0.5}));
  EXPECT_TRUE(CheckFeasibility({.leftover = {1, 2, 3}, .threshold = 6}));
}

TEST(GreedyNoisePowersTest, PrefixAbsorbsThreshold) {
  const std::vector<double> z =
      GreedyNoisePowers({.leftover = {1, 2, 3, 10}, .threshold = 4.5});
  EXPECT_EQ(z, (std::vector<double>{1, 2, 1.5, 0}));
}

TEST(GreedyNoisePowersTest, VisitsInAscendingLeftover) {
  const std::vector<double> z =
      GreedyNoisePowers({.leftover = {10, 3, 1, 2}, .threshold = 4.5});
  EXPECT_EQ(z, (std::vector<double>{0, 1.5, 1, 2}));
}

TEST(GreedyNoisePowersTest, TiesBrokenByIndex) {
  const std::vector<double> z =
      GreedyNoisePowers({.leftover = {2, 2, 2}, .threshold = 3});
  EXPECT_EQ(z, (std::vector<double>{2, 1, 0}));
}

TEST(GreedyNoisePowersTest, NonPositiveThresholdNeedsNoNoise) {
  EXPECT_EQ(GreedyNoisePowers({.leftover = {1, 2}, .threshold = -1}),
            (std::vector<double>{0, 0}));
}

TEST(GreedyNoisePowersTest, InfeasibleThrows) {
  try {
    GreedyNoisePowers({.leftover = {1, 1}, .threshold = 3});
    FAIL() << "expected InfeasibleError";
  } catch (const InfeasibleError& e) {
    EXPECT_DOUBLE_EQ(e.deficit(), 1.0);
  }
}

TEST(AllocateNoiseTest, SingleUserTakesAll) {
  // One user with |h|^2 P = 10, alpha = 0.5 -> leftover 5.
  ChannelState ch = SymmetricChannel(1, 10.0, 0.0);
  const std::vector<double> alpha{0.5};
  // Pick eps so that Psi = 5 exactly: 8 * 10 / eps^2 * log(1.25 / delta) = 5.
  const double delta = 1e-4;
  // Nudged up so rounding cannot push Psi past the leftover.
  const double eps =
      std::sqrt(8.0 * 10.0 * std::log(1.25 / delta) / 5.0) * (1.0 + 1e-12);
  const std::vector<double> beta =
      AllocateNoise(ch, alpha, std::vector<double>{eps}, delta);
  EXPECT_NEAR(beta[0], 0.5, 1e-9);
}

TEST(AllocateNoiseTest, NoThresholdNoNoise) {
  const ChannelState ch = SymmetricChannel(4, 1.0, 1e6);
  const std::vector<double> alpha(4, 1.0);
  EXPECT_EQ(AllocateNoise(ch, alpha, std::vector<double>(4, 1.2), 1e-4),
            std::vector<double>(4, 0.0));
}

TEST(AllocateNoiseTest, InfeasibleReportsReachableEpsilon) {
  // Symmetric channel at rho = 1 has no leftover power at all.
  const ChannelState ch = SymmetricChannel(4, 1.0, 1.0);
  const std::vector<double> alpha(4, 1.0);
  try {
    AllocateNoise(ch, alpha, std::vector<double>(4, 0.5), 1e-4);
    FAIL() << "expected InfeasibleError";
  } catch (const InfeasibleError& e) {
    EXPECT_GT(e.deficit(), 0.0);
    EXPECT_NEAR(e.min_epsilon(), GaussianMechanismEpsilon(2.0, 1.0, 1e-4),
                1e-12);
  }
}

TEST(BruteForceAllocationTest, MatchesGreedyOnExample) {
  const AllocationProblem prob{.leftover = {1, 2, 3, 10}, .threshold = 4.5};
  EXPECT_NEAR(Sum(BruteForceAllocation(prob, 1000)), 4.5, 1e-9);
}

TEST(BruteForceAllocationTest, ZeroThresholdAllZero) {
  EXPECT_EQ(BruteForceAllocation({.leftover = {1, 2}, .threshold = 0}, 100),
            (std::vector<double>{0, 0}));
}

TEST(BruteForceAllocationTest, RejectsLargeProblems) {
  EXPECT_THROW(
      BruteForceAllocation({.leftover = std::vector<double>(7, 1.0),
                            .threshold = 1},
                           10),
      std::invalid_argument);
  EXPECT_THROW(BruteForceAllocation({.leftover = {1}, .threshold = 5}, 10),
               InfeasibleError);
}

TEST(AllocationPropertyTest, GreedyIsOptimalOnRandomInstances) {
  Rng rng(555);
  int checked = 0;
  while (checked < 200) {
    const std::size_t k = 1 + static_cast<std::size_t>(rng.Uniform() * 5);
    std::vector<double> leftover(k);
    for (double& l : leftover) {
      l = rng.Uniform() < 0.2 ? 0.0 : 5.0 * rng.Uniform();
    }
    const double psi = (rng.Uniform() * 1.1 - 0.1) * Sum(leftover);
    const AllocationProblem prob{.leftover = leftover, .threshold = psi};
    if (!CheckFeasibility(prob)) continue;
    ++checked;
    const std::vector<double> z = GreedyNoisePowers(prob);
    // Grid fine enough that one step is at most 1e-3 Psi.
    const double cap = *std::max_element(leftover.begin(), leftover.end());
    const auto steps = static_cast<std::uint64_t>(
        psi > 0.0 ? std::ceil(cap / (1e-3 * psi)) : 1.0);
    const std::vector<double> oracle = BruteForceAllocation(prob, steps);
    const double target = std::max(psi, 0.0);
    EXPECT_NEAR(Sum(z), target, 1e-9 * std::max(1.0, target));
    EXPECT_LE(std::abs(Sum(z) - Sum(oracle)), 1e-3 * target + 1e-12);
    for (std::size_t i = 0; i < k; ++i) {
      EXPECT_GE(z[i], 0.0);
      EXPECT_LE(z[i], leftover[i]);
    }
  }
}

TEST(AllocationPropertyTest, AllocatedNoiseMeetsTargets) {
  Rng rng(808);
  int checked = 0;
  for (int trial = 0; trial < 400 && checked < 100; ++trial) {
    const std::size_t k = 2 + trial % 8;
    const ChannelState ch = SampleChannel(k, rng, 1.0, 0.1);
    const Alignment a = ComputeAlignment(ch, 1.0);
    std::vector<double> eps(k);
    for (double& e : eps) e = 1.0 + 4.0 * rng.Uniform();
    std::vector<double> beta;
    try {
      beta = AllocateNoise(ch, a.alpha, eps, 1e-3);
    } catch (const InfeasibleError&) {
      continue;
    }
    ++checked;
    const PowerPlan plan = MakePowerPlan(ch, 1.0, beta);
    const std::vector<double> got = PerIterationEpsilon(ch, plan, 1e-3);
    for (std::size_t i = 0; i < k; ++i) {
      EXPECT_LE(got[i], eps[i] * (1.0 + 1e-9));
    }
  }
  EXPECT_GE(checked, 50);
}

TEST(OptimizedConvergenceBoundTest, HandExample) {
  // K = 2, c = 1, L = 1, sum Z = 3, sigma_m^2 = 1, d = 2.
  ChannelState ch = SymmetricChannel(2, 1.0, 1.0);
  PowerPlan plan{.alpha = {1, 1}, .beta = {1.5, 1.5}, .c = 1.0,
                 .clip_norm = 1.0};
  const ConvergenceParams params{
      .smoothness = 1, .strong_convexity = 1, .rounds = 100, .dim = 2};
  EXPECT_NEAR(OptimizedConvergenceBound(ch, plan, params), 0.06, 1e-15);
  ConvergenceParams twice = params;
  twice.rounds = 200;
  EXPECT_NEAR(OptimizedConvergenceBound(ch, plan, twice), 0.03, 1e-15);
}

TEST(OptimizedConvergenceBoundTest, NoiselessTerm) {
  ChannelState ch = SymmetricChannel(2, 1.0, 0.0);
  PowerPlan plan{.alpha = {1, 1}, .beta = {0, 0}, .c = 1.0, .clip_norm = 3.0};
  EXPECT_DOUBLE_EQ(OptimizedConvergenceBound(ch, plan,
                                             {.smoothness = 2,
                                              .strong_convexity = 0.5,
                                              .rounds = 10,
                                              .dim = 5}),
                   2.0 * 2.0 * 9.0 / (0.25 * 10));
}

TEST(OrthogonalPlanTest, MeetsTargetExactly) {
  Rng rng(17);
  const ChannelState ch = SampleChannel(6, rng, 1.0, 0.01);
  const std::vector<double> eps(6, 1.2);
  const PowerPlan plan = OrthogonalPlan(ch, 10.0, eps, 1e-4);
  const std::vector<double> got = OrthogonalEpsilon(ch, plan, 1e-4);
  for (std::size_t k = 0; k < 6; ++k) {
    EXPECT_NEAR(plan.alpha[k] + plan.beta[k], 1.0, 1e-15);
    if (plan.beta[k] > 0.0) {
      EXPECT_NEAR(got[k], 1.2, 1e-9);
    } else {
      EXPECT_LE(got[k], 1.2);
    }
  }
}

TEST(OrthogonalPlanTest, LoudReceiverNeedsNoNoise) {
  const ChannelState ch = SymmetricChannel(2, 1.0, 1e6);
  const PowerPlan plan =
      OrthogonalPlan(ch, 1.0, std::vector<double>(2, 1.2), 1e-4);
  EXPECT_EQ(plan.beta, std::vector<double>(2, 0.0));
  EXPECT_EQ(plan.alpha, std::vector<double>(2, 1.0));
}

}  // namespace
}  // namespace airfl
