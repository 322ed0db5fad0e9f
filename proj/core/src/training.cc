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

#include "airfl/training.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "airfl/errors.h"

namespace airfl {
namespace {

constexpr double kTargetSlack = 1e-9;

void CheckUserData(const UserData& data, const Eigen::VectorXd& w) {
  if (data.features.rows() == 0) {
    throw std::invalid_argument("local dataset is empty");
  }
  if (data.features.cols() != w.size() ||
      data.labels.size() != data.features.rows()) {
    throw std::invalid_argument("local dataset and model dimensions differ");
  }
}

void CheckRun(const Dataset& dataset, const ChannelState& ch,
              const TrainingOptions& options) {
  if (dataset.users.empty()) throw std::invalid_argument("dataset is empty");
  if (dataset.num_users() != ch.num_users()) {
    throw std::invalid_argument("dataset and channel disagree on K");
  }
  if (!(options.reg > 0.0)) {
    throw std::invalid_argument(
        "reg must be > 0: it sets the strong-convexity step schedule");
  }
  if (options.rounds < 1) throw std::invalid_argument("T must be >= 1");
}

std::vector<double> ExpandTargets(const PrivacyBudget& budget,
                                  std::size_t num_users) {
  if (budget.eps_target.size() == num_users) return budget.eps_target;
  if (budget.eps_target.size() == 1) {
    return std::vector<double>(num_users, budget.eps_target.front());
  }
  throw std::invalid_argument("privacy budget needs 1 or K epsilon targets");
}

// Worst per-user epsilon, checked against the targets. +inf when a user
// transmits without any noise.
template <typename EpsilonFn>
double CheckedEpsilon(const PrivacyBudget& budget, std::size_t num_users,
                      EpsilonFn&& per_user_epsilon) {
  budget.Validate();
  const std::vector<double> targets = ExpandTargets(budget, num_users);
  std::vector<double> eps;
  try {
    eps = per_user_epsilon();
  } catch (const InfiniteEpsilonError&) {
    eps.assign(num_users, std::numeric_limits<double>::infinity());
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < num_users; ++k) {
    if (eps[k] > targets[k] * (1.0 + kTargetSlack)) {
      throw InfeasibleError(std::numeric_limits<double>::quiet_NaN(), eps[k]);
    }
    worst = std::max(worst, eps[k]);
  }
  return worst;
}

template <typename AggregateFn>
MetricsTrace Train(const Dataset& dataset, const TrainingOptions& options,
                   int updates, double eps_iter, AggregateFn&& aggregate) {
  const double reg = options.reg;
  ModelState state{.w = Eigen::VectorXd::Zero(dataset.dim()),
                   .t = 0,
                   .strong_convexity = reg,
                   .smoothness = SmoothnessConstant(dataset, reg)};
  MetricsTrace trace;
  trace.header.seed = options.seed;
  trace.header.eps_per_iteration = eps_iter;
  trace.rounds.reserve(static_cast<std::size_t>(updates));

  std::vector<Eigen::VectorXd> grads(dataset.num_users());
  for (int t = 1; t <= updates; ++t) {
    AggregateResult agg = aggregate(state.w, grads);
    state.w -= LearningRate(t, reg) * agg.estimate;
    state.t = t;

    RoundRecord rec;
    rec.t = t;
    rec.global_loss = GlobalLoss(dataset, state.w, reg);
    rec.grad_norm = agg.estimate.norm();
    rec.noise_var = agg.noise_var;
    rec.eps_composed = std::numeric_limits<double>::quiet_NaN();
    if (options.budget) {
      rec.eps_composed = Compose(eps_iter, options.budget->delta, t,
                                 options.budget->delta_prime)
                             .epsilon;
    }
    trace.rounds.push_back(rec);
    if (options.on_round) options.on_round(state);
  }
  return trace;
}

}  // namespace

Dataset GenerateDataset(std::size_t n_total, Eigen::Index dim,
                        std::size_t num_users, std::size_t per_user,
                        Rng& rng) {
  if (dim < 1 || num_users == 0 || per_user == 0) {
    throw std::invalid_argument("GenerateDataset: sizes must be positive");
  }
  if (num_users * per_user > n_total) {
    throw std::invalid_argument(
        "GenerateDataset: K * per_user exceeds the number of samples");
  }
  // Row i holds (u_i, v_i).
  Eigen::MatrixXd samples(static_cast<Eigen::Index>(n_total), dim + 1);
  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    for (Eigen::Index j = 0; j <= dim; ++j) samples(i, j) = rng.Gaussian();
  }
  Dataset out;
  out.users.reserve(num_users);
  const auto n = static_cast<Eigen::Index>(per_user);
  for (std::size_t k = 0; k < num_users; ++k) {
    const Eigen::Index first = static_cast<Eigen::Index>(k) * n;
    out.users.push_back({samples.block(first, 0, n, dim),
                         samples.block(first, dim, n, 1)});
  }
  return out;
}

Dataset GenerateDataset(std::size_t n_total, Eigen::Index dim,
                        std::size_t num_users, std::size_t per_user,
                        std::uint64_t seed) {
  Rng rng(seed);
  return GenerateDataset(n_total, dim, num_users, per_user, rng);
}

double LocalLoss(const UserData& data, const Eigen::VectorXd& w, double reg) {
  CheckUserData(data, w);
  const Eigen::VectorXd residual = data.features * w - data.labels;
  return residual.squaredNorm() / static_cast<double>(residual.size()) +
         0.5 * reg * w.squaredNorm();
}

Eigen::VectorXd LocalGradient(const UserData& data, const Eigen::VectorXd& w,
                              double reg) {
  CheckUserData(data, w);
  const Eigen::VectorXd residual = data.features * w - data.labels;
  return (2.0 / static_cast<double>(residual.size())) *
             (data.features.transpose() * residual) +
         reg * w;
}

double GlobalLoss(const Dataset& dataset, const Eigen::VectorXd& w,
                  double reg) {
  if (dataset.users.empty()) throw std::invalid_argument("dataset is empty");
  double total = 0.0;
  for (const UserData& user : dataset.users) total += LocalLoss(user, w, reg);
  return total / static_cast<double>(dataset.num_users());
}

double LearningRate(int t, double strong_convexity) {
  if (t < 1) throw std::invalid_argument("LearningRate: t must be >= 1");
  if (!(strong_convexity > 0.0)) {
    throw std::invalid_argument("LearningRate: lambda must be > 0");
  }
  return 1.0 / (strong_convexity * t);
}

double SmoothnessConstant(const Dataset& dataset, double reg) {
  const Eigen::Index d = dataset.dim();
  Eigen::MatrixXd hessian = Eigen::MatrixXd::Zero(d, d);
  for (const UserData& user : dataset.users) {
    hessian.noalias() += (2.0 / static_cast<double>(user.features.rows())) *
                         (user.features.transpose() * user.features);
  }
  hessian /= static_cast<double>(dataset.num_users());
  hessian.diagonal().array() += reg;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      hessian, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().maxCoeff();
}

double SecondMomentBound(const ChannelState& ch, const PowerPlan& plan,
                         int dim) {
  return plan.clip_norm * plan.clip_norm +
         dim * EffectiveNoiseVariance(ch, plan);
}

double ConvergenceBound(double second_moment, double smoothness,
                        double strong_convexity, int rounds) {
  return 2.0 * smoothness * second_moment /
         (strong_convexity * strong_convexity * rounds);
}

MetricsTrace RunPrivateFl(const Dataset& dataset, const ChannelState& ch,
                          const PowerPlan& plan,
                          const TrainingOptions& options) {
  CheckRun(dataset, ch, options);
  plan.ValidateAlignment(ch);
  double eps_iter = std::numeric_limits<double>::quiet_NaN();
  if (options.budget) {
    eps_iter = CheckedEpsilon(*options.budget, ch.num_users(), [&] {
      return PerIterationEpsilon(ch, plan, options.budget->delta);
    });
  }
  Rng rng = Rng(options.seed).Substream("noise");
  MetricsTrace trace = Train(
      dataset, options, options.rounds, eps_iter,
      [&](const Eigen::VectorXd& w, std::vector<Eigen::VectorXd>& grads) {
        for (std::size_t k = 0; k < grads.size(); ++k) {
          grads[k] = ClipGradient(
              LocalGradient(dataset.users[k], w, options.reg), plan.clip_norm);
        }
        return AggregateRound(ch, plan, grads, rng);
      });
  trace.header.scheme = "aligned";
  return trace;
}

MetricsTrace RunOrthogonalFl(const Dataset& dataset, const ChannelState& ch,
                             const PowerPlan& plan,
                             const TrainingOptions& options) {
  CheckRun(dataset, ch, options);
  plan.ValidateBudget(ch);
  const int num_users = static_cast<int>(ch.num_users());
  if (options.rounds < num_users) {
    throw std::invalid_argument(
        "RunOrthogonalFl: channel-use budget is smaller than K");
  }
  double eps_iter = std::numeric_limits<double>::quiet_NaN();
  if (options.budget) {
    eps_iter = CheckedEpsilon(*options.budget, ch.num_users(), [&] {
      return OrthogonalEpsilon(ch, plan, options.budget->delta);
    });
  }
  Rng rng = Rng(options.seed).Substream("noise");
  MetricsTrace trace = Train(
      dataset, options, options.rounds / num_users, eps_iter,
      [&](const Eigen::VectorXd& w, std::vector<Eigen::VectorXd>& grads) {
        for (std::size_t k = 0; k < grads.size(); ++k) {
          grads[k] = ClipGradient(
              LocalGradient(dataset.users[k], w, options.reg), plan.clip_norm);
        }
        return OrthogonalRound(ch, plan, grads, rng);
      });
  trace.header.scheme = "orthogonal";
  return trace;
}

}  // namespace airfl
