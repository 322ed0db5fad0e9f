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

#ifndef AIRFL_TRAINING_H_
#define AIRFL_TRAINING_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "airfl/alignment.h"
#include "airfl/channel.h"
#include "airfl/privacy.h"
#include "airfl/rng.h"

namespace airfl {

// Local data of one user: one row of `features` per sample.
struct UserData {
  Eigen::MatrixXd features;  // |D| x d
  Eigen::VectorXd labels;    // |D|
};

// Equal-size partition of the synthetic regression data across users.
struct Dataset {
  std::vector<UserData> users;

  std::size_t num_users() const { return users.size(); }
  Eigen::Index dim() const { return users.front().features.cols(); }
  Eigen::Index per_user_size() const { return users.front().features.rows(); }
};

struct ModelState {
  Eigen::VectorXd w;
  int t = 0;                      // completed updates
  double strong_convexity = 1.0;  // lambda
  double smoothness = 1.0;        // mu
};

// Draws n_total i.i.d. (u, v) ~ N(0, I_{d+1}) and hands the first
// num_users * per_user samples out in consecutive blocks.
Dataset GenerateDataset(std::size_t n_total, Eigen::Index dim,
                        std::size_t num_users, std::size_t per_user, Rng& rng);
Dataset GenerateDataset(std::size_t n_total, Eigen::Index dim,
                        std::size_t num_users, std::size_t per_user,
                        std::uint64_t seed);

// f_k(w) = (1/|D_k|) sum (w'u - v)^2 + (reg/2) ||w||^2
double LocalLoss(const UserData& data, const Eigen::VectorXd& w, double reg);
// (2/|D_k|) sum u (w'u - v) + reg w
Eigen::VectorXd LocalGradient(const UserData& data, const Eigen::VectorXd& w,
                              double reg);

// F(w) = (1/K) sum_k f_k(w). The regulariser enters once at full strength.
double GlobalLoss(const Dataset& dataset, const Eigen::VectorXd& w,
                  double reg);

// eta_t = 1 / (lambda t), t >= 1.
double LearningRate(int t, double strong_convexity);

// Largest eigenvalue of the Hessian (2/N) U'U + reg I of GlobalLoss.
double SmoothnessConstant(const Dataset& dataset, double reg);

// G^2 = L^2 + (d / (K^2 c^2)) (sum_k |h_k|^2 beta_k P_k + sigma_m^2)
double SecondMomentBound(const ChannelState& ch, const PowerPlan& plan,
                         int dim);

// 2 mu G^2 / (lambda^2 T)
double ConvergenceBound(double second_moment, double smoothness,
                        double strong_convexity, int rounds);

struct RoundRecord {
  int t = 0;
  double global_loss = 0.0;   // F(w) after the update
  double grad_norm = 0.0;     // ||g_hat||
  double noise_var = 0.0;     // sigma_z^2 of this round
  double eps_composed = 0.0;  // composed epsilon after t rounds, NaN if off
};

struct RunHeader {
  std::size_t run_id = 0;
  std::uint64_t seed = 0;
  std::optional<double> sweep_value;
  std::string scheme = "aligned";
  std::string config_hash;
  bool feasible = true;
  double eps_per_iteration = 0.0;  // worst user, NaN if accounting is off
  double threshold = 0.0;          // Psi
  std::vector<double> noise_powers;  // Z_k
};

struct MetricsTrace {
  RunHeader header;
  std::vector<RoundRecord> rounds;
};

struct TrainingOptions {
  int rounds = 1;  // T for the aligned scheme; channel uses for orthogonal
  std::uint64_t seed = 0;
  double reg = 1e-3;
  // Targets are checked against the plan before training starts and drive
  // the composed-epsilon column. Without a budget accounting is off.
  std::optional<PrivacyBudget> budget;
  // Called after every update; tests use it to follow the iterate.
  std::function<void(const ModelState&)> on_round;
};

// Distributed GD over the aligned analog channel, w_1 = 0 and
// eta_t = 1 / (reg t). Throws InfeasibleError when the plan misses the
// budget's targets.
MetricsTrace RunPrivateFl(const Dataset& dataset, const ChannelState& ch,
                          const PowerPlan& plan,
                          const TrainingOptions& options);

// Orthogonal baseline with the same channel-use budget: options.rounds
// channel uses buy options.rounds / K model updates. Throws
// std::invalid_argument when options.rounds < K.
MetricsTrace RunOrthogonalFl(const Dataset& dataset, const ChannelState& ch,
                             const PowerPlan& plan,
                             const TrainingOptions& options);

}  // namespace airfl

#endif  // AIRFL_TRAINING_H_
