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

#ifndef AIRFL_EXPERIMENT_H_
#define AIRFL_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "airfl/config.h"
#include "airfl/training.h"

namespace airfl {

// Runs every (sweep point, seed) pair. Each run samples its own channel and
// dataset from substreams of its seed and holds the channel fixed for all
// rounds. Infeasible privacy targets produce a trace flagged infeasible with
// no round records; other runs continue. Output order is point-major, then
// seed, regardless of how many threads execute the runs.
std::vector<MetricsTrace> RunExperiment(const ExperimentConfig& cfg);

// A single run, exposed for callers that schedule their own jobs.
MetricsTrace RunSinglePoint(const ExperimentConfig& point_cfg,
                            std::uint64_t seed);

struct ScanRow {
  int num_users = 0;
  int rounds = 0;
  double eps_iter = 0.0;
  double eps_total = 0.0;
  double delta_total = 0.0;
};

// Analytic leakage on a symmetric channel (|h_k| = 1, common power) with
// gradient fraction scan_alpha and the rest of the power spent on noise.
// One row per (K, T): K from the K sweep (or cfg.num_users), T from scan_T
// (or cfg.rounds).
std::vector<ScanRow> PrivacyScan(const ExperimentConfig& cfg);

// Per-user allocation outcome for one (sweep point, seed).
struct AllocationReport {
  std::size_t run_id = 0;
  std::uint64_t seed = 0;
  std::optional<double> sweep_value;
  bool feasible = true;
  double threshold = 0.0;
  double eps_per_iteration = 0.0;
  double c = 0.0;
  std::vector<double> gain;
  std::vector<double> power;
  std::vector<double> alpha;
  std::vector<double> beta;
  std::vector<double> leftover;
  std::vector<double> noise_powers;
};

std::vector<AllocationReport> RunAllocation(const ExperimentConfig& cfg);

}  // namespace airfl

#endif  // AIRFL_EXPERIMENT_H_
