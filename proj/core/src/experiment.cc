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

#include "airfl/experiment.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>

#include "airfl/allocation.h"
#include "airfl/channel.h"
#include "airfl/errors.h"
#include "airfl/privacy.h"

namespace airfl {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Instance {
  ChannelState channel;
  Dataset dataset;
};

// Channel and data depend on the seed only, so sweep points that share a
// seed see common random numbers (the K-user channel is a prefix of the
// K'-user channel for K < K').
Instance MakeInstance(const ExperimentConfig& cfg, std::uint64_t seed) {
  const Rng root(seed);
  const auto num_users = static_cast<std::size_t>(cfg.num_users);
  Rng channel_rng = root.Substream("channel");
  Instance inst;
  inst.channel = SampleChannel(num_users, channel_rng, 1.0, cfg.noise_var);
  inst.channel.power = cfg.PowerWatts(num_users);
  inst.channel.Validate();
  Rng data_rng = root.Substream("dataset");
  inst.dataset = GenerateDataset(static_cast<std::size_t>(cfg.n_total),
                                 cfg.dim, num_users,
                                 static_cast<std::size_t>(cfg.per_user_size),
                                 data_rng);
  return inst;
}

std::vector<double> NoisePowers(const ChannelState& ch,
                                const std::vector<double>& beta) {
  std::vector<double> z(beta.size());
  for (std::size_t k = 0; k < beta.size(); ++k) {
    z[k] = ch.effective_snr(k) * beta[k];
  }
  return z;
}

// Runs jobs[0..n) on up to `threads` workers; the first exception wins.
void ParallelFor(std::size_t n, int threads,
                 const std::function<void(std::size_t)>& job) {
  std::size_t workers = threads == 0 ? std::thread::hardware_concurrency()
                                     : static_cast<std::size_t>(threads);
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            job(i);
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mu);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

MetricsTrace RunSinglePoint(const ExperimentConfig& cfg, std::uint64_t seed) {
  const Instance inst = MakeInstance(cfg, seed);
  const ChannelState& ch = inst.channel;
  const std::size_t num_users = ch.num_users();
  const std::vector<double> targets = cfg.EpsTargets(num_users);

  TrainingOptions options;
  options.rounds = cfg.rounds;
  options.seed = seed;
  options.reg = cfg.reg;
  options.budget = PrivacyBudget{.eps_target = targets,
                                 .delta = cfg.delta,
                                 .delta_prime = cfg.delta_prime,
                                 .rounds = cfg.rounds};

  if (cfg.scheme == Scheme::kOrthogonal) {
    const PowerPlan plan =
        OrthogonalPlan(ch, cfg.clip_norm, targets, cfg.delta);
    MetricsTrace trace = RunOrthogonalFl(inst.dataset, ch, plan, options);
    trace.header.threshold = kNaN;
    trace.header.noise_powers = NoisePowers(ch, plan.beta);
    return trace;
  }

  const Alignment alignment = ComputeAlignment(ch, cfg.clip_norm, cfg.backoff);
  const double threshold =
      PrivacyThreshold(ch, targets, cfg.delta, cfg.backoff);
  std::vector<double> beta;
  try {
    beta = AllocateNoise(ch, alignment.alpha, targets, cfg.delta, cfg.backoff);
  } catch (const InfeasibleError& e) {
    MetricsTrace trace;
    trace.header.seed = seed;
    trace.header.feasible = false;
    trace.header.threshold = threshold;
    trace.header.eps_per_iteration = e.min_epsilon();
    return trace;
  }
  const PowerPlan plan =
      MakePowerPlan(ch, cfg.clip_norm, beta, cfg.backoff);
  MetricsTrace trace = RunPrivateFl(inst.dataset, ch, plan, options);
  trace.header.threshold = threshold;
  trace.header.noise_powers = NoisePowers(ch, plan.beta);
  return trace;
}

std::vector<MetricsTrace> RunExperiment(const ExperimentConfig& cfg) {
  cfg.Validate();
  const std::vector<SweepPoint> points = ExpandSweep(cfg);
  const std::string hash = ConfigFingerprint(cfg);
  const std::size_t num_seeds = cfg.seeds.size();
  std::vector<MetricsTrace> traces(points.size() * num_seeds);
  ParallelFor(traces.size(), cfg.threads, [&](std::size_t job) {
    const SweepPoint& point = points[job / num_seeds];
    const std::uint64_t seed = cfg.seeds[job % num_seeds];
    MetricsTrace trace = RunSinglePoint(point.cfg, seed);
    trace.header.run_id = job;
    trace.header.seed = seed;
    trace.header.sweep_value = point.value;
    trace.header.config_hash = hash;
    traces[job] = std::move(trace);
  });
  return traces;
}

std::vector<ScanRow> PrivacyScan(const ExperimentConfig& cfg) {
  cfg.Validate();
  std::vector<int> users;
  if (cfg.sweep == SweepAxis::kUsers) {
    for (double v : cfg.sweep_values) users.push_back(static_cast<int>(v));
  } else {
    users.push_back(cfg.num_users);
  }
  const std::vector<int> rounds =
      cfg.scan_rounds.empty() ? std::vector<int>{cfg.rounds} : cfg.scan_rounds;
  const double power = DbmToWatts(cfg.power_dbm.front());
  const double backoff = std::sqrt(cfg.scan_alpha);

  std::vector<ScanRow> rows;
  for (int k : users) {
    const auto num_users = static_cast<std::size_t>(k);
    const ChannelState ch = SymmetricChannel(num_users, power, cfg.noise_var);
    const PowerPlan plan = MakePowerPlan(
        ch, cfg.clip_norm,
        std::vector<double>(num_users, 1.0 - cfg.scan_alpha), backoff);
    const double eps = PerIterationEpsilon(ch, plan, cfg.delta).front();
    for (int t : rounds) {
      const ComposedPrivacy total = Compose(eps, cfg.delta, t, cfg.delta_prime);
      rows.push_back({.num_users = k,
                      .rounds = t,
                      .eps_iter = eps,
                      .eps_total = total.epsilon,
                      .delta_total = total.delta});
    }
  }
  return rows;
}

std::vector<AllocationReport> RunAllocation(const ExperimentConfig& cfg) {
  cfg.Validate();
  const std::vector<SweepPoint> points = ExpandSweep(cfg);
  std::vector<AllocationReport> reports;
  for (const SweepPoint& point : points) {
    for (std::uint64_t seed : cfg.seeds) {
      const ExperimentConfig& pc = point.cfg;
      const Instance inst = MakeInstance(pc, seed);
      const ChannelState& ch = inst.channel;
      const std::vector<double> targets = pc.EpsTargets(ch.num_users());

      AllocationReport rep;
      rep.run_id = reports.size();
      rep.seed = seed;
      rep.sweep_value = point.value;
      rep.gain = ch.gain;
      rep.power = ch.power;

      PowerPlan plan;
      if (pc.scheme == Scheme::kOrthogonal) {
        plan = OrthogonalPlan(ch, pc.clip_norm, targets, pc.delta);
        rep.threshold = kNaN;
        rep.leftover.assign(ch.num_users(), kNaN);
        double worst = 0.0;
        for (double e : OrthogonalEpsilon(ch, plan, pc.delta)) {
          worst = std::max(worst, e);
        }
        rep.eps_per_iteration = worst;
      } else {
        const Alignment alignment =
            ComputeAlignment(ch, pc.clip_norm, pc.backoff);
        const AllocationProblem prob = MakeAllocationProblem(
            ch, alignment.alpha, targets, pc.delta, pc.backoff);
        rep.threshold = prob.threshold;
        rep.leftover = prob.leftover;
        rep.c = alignment.c;
        try {
          plan = MakePowerPlan(ch, pc.clip_norm,
                               AllocateNoise(ch, alignment.alpha, targets,
                                             pc.delta, pc.backoff),
                               pc.backoff);
          rep.eps_per_iteration =
              PerIterationEpsilon(ch, plan, pc.delta).front();
        } catch (const InfeasibleError& e) {
          rep.feasible = false;
          rep.eps_per_iteration = e.min_epsilon();
          plan.alpha = alignment.alpha;
          plan.beta.assign(ch.num_users(), kNaN);
        }
      }
      rep.alpha = plan.alpha;
      rep.beta = plan.beta;
      rep.noise_powers = NoisePowers(ch, plan.beta);
      reports.push_back(std::move(rep));
    }
  }
  return reports;
}

}  // namespace airfl
