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

// airfl: command-line driver for the over-the-air private FL simulator.
//
//   airfl train         --config cfg.yaml --out trace.csv
//   airfl sweep         --config cfg.yaml --out trace.csv [--summary s.jsonl]
//   airfl privacy-scan  --config cfg.yaml --out scan.csv
//   airfl allocate      --config cfg.yaml --out alloc.csv
//
// Exit codes: 0 success, 1 runtime failure, 2 bad config or arguments,
// 3 privacy infeasible at every point. Failures print one JSON object on
// stderr.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "airfl/config.h"
#include "airfl/errors.h"
#include "airfl/experiment.h"
#include "airfl/report.h"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;

struct Args {
  std::string config;
  std::string out;
  std::string summary;
  std::optional<std::uint64_t> seed_override;
};

int Fail(int code, const std::string& kind, const std::string& field,
         const std::string& message) {
  nlohmann::json line = {{"error", kind}, {"message", message}};
  if (!field.empty()) line["field"] = field;
  std::cerr << line.dump() << '\n';
  return code;
}

airfl::ExperimentConfig Load(const Args& args) {
  airfl::ExperimentConfig cfg = airfl::LoadConfig(args.config);
  airfl::ApplySeedOverride(cfg, args.seed_override);
  return cfg;
}

int FinishTraces(const std::vector<airfl::MetricsTrace>& traces,
                 const Args& args) {
  airfl::EmitCsv(traces, args.out);
  if (!args.summary.empty()) airfl::EmitRunSummary(traces, args.summary);
  const auto infeasible = std::count_if(
      traces.begin(), traces.end(),
      [](const airfl::MetricsTrace& t) { return !t.header.feasible; });
  if (infeasible > 0) {
    std::cerr << infeasible << " of " << traces.size()
              << " runs infeasible at the requested privacy level\n";
  }
  if (!traces.empty() && infeasible == static_cast<long>(traces.size())) {
    return Fail(kExitInfeasible, "infeasible", "eps_target",
                "no run can meet the privacy target");
  }
  return 0;
}

int RunTrain(const Args& args) {
  airfl::ExperimentConfig cfg = Load(args);
  cfg.sweep = airfl::SweepAxis::kNone;
  cfg.sweep_values.clear();
  return FinishTraces(airfl::RunExperiment(cfg), args);
}

int RunSweep(const Args& args) {
  const airfl::ExperimentConfig cfg = Load(args);
  if (cfg.sweep == airfl::SweepAxis::kNone) {
    throw airfl::ConfigError("sweep", "sweep needs an axis (K, P_dBm or T)");
  }
  return FinishTraces(airfl::RunExperiment(cfg), args);
}

int RunScan(const Args& args) {
  const airfl::ExperimentConfig cfg = Load(args);
  airfl::EmitTable(airfl::PrivacyScan(cfg), args.out);
  return 0;
}

int RunAllocate(const Args& args) {
  const airfl::ExperimentConfig cfg = Load(args);
  const std::vector<airfl::AllocationReport> reports =
      airfl::RunAllocation(cfg);
  airfl::EmitAllocations(reports, args.out);
  const bool none_feasible = std::none_of(
      reports.begin(), reports.end(),
      [](const airfl::AllocationReport& r) { return r.feasible; });
  if (!reports.empty() && none_feasible) {
    return Fail(kExitInfeasible, "infeasible", "eps_target",
                "no instance can meet the privacy target");
  }
  return 0;
}

void AddCommon(CLI::App* cmd, Args& args, bool summary) {
  cmd->add_option("--config", args.config, "YAML experiment config")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", args.out, "output CSV path")->required();
  cmd->add_option("--seed-override", args.seed_override,
                  "run this single seed instead of the configured list");
  if (summary) {
    cmd->add_option("--summary", args.summary,
                    "also write one JSON header line per run");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Private federated learning over a wireless MAC"};
  app.require_subcommand(1);
  Args args;
  CLI::App* train = app.add_subcommand("train", "train one configuration");
  CLI::App* sweep = app.add_subcommand("sweep", "train across a sweep axis");
  CLI::App* scan = app.add_subcommand(
      "privacy-scan", "per-user leakage versus K on symmetric channels");
  CLI::App* allocate =
      app.add_subcommand("allocate", "alignment and noise allocation only");
  AddCommon(train, args, true);
  AddCommon(sweep, args, true);
  AddCommon(scan, args, false);
  AddCommon(allocate, args, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return Fail(kExitConfig, "usage", "", e.what());
  }

  try {
    if (*train) return RunTrain(args);
    if (*sweep) return RunSweep(args);
    if (*scan) return RunScan(args);
    if (*allocate) return RunAllocate(args);
  } catch (const airfl::ConfigError& e) {
    return Fail(kExitConfig, "config", e.field(), e.what());
  } catch (const std::exception& e) {
    return Fail(kExitRuntime, "runtime", "", e.what());
  }
  return kExitRuntime;
}
