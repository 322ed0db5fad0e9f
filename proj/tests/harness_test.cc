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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "airfl/config.h"
#include "airfl/experiment.h"
#include "airfl/privacy.h"
#include "airfl/report.h"

namespace airfl {
namespace {

std::vector<std::string> SplitLines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

std::vector<std::string> SplitFields(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) fields.push_back(f);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string TracesCsv(const std::vector<MetricsTrace>& traces) {
  std::ostringstream out;
  WriteTraces(traces, out);
  return out.str();
}

// A loose target keeps every seed feasible at K = 5.
ExperimentConfig SmallConfig(const std::string& extra = "",
                             const std::string& eps = "4") {
  return ParseConfig("K: 5\nT: 20\nd: 6\nn_total: 200\neps_target: " + eps +
                     "\n" + extra);
}

TEST(FormatDoubleTest, ShortestRoundTrip) {
  EXPECT_EQ(FormatDouble(0.1), "0.1");
  EXPECT_EQ(FormatDouble(1.0), "1");
  const double x = 1.0 / 3.0;
  EXPECT_EQ(std::stod(FormatDouble(x)), x);
  EXPECT_EQ(FormatDouble(std::numeric_limits<double>::quiet_NaN()), "nan");
}

TEST(EmitCsvTest, EmptyListIsHeaderOnly) {
  std::ostringstream out;
  WriteTraces({}, out);
  EXPECT_EQ(out.str(), std::string(kTraceHeader) + "\n");
  std::ostringstream scan;
  WriteScan({}, scan);
  EXPECT_EQ(scan.str(), std::string(kScanHeader) + "\n");
}

TEST(EmitCsvTest, OneRowPerRound) {
  const std::vector<MetricsTrace> traces =
      RunExperiment(SmallConfig("T: 3\n"));
  ASSERT_EQ(traces.size(), 1u);
  const std::vector<std::string> lines = SplitLines(TracesCsv(traces));
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[0], kTraceHeader);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::vector<std::string> f = SplitFields(lines[i]);
    ASSERT_EQ(f.size(), 8u);
    EXPECT_EQ(f[3], std::to_string(i));
    EXPECT_EQ(f[2], "");
  }
}

TEST(EmitCsvTest, LfLineEndingsOnly) {
  const std::string csv = TracesCsv(RunExperiment(SmallConfig()));
  EXPECT_EQ(csv.find('\r'), std::string::npos);
  EXPECT_EQ(csv.back(), '\n');
}

TEST(EmitCsvTest, ParsedEpsilonIsNondecreasing) {
  const std::vector<MetricsTrace> traces =
      RunExperiment(SmallConfig("seeds: [1, 2, 3]\n"));
  const std::vector<std::string> lines = SplitLines(TracesCsv(traces));
  std::string last_run;
  double last_eps = -1.0;
  int rows = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::vector<std::string> f = SplitFields(lines[i]);
    const double eps = std::stod(f[7]);
    if (f[0] == last_run) EXPECT_GE(eps, last_eps);
    last_run = f[0];
    last_eps = eps;
    ++rows;
  }
  EXPECT_EQ(rows, 60);
}

TEST(EmitCsvTest, UnwritablePathThrows) {
  EXPECT_THROW(EmitCsv({}, "/nonexistent-dir/out.csv"), std::runtime_error);
  EXPECT_THROW(EmitTable({}, "/nonexistent-dir/out.csv"), std::runtime_error);
}

TEST(EmitCsvTest, WritesFile) {
  const auto path = std::filesystem::temp_directory_path() / "airfl_trace.csv";
  const std::vector<MetricsTrace> traces = RunExperiment(SmallConfig());
  EmitCsv(traces, path);
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(buf.str(), TracesCsv(traces));
  std::filesystem::remove(path);
}

TEST(RunExperimentTest, ByteIdenticalAcrossInvocations) {
  const ExperimentConfig cfg = SmallConfig("seeds: [0, 1]\n");
  EXPECT_EQ(TracesCsv(RunExperiment(cfg)), TracesCsv(RunExperiment(cfg)));
}

TEST(RunExperimentTest, ThreadCountDoesNotChangeOutput) {
  const ExperimentConfig one =
      SmallConfig("seeds: [0, 1, 2]\nsweep: K\nsweep_values: [3, 5]\n");
  ExperimentConfig many = one;
  many.threads = 4;
  EXPECT_EQ(TracesCsv(RunExperiment(one)), TracesCsv(RunExperiment(many)));
}

TEST(RunExperimentTest, SweepPointsAreIsolated) {
  const std::vector<MetricsTrace> alone =
      RunExperiment(SmallConfig("sweep: K\nsweep_values: [5]\n"));
  const std::vector<MetricsTrace> together =
      RunExperiment(SmallConfig("sweep: K\nsweep_values: [3, 5, 8]\n"));
  ASSERT_EQ(together.size(), 3u);
  const MetricsTrace& a = alone[0];
  const MetricsTrace& b = together[1];
  ASSERT_EQ(a.rounds.size(), 20u);
  ASSERT_EQ(a.rounds.size(), b.rounds.size());
  for (std::size_t i = 0; i < a.rounds.size(); ++i) {
    EXPECT_EQ(a.rounds[i].global_loss, b.rounds[i].global_loss);
    EXPECT_EQ(a.rounds[i].eps_composed, b.rounds[i].eps_composed);
  }
  EXPECT_EQ(a.header.noise_powers, b.header.noise_powers);
}

TEST(RunExperimentTest, SweepLayoutAndHeaders) {
  const std::vector<MetricsTrace> traces = RunExperiment(
      SmallConfig("seeds: [7, 8]\nsweep: P_dBm\nsweep_values: [20, 40]\n"));
  ASSERT_EQ(traces.size(), 4u);
  EXPECT_EQ(traces[0].header.seed, 7u);
  EXPECT_EQ(traces[1].header.seed, 8u);
  EXPECT_EQ(*traces[0].header.sweep_value, 20.0);
  EXPECT_EQ(*traces[3].header.sweep_value, 40.0);
  for (std::size_t i = 0; i < traces.size(); ++i) {
    EXPECT_EQ(traces[i].header.run_id, i);
    EXPECT_EQ(traces[i].header.config_hash, traces[0].header.config_hash);
    EXPECT_TRUE(traces[i].header.feasible);
    EXPECT_EQ(traces[i].rounds.size(), 20u);
  }
}

TEST(RunExperimentTest, InfeasiblePointHasNoRounds) {
  // Target far below what the leftover power can reach.
  const std::vector<MetricsTrace> traces = RunExperiment(
      SmallConfig("sigma_m_sq: 0\nseeds: [0, 1]\n", "1e-4"));
  for (const MetricsTrace& t : traces) {
    EXPECT_FALSE(t.header.feasible);
    EXPECT_TRUE(t.rounds.empty());
    EXPECT_GT(t.header.eps_per_iteration, 1e-4);
  }
  EXPECT_EQ(SplitLines(TracesCsv(traces)).size(), 1u);
}

TEST(RunExperimentTest, FeasibleRunMeetsTarget) {
  const std::vector<MetricsTrace> traces =
      RunExperiment(SmallConfig("seeds: [0, 1, 2, 3]\n", "1.2"));
  for (const MetricsTrace& t : traces) {
    if (!t.header.feasible) continue;
    EXPECT_EQ(t.rounds.size(), 20u);
    EXPECT_LE(t.header.eps_per_iteration, 1.2 * (1 + 1e-9));
  }
}

TEST(RunExperimentTest, OrthogonalSchemeRunsFewerUpdates) {
  const std::vector<MetricsTrace> traces =
      RunExperiment(SmallConfig("scheme: orthogonal\n"));
  ASSERT_EQ(traces.size(), 1u);
  EXPECT_EQ(traces[0].rounds.size(), 4u);
  EXPECT_EQ(traces[0].header.scheme, "orthogonal");
}

TEST(PrivacyScanTest, DecreasingInUsers) {
  const ExperimentConfig cfg = ParseConfig(
      "K: 4\nsigma_m_sq: 0\nsweep: K\nsweep_values: [4, 16, 64, 256]\n"
      "scan_T: [1, 10, 100, 1000]\nn_total: 6000\n");
  const std::vector<ScanRow> rows = PrivacyScan(cfg);
  ASSERT_EQ(rows.size(), 16u);
  for (std::size_t i = 0; i + 4 < rows.size(); ++i) {
    EXPECT_EQ(rows[i].rounds, rows[i + 4].rounds);
    EXPECT_GT(rows[i].eps_total, rows[i + 4].eps_total);
  }
  for (std::size_t i = 0; i < rows.size(); i += 4) {
    const ComposedPrivacy one =
        Compose(rows[i].eps_iter, cfg.delta, 1, cfg.delta_prime);
    EXPECT_EQ(rows[i].rounds, 1);
    EXPECT_EQ(rows[i].eps_total, one.epsilon);
    EXPECT_EQ(rows[i].delta_total, one.delta);
  }
  // Quadrupling K halves the per-iteration epsilon with no receiver noise.
  EXPECT_NEAR(rows[4].eps_iter, 0.5 * rows[0].eps_iter,
              1e-12 * rows[0].eps_iter);
}

TEST(RunAllocationTest, ReportsMatchExperiment) {
  const ExperimentConfig cfg = SmallConfig("seeds: [0, 1]\n");
  const std::vector<AllocationReport> reports = RunAllocation(cfg);
  const std::vector<MetricsTrace> traces = RunExperiment(cfg);
  ASSERT_EQ(reports.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(reports[i].noise_powers, traces[i].header.noise_powers);
    EXPECT_EQ(reports[i].threshold, traces[i].header.threshold);
    EXPECT_EQ(reports[i].gain.size(), 5u);
  }
  std::ostringstream out;
  WriteAllocations(reports, out);
  EXPECT_EQ(SplitLines(out.str()).size(), 11u);
}

TEST(RunSummaryTest, OneJsonLinePerRun) {
  const std::vector<MetricsTrace> traces =
      RunExperiment(SmallConfig("seeds: [0, 1]\n"));
  std::ostringstream out;
  WriteRunSummary(traces, out);
  const std::vector<std::string> lines = SplitLines(out.str());
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_NE(lines[0].find("\"feasible\":true"), std::string::npos);
  EXPECT_NE(lines[0].find("\"sweep_value\":null"), std::string::npos);
}

}  // namespace
}  // namespace airfl
