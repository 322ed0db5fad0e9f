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

#ifndef AIRFL_REPORT_H_
#define AIRFL_REPORT_H_

#include <filesystem>
#include <ostream>
#include <span>
#include <string>

#include "airfl/experiment.h"
#include "airfl/training.h"

namespace airfl {

// CSV output: UTF-8, LF line endings, header row first, doubles in their
// shortest round-trip form. The Emit* functions throw std::runtime_error
// when the path cannot be written.

inline constexpr char kTraceHeader[] =
    "run_id,seed,sweep_value,t,global_loss,grad_norm,sigma_z_sq,eps_composed";
inline constexpr char kScanHeader[] = "K,T,eps_iter,eps_total,delta_total";
inline constexpr char kAllocationHeader[] =
    "run_id,seed,sweep_value,user,h_mag,P,alpha,beta,lambda,Z,psi,feasible,"
    "eps_iter";

// Shortest decimal string that parses back to the same double.
std::string FormatDouble(double value);

void WriteTraces(std::span<const MetricsTrace> traces, std::ostream& out);
void WriteScan(std::span<const ScanRow> rows, std::ostream& out);
void WriteAllocations(std::span<const AllocationReport> reports,
                      std::ostream& out);
// One JSON object per line with each run's header.
void WriteRunSummary(std::span<const MetricsTrace> traces, std::ostream& out);

void EmitCsv(std::span<const MetricsTrace> traces,
             const std::filesystem::path& path);
void EmitTable(std::span<const ScanRow> rows,
               const std::filesystem::path& path);
void EmitAllocations(std::span<const AllocationReport> reports,
                     const std::filesystem::path& path);
void EmitRunSummary(std::span<const MetricsTrace> traces,
                    const std::filesystem::path& path);

}  // namespace airfl

#endif  // AIRFL_REPORT_H_
