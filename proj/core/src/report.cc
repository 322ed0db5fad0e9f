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

#include "airfl/report.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <system_error>

#include "json.hpp"

namespace airfl {
namespace {

std::string OptionalValue(const std::optional<double>& v) {
  return v ? FormatDouble(*v) : std::string();
}

template <typename WriteFn>
void WriteFile(const std::filesystem::path& path, WriteFn&& write) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write(out);
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

// JSON has no NaN or infinity; map them to null.
nlohmann::json JsonNumber(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

std::string FormatDouble(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw std::runtime_error("FormatDouble failed");
  return std::string(buf, ptr);
}

void WriteTraces(std::span<const MetricsTrace> traces, std::ostream& out) {
  out << kTraceHeader << '\n';
  for (const MetricsTrace& trace : traces) {
    const RunHeader& h = trace.header;
    const std::string prefix = std::to_string(h.run_id) + ',' +
                               std::to_string(h.seed) + ',' +
                               OptionalValue(h.sweep_value) + ',';
    for (const RoundRecord& r : trace.rounds) {
      out << prefix << r.t << ',' << FormatDouble(r.global_loss) << ','
          << FormatDouble(r.grad_norm) << ',' << FormatDouble(r.noise_var)
          << ',' << FormatDouble(r.eps_composed) << '\n';
    }
  }
}

void WriteScan(std::span<const ScanRow> rows, std::ostream& out) {
  out << kScanHeader << '\n';
  for (const ScanRow& r : rows) {
    out << r.num_users << ',' << r.rounds << ',' << FormatDouble(r.eps_iter)
        << ',' << FormatDouble(r.eps_total) << ','
        << FormatDouble(r.delta_total) << '\n';
  }
}

void WriteAllocations(std::span<const AllocationReport> reports,
                      std::ostream& out) {
  out << kAllocationHeader << '\n';
  for (const AllocationReport& rep : reports) {
    for (std::size_t k = 0; k < rep.gain.size(); ++k) {
      out << rep.run_id << ',' << rep.seed << ','
          << OptionalValue(rep.sweep_value) << ',' << k << ','
          << FormatDouble(rep.gain[k]) << ',' << FormatDouble(rep.power[k])
          << ',' << FormatDouble(rep.alpha[k]) << ','
          << FormatDouble(rep.beta[k]) << ',' << FormatDouble(rep.leftover[k])
          << ',' << FormatDouble(rep.noise_powers[k]) << ','
          << FormatDouble(rep.threshold) << ',' << (rep.feasible ? 1 : 0)
          << ',' << FormatDouble(rep.eps_per_iteration) << '\n';
    }
  }
}

void WriteRunSummary(std::span<const MetricsTrace> traces, std::ostream& out) {
  for (const MetricsTrace& trace : traces) {
    const RunHeader& h = trace.header;
    nlohmann::json z = nlohmann::json::array();
    for (double v : h.noise_powers) z.push_back(JsonNumber(v));
    nlohmann::json line = {
        {"run_id", h.run_id},
        {"seed", h.seed},
        {"sweep_value", h.sweep_value ? JsonNumber(*h.sweep_value) : nullptr},
        {"scheme", h.scheme},
        {"config_hash", h.config_hash},
        {"feasible", h.feasible},
        {"eps_per_iteration", JsonNumber(h.eps_per_iteration)},
        {"psi", JsonNumber(h.threshold)},
        {"Z", z},
        {"rounds", trace.rounds.size()},
    };
    out << line.dump() << '\n';
  }
}

void EmitCsv(std::span<const MetricsTrace> traces,
             const std::filesystem::path& path) {
  WriteFile(path, [&](std::ostream& out) { WriteTraces(traces, out); });
}

void EmitTable(std::span<const ScanRow> rows,
               const std::filesystem::path& path) {
  WriteFile(path, [&](std::ostream& out) { WriteScan(rows, out); });
}

void EmitAllocations(std::span<const AllocationReport> reports,
                     const std::filesystem::path& path) {
  WriteFile(path, [&](std::ostream& out) { WriteAllocations(reports, out); });
}

void EmitRunSummary(std::span<const MetricsTrace> traces,
                    const std::filesystem::path& path) {
  WriteFile(path, [&](std::ostream& out) { WriteRunSummary(traces, out); });
}

}  // namespace airfl
