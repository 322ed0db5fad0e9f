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

#ifndef AIRFL_CONFIG_H_
#define AIRFL_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace airfl {

enum class Scheme { kAligned, kOrthogonal };
enum class SweepAxis { kNone, kUsers, kPowerDbm, kRounds };

// Experiment description. Defaults reproduce the synthetic regression setup:
// d = 30, 20 samples per user out of 3000, reg = 1e-3, T = 1000, 30 dBm,
// sigma_m^2 = 1 and (eps, delta) = (1.2, 1e-4). K has no default.
//
// Config files are flat YAML maps whose keys are listed in kConfigKeys.
struct ExperimentConfig {
  int num_users = 0;  // K
  int dim = 30;       // d
  int rounds = 1000;  // T
  int per_user_size = 20;
  int n_total = 3000;
  double reg = 1e-3;
  double clip_norm = 10.0;               // L
  std::vector<double> power_dbm{30.0};   // one value or one per user
  double noise_var = 1.0;                // sigma_m_sq
  std::vector<double> eps_target{1.2};   // one value or one per user
  double delta = 1e-4;
  double delta_prime = 1e-5;
  std::vector<std::uint64_t> seeds{0};
  Scheme scheme = Scheme::kAligned;
  SweepAxis sweep = SweepAxis::kNone;
  std::vector<double> sweep_values;
  double backoff = 1.0;
  // privacy-scan only: rounds to compose over (empty means {rounds}) and the
  // gradient power fraction of the symmetric scan channel.
  std::vector<int> scan_rounds;
  double scan_alpha = 0.5;
  int threads = 1;  // 0 = hardware concurrency

  // Per-user transmit power in watts for a K-user system.
  std::vector<double> PowerWatts(std::size_t num_users) const;
  std::vector<double> EpsTargets(std::size_t num_users) const;

  // Throws ConfigError naming the offending field.
  void Validate() const;
};

inline constexpr std::string_view kConfigKeys[] = {
    "K",         "d",           "T",          "per_user_size", "n_total",
    "reg",       "L",           "P_dBm",      "sigma_m_sq",    "eps_target",
    "delta",     "delta_prime", "seeds",      "scheme",        "sweep",
    "sweep_values", "backoff",  "scan_T",     "scan_alpha",    "threads"};

ExperimentConfig ParseConfig(std::string_view yaml_text);
ExperimentConfig LoadConfig(const std::filesystem::path& path);

// Seed precedence: explicit override, then AIRFL_SEED, then the file.
void ApplySeedOverride(ExperimentConfig& cfg,
                       std::optional<std::uint64_t> cli_override);

// Stable hex digest of every field; identifies the config a run came from.
std::string ConfigFingerprint(const ExperimentConfig& cfg);

struct SweepPoint {
  std::optional<double> value;
  ExperimentConfig cfg;  // base config with the swept field substituted
};

// One point per sweep value, or a single point when there is no sweep.
std::vector<SweepPoint> ExpandSweep(const ExperimentConfig& cfg);

std::string_view SchemeName(Scheme scheme);
std::string_view SweepAxisName(SweepAxis axis);

}  // namespace airfl

#endif  // AIRFL_CONFIG_H_
