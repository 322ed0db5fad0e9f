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

#include "airfl/config.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "airfl/channel.h"
#include "airfl/errors.h"
#include "json.hpp"

namespace airfl {
namespace {

template <typename T>
T Read(const YAML::Node& node, const std::string& key, const char* expected) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(key, std::string("expected ") + expected);
  }
}

// Accepts a scalar or a sequence.
template <typename T>
std::vector<T> ReadList(const YAML::Node& node, const std::string& key,
                        const char* expected) {
  std::vector<T> out;
  if (node.IsSequence()) {
    for (const auto& item : node) out.push_back(Read<T>(item, key, expected));
  } else if (node.IsScalar()) {
    out.push_back(Read<T>(node, key, expected));
  } else {
    throw ConfigError(key, std::string("expected ") + expected +
                               " or a list of them");
  }
  if (out.empty()) throw ConfigError(key, "list must not be empty");
  return out;
}

Scheme ParseScheme(const std::string& s) {
  if (s == "aligned") return Scheme::kAligned;
  if (s == "orthogonal") return Scheme::kOrthogonal;
  throw ConfigError("scheme", "expected 'aligned' or 'orthogonal', got '" +
                                  s + "'");
}

SweepAxis ParseSweep(const std::string& s) {
  if (s == "none") return SweepAxis::kNone;
  if (s == "K") return SweepAxis::kUsers;
  if (s == "P_dBm") return SweepAxis::kPowerDbm;
  if (s == "T") return SweepAxis::kRounds;
  throw ConfigError("sweep", "expected one of none, K, P_dBm, T; got '" + s +
                                 "'");
}

void Require(bool ok, const char* field, const char* message) {
  if (!ok) throw ConfigError(field, message);
}

bool IsPositiveInteger(double v) {
  return v >= 1.0 && v == std::floor(v) && v <= 1e9;
}

std::uint64_t Fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::vector<double> ExperimentConfig::PowerWatts(std::size_t num_users) const {
  std::vector<double> watts;
  if (power_dbm.size() == 1) {
    watts.assign(num_users, DbmToWatts(power_dbm.front()));
  } else {
    for (double dbm : power_dbm) watts.push_back(DbmToWatts(dbm));
  }
  return watts;
}

std::vector<double> ExperimentConfig::EpsTargets(std::size_t num_users) const {
  if (eps_target.size() == 1) {
    return std::vector<double>(num_users, eps_target.front());
  }
  return eps_target;
}

void ExperimentConfig::Validate() const {
  Require(num_users >= 1, "K", "must be a positive integer");
  Require(dim >= 1, "d", "must be a positive integer");
  Require(rounds >= 1, "T", "must be a positive integer");
  Require(per_user_size >= 1, "per_user_size", "must be a positive integer");
  Require(n_total >= 1, "n_total", "must be a positive integer");
  Require(static_cast<long long>(num_users) * per_user_size <= n_total,
          "n_total", "must be at least K * per_user_size");
  Require(reg > 0.0 && std::isfinite(reg), "reg", "must be > 0");
  Require(clip_norm > 0.0 && std::isfinite(clip_norm), "L", "must be > 0");
  Require(power_dbm.size() == 1 ||
              power_dbm.size() == static_cast<std::size_t>(num_users),
          "P_dBm", "needs one value or one per user");
  for (double p : power_dbm) Require(std::isfinite(p), "P_dBm", "must be finite");
  Require(noise_var >= 0.0 && std::isfinite(noise_var), "sigma_m_sq",
          "must be >= 0");
  Require(eps_target.size() == 1 ||
              eps_target.size() == static_cast<std::size_t>(num_users),
          "eps_target", "needs one value or one per user");
  for (double e : eps_target) {
    Require(e > 0.0 && std::isfinite(e), "eps_target", "must be > 0");
  }
  Require(delta > 0.0 && delta <= 1.0, "delta", "must lie in (0, 1]");
  Require(delta_prime > 0.0 && delta_prime <= 1.0, "delta_prime",
          "must lie in (0, 1]");
  Require(!seeds.empty(), "seeds", "must not be empty");
  Require(sweep == SweepAxis::kNone || !sweep_values.empty(), "sweep_values",
          "required when sweep is set");
  if (sweep == SweepAxis::kUsers || sweep == SweepAxis::kRounds) {
    for (double v : sweep_values) {
      Require(IsPositiveInteger(v), "sweep_values",
              "K and T sweeps need positive integers");
    }
  }
  Require(backoff > 0.0 && backoff <= 1.0, "backoff", "must lie in (0, 1]");
  for (int t : scan_rounds) Require(t >= 1, "scan_T", "must be >= 1");
  Require(scan_alpha > 0.0 && scan_alpha < 1.0, "scan_alpha",
          "must lie in (0, 1)");
  Require(threads >= 0, "threads", "must be >= 0");
}

ExperimentConfig ParseConfig(std::string_view yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::Exception& e) {
    throw ConfigError("", std::string("parse error: ") + e.what());
  }
  if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  if (!root.IsMap()) throw ConfigError("", "config must be a key-value map");

  ExperimentConfig cfg;
  bool have_users = false;
  for (const auto& entry : root) {
    const std::string key = Read<std::string>(entry.first, "", "string key");
    const YAML::Node& v = entry.second;
    if (key == "K") {
      cfg.num_users = Read<int>(v, key, "an integer");
      have_users = true;
    } else if (key == "d") {
      cfg.dim = Read<int>(v, key, "an integer");
    } else if (key == "T") {
      cfg.rounds = Read<int>(v, key, "an integer");
    } else if (key == "per_user_size") {
      cfg.per_user_size = Read<int>(v, key, "an integer");
    } else if (key == "n_total") {
      cfg.n_total = Read<int>(v, key, "an integer");
    } else if (key == "reg") {
      cfg.reg = Read<double>(v, key, "a number");
    } else if (key == "L") {
      cfg.clip_norm = Read<double>(v, key, "a number");
    } else if (key == "P_dBm") {
      cfg.power_dbm = ReadList<double>(v, key, "a number");
    } else if (key == "sigma_m_sq") {
      cfg.noise_var = Read<double>(v, key, "a number");
    } else if (key == "eps_target") {
      cfg.eps_target = ReadList<double>(v, key, "a number");
    } else if (key == "delta") {
      cfg.delta = Read<double>(v, key, "a number");
    } else if (key == "delta_prime") {
      cfg.delta_prime = Read<double>(v, key, "a number");
    } else if (key == "seeds") {
      cfg.seeds = ReadList<std::uint64_t>(v, key, "an unsigned integer");
    } else if (key == "scheme") {
      cfg.scheme = ParseScheme(Read<std::string>(v, key, "a string"));
    } else if (key == "sweep") {
      cfg.sweep = ParseSweep(Read<std::string>(v, key, "a string"));
    } else if (key == "sweep_values") {
      cfg.sweep_values = ReadList<double>(v, key, "a number");
    } else if (key == "backoff") {
      cfg.backoff = Read<double>(v, key, "a number");
    } else if (key == "scan_T") {
      cfg.scan_rounds = ReadList<int>(v, key, "an integer");
    } else if (key == "scan_alpha") {
      cfg.scan_alpha = Read<double>(v, key, "a number");
    } else if (key == "threads") {
      cfg.threads = Read<int>(v, key, "an integer");
    } else {
      throw ConfigError(key, "unknown key");
    }
  }
  if (!have_users) throw ConfigError("K", "required");
  cfg.Validate();
  return cfg;
}

ExperimentConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return ParseConfig(text.str());
}

void ApplySeedOverride(ExperimentConfig& cfg,
                       std::optional<std::uint64_t> cli_override) {
  if (cli_override) {
    cfg.seeds = {*cli_override};
    return;
  }
  const char* env = std::getenv("AIRFL_SEED");
  if (env == nullptr || *env == '\0') return;
  std::uint64_t seed = 0;
  const char* end = env + std::char_traits<char>::length(env);
  auto [ptr, ec] = std::from_chars(env, end, seed);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("AIRFL_SEED", "expected an unsigned integer");
  }
  cfg.seeds = {seed};
}

std::string ConfigFingerprint(const ExperimentConfig& cfg) {
  nlohmann::json j = {
      {"K", cfg.num_users},
      {"d", cfg.dim},
      {"T", cfg.rounds},
      {"per_user_size", cfg.per_user_size},
      {"n_total", cfg.n_total},
      {"reg", cfg.reg},
      {"L", cfg.clip_norm},
      {"P_dBm", cfg.power_dbm},
      {"sigma_m_sq", cfg.noise_var},
      {"eps_target", cfg.eps_target},
      {"delta", cfg.delta},
      {"delta_prime", cfg.delta_prime},
      {"seeds", cfg.seeds},
      {"scheme", SchemeName(cfg.scheme)},
      {"sweep", SweepAxisName(cfg.sweep)},
      {"sweep_values", cfg.sweep_values},
      {"backoff", cfg.backoff},
      {"scan_T", cfg.scan_rounds},
      {"scan_alpha", cfg.scan_alpha},
  };
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(Fnv1a(j.dump())));
  return buf;
}

std::vector<SweepPoint> ExpandSweep(const ExperimentConfig& cfg) {
  std::vector<SweepPoint> points;
  if (cfg.sweep == SweepAxis::kNone) {
    points.push_back({std::nullopt, cfg});
    return points;
  }
  for (double v : cfg.sweep_values) {
    ExperimentConfig point = cfg;
    switch (cfg.sweep) {
      case SweepAxis::kUsers:
        point.num_users = static_cast<int>(v);
        break;
      case SweepAxis::kPowerDbm:
        point.power_dbm = {v};
        break;
      case SweepAxis::kRounds:
        point.rounds = static_cast<int>(v);
        break;
      case SweepAxis::kNone:
        break;
    }
    point.sweep = SweepAxis::kNone;
    point.sweep_values.clear();
    point.Validate();
    points.push_back({v, std::move(point)});
  }
  return points;
}

std::string_view SchemeName(Scheme scheme) {
  return scheme == Scheme::kAligned ? "aligned" : "orthogonal";
}

std::string_view SweepAxisName(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kUsers:
      return "K";
    case SweepAxis::kPowerDbm:
      return "P_dBm";
    case SweepAxis::kRounds:
      return "T";
    case SweepAxis::kNone:
      break;
  }
  return "none";
}

}  // namespace airfl
