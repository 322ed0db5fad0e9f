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

#ifndef AIRFL_ERRORS_H_
#define AIRFL_ERRORS_H_

#include <stdexcept>
#include <string>
#include <utility>

namespace airfl {

// Argument errors use std::invalid_argument; violated operation preconditions
// (e.g. an unclipped gradient handed to the transmitter) use std::domain_error.
// The types below carry information a caller is expected to act on.

// The mechanism adds no noise at all, so no finite epsilon exists.
class InfiniteEpsilonError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A bound or formula is undefined for the given inputs.
class NotApplicableError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The privacy targets cannot be met with the power left after alignment.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(double deficit, double min_epsilon)
      : std::runtime_error("privacy targets infeasible: noise power deficit " +
                           std::to_string(deficit) +
                           ", minimum achievable epsilon " +
                           std::to_string(min_epsilon)),
        deficit_(deficit),
        min_epsilon_(min_epsilon) {}

  // Psi minus the total leftover power.
  double deficit() const { return deficit_; }
  // Smallest common per-iteration epsilon reachable with every user at its
  // noise cap; +inf when there is no noise at all.
  double min_epsilon() const { return min_epsilon_; }

 private:
  double deficit_;
  double min_epsilon_;
};

// Configuration could not be parsed or violates an invariant.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message),
        field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace airfl

#endif  // AIRFL_ERRORS_H_
