// Copyright 2026 The swnav Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SWNAV_CLI_HPP_
#define SWNAV_CLI_HPP_

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "swnav/anchors.hpp"
#include "swnav/curation.hpp"
#include "swnav/dataset.hpp"
#include "swnav/expansion.hpp"
#include "swnav/metrics.hpp"
#include "swnav/policynet.hpp"
#include "swnav/scenegen.hpp"
#include "swnav/supervision.hpp"

namespace swnav {

/// Flat key=value configuration. Every knob is registered with a default and
/// a one-line description; unknown keys are rejected.
class RunConfig {
 public:
  RunConfig();

  void set(const std::string& key, const std::string& value);
  void load_file(const std::string& path);

  const std::string& str(const std::string& key) const;
  double num(const std::string& key) const;
  int integer(const std::string& key) const;
  uint64_t u64(const std::string& key) const;
  bool flag(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const { return values_; }
  const std::map<std::string, std::string>& descriptions() const { return desc_; }
  std::string help_text() const;

  // Typed views assembled from the flat keys.
  ScenarioConfig scenario_config() const;
  CurationConfig curation_config() const;
  ExpansionConfig expansion_config() const;
  PolicyConfig policy_config() const;
  TrainConfig train_config() const;
  EvalConfig eval_config() const;
  RolloutConfig rollout_config() const;

 private:
  void define(const std::string& key, const std::string& default_value,
              const std::string& description);

  std::map<std::string, std::string> values_;
  std::map<std::string, std::string> desc_;
};

// Subcommand bodies (shared by the binary and tests). Each returns 0 on
// success and prints to `out`.
int cmd_gen(const RunConfig& cfg, std::ostream& out);
int cmd_curate(const RunConfig& cfg, std::ostream& out);
int cmd_expand(const RunConfig& cfg, std::ostream& out);
int cmd_anchors(const RunConfig& cfg, std::ostream& out);
int cmd_train(const RunConfig& cfg, std::ostream& out);
int cmd_eval(const RunConfig& cfg, std::ostream& out);
int cmd_rollout(const RunConfig& cfg, std::ostream& out);
int cmd_report(const RunConfig& cfg, std::ostream& out);

/// Loads every scenario bundle directory under `data_dir`, sorted by name.
std::vector<ScenarioBundle> load_bundles(const std::string& data_dir);

/// Full argv entry point: `swnav <command> [--config file] [--key value ...]`.
/// Exit codes: 0 success, 1 domain error, 2 usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace swnav

#endif  // SWNAV_CLI_HPP_
