// Copyright (c) the synrdp project authors
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

#ifndef SYNRDP_CONFIG_HPP_
#define SYNRDP_CONFIG_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "synrdp/codec.hpp"
#include "synrdp/distortion.hpp"
#include "synrdp/distribution.hpp"
#include "synrdp/latent_model.hpp"
#include "synrdp/likelihood.hpp"
#include "synrdp/rdp.hpp"

namespace synrdp {

struct CodecSettings {
  std::size_t n = 10000;
  std::uint64_t seed = 42;
  SamplerMode mode = SamplerMode::kStrict;
  std::optional<Matrix> detail_sampler;
};

struct SweepSettings {
  std::vector<double> d_targets;
  std::vector<double> p_targets;  // entries may be "inf"
};

// One experiment file drives every subcommand; each subcommand reads the
// sections it needs. Unknown keys anywhere are hard errors (silent typos
// corrupt experiments).
struct ExperimentConfig {
  std::optional<FiniteDistribution> source;
  std::optional<SynsetPartition> partition;
  std::optional<DistortionMatrix> distortion;
  SolverConfig solver;
  std::optional<CodecSettings> codec;
  std::optional<SweepSettings> sweeps;
  std::optional<DiscreteLatentModel> svi_model;
  std::optional<LikelihoodInstance> likelihood;
};

ExperimentConfig load_experiment_config(const std::filesystem::path& path);
ExperimentConfig parse_experiment_config(const nlohmann::json& root, const std::string& path);

// prob_core external interface: {"probs": [...]} and {"blocks": [[...]]}.
// Serialization uses shortest round-trip decimals, so load(save(x)) == x
// bit-exactly.
nlohmann::json distribution_to_json(const FiniteDistribution& p);
FiniteDistribution distribution_from_json(const nlohmann::json& j, const std::string& path);
nlohmann::json partition_to_json(const SynsetPartition& s);
SynsetPartition partition_from_json(const nlohmann::json& j, const std::string& path);

nlohmann::json svi_report_to_json(const SviReport& r);
nlohmann::json run_report_to_json(const RunReport& r);
nlohmann::json degeneration_report_to_json(const DegenerationReport& r);

// write-temp-then-rename; partial files never appear under the final name.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
void write_file_atomic(const std::filesystem::path& path,
                       const std::vector<std::uint8_t>& content);

}  // namespace synrdp

#endif  // SYNRDP_CONFIG_HPP_
