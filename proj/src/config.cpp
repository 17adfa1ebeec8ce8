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

#include "synrdp/config.hpp"

#include <fstream>
#include <set>

#include "synrdp/error.hpp"

namespace synrdp {

using nlohmann::json;

namespace {

void require_known_keys(const json& obj, const std::string& path,
                        std::initializer_list<const char*> allowed) {
  const std::set<std::string> allowed_set(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed_set.count(key)) {
      throw ConfigError(path + "." + key, "unknown key");
    }
  }
}

const json& require(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(path + "." + key, "missing required key");
  return *it;
}

double number_at(const json& j, const std::string& path) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    throw ConfigError(path, "expected a number (or \"inf\")");
  }
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  return j.get<double>();
}

std::vector<double> number_vector(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a non-empty array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(number_at(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Matrix matrix_at(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a non-empty array of rows");
  Matrix out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(number_vector(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::uint64_t uint_at(const json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    throw ConfigError(path, "expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

template <typename Fn>
auto wrap_validation(const std::string& path, Fn&& fn) {
  try {
    return fn();
  } catch (const ValidationError& e) {
    throw ConfigError(path, e.what());
  } catch (const SupportError& e) {
    throw ConfigError(path, e.what());
  }
}

}  // namespace

FiniteDistribution distribution_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object with a \"probs\" key");
  require_known_keys(j, path, {"probs"});
  std::vector<double> probs = number_vector(require(j, path, "probs"), path + ".probs");
  return wrap_validation(path + ".probs",
                         [&] { return FiniteDistribution(std::move(probs), true); });
}

json distribution_to_json(const FiniteDistribution& p) { return json{{"probs", p.probs()}}; }

SynsetPartition partition_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object with a \"blocks\" key");
  require_known_keys(j, path, {"blocks"});
  const json& blocks_json = require(j, path, "blocks");
  if (!blocks_json.is_array() || blocks_json.empty()) {
    throw ConfigError(path + ".blocks", "expected a non-empty array of index arrays");
  }
  std::vector<std::vector<std::size_t>> blocks;
  for (std::size_t b = 0; b < blocks_json.size(); ++b) {
    const std::string block_path = path + ".blocks[" + std::to_string(b) + "]";
    if (!blocks_json[b].is_array()) throw ConfigError(block_path, "expected an array of indices");
    std::vector<std::size_t> block;
    for (std::size_t i = 0; i < blocks_json[b].size(); ++i) {
      block.push_back(static_cast<std::size_t>(
          uint_at(blocks_json[b][i], block_path + "[" + std::to_string(i) + "]")));
    }
    blocks.push_back(std::move(block));
  }
  return wrap_validation(path + ".blocks", [&] { return SynsetPartition(std::move(blocks)); });
}

json partition_to_json(const SynsetPartition& s) { return json{{"blocks", s.blocks()}}; }

namespace {

DistortionMatrix distortion_from_json(const json& j, const std::string& path,
                                      const std::optional<FiniteDistribution>& source) {
  if (j.is_string()) {
    if (j.get<std::string>() != "hamming") {
      throw ConfigError(path, "unknown named distortion \"" + j.get<std::string>() + "\"");
    }
    if (!source) throw ConfigError(path, "named distortion needs a source section for its size");
    return DistortionMatrix::hamming(source->size());
  }
  if (!j.is_object()) throw ConfigError(path, "expected \"hamming\" or {\"matrix\": [[...]]}");
  require_known_keys(j, path, {"matrix"});
  Matrix m = matrix_at(require(j, path, "matrix"), path + ".matrix");
  return wrap_validation(path + ".matrix", [&] { return DistortionMatrix(std::move(m)); });
}

SolverConfig solver_from_json(const json& j, const std::string& path) {
  require_known_keys(
      j, path, {"max_iters", "tol", "bisect_iters", "outer_rounds", "restarts", "seed"});
  SolverConfig cfg;
  if (j.contains("max_iters")) cfg.max_iters = static_cast<int>(uint_at(j["max_iters"], path + ".max_iters"));
  if (j.contains("tol")) cfg.tol = number_at(j["tol"], path + ".tol");
  if (j.contains("bisect_iters")) {
    cfg.bisect_iters = static_cast<int>(uint_at(j["bisect_iters"], path + ".bisect_iters"));
  }
  if (j.contains("outer_rounds")) {
    cfg.outer_rounds = static_cast<int>(uint_at(j["outer_rounds"], path + ".outer_rounds"));
  }
  if (j.contains("restarts")) cfg.restarts = static_cast<int>(uint_at(j["restarts"], path + ".restarts"));
  if (j.contains("seed")) cfg.seed = uint_at(j["seed"], path + ".seed");
  if (cfg.max_iters < 1) throw ConfigError(path + ".max_iters", "must be >= 1");
  if (!(cfg.tol > 0.0)) throw ConfigError(path + ".tol", "must be > 0");
  return cfg;
}

CodecSettings codec_from_json(const json& j, const std::string& path) {
  require_known_keys(j, path, {"n", "seed", "sampler_mode", "detail_sampler"});
  CodecSettings cs;
  if (j.contains("n")) cs.n = static_cast<std::size_t>(uint_at(j["n"], path + ".n"));
  if (j.contains("seed")) cs.seed = uint_at(j["seed"], path + ".seed");
  if (j.contains("sampler_mode")) {
    const std::string mode = j["sampler_mode"].is_string() ? j["sampler_mode"].get<std::string>() : "";
    if (mode == "strict") {
      cs.mode = SamplerMode::kStrict;
    } else if (mode == "free") {
      cs.mode = SamplerMode::kFree;
    } else {
      throw ConfigError(path + ".sampler_mode", "expected \"strict\" or \"free\"");
    }
  }
  if (j.contains("detail_sampler")) {
    cs.detail_sampler = matrix_at(j["detail_sampler"], path + ".detail_sampler");
  }
  if (cs.n < 1) throw ConfigError(path + ".n", "must be >= 1");
  return cs;
}

SweepSettings sweeps_from_json(const json& j, const std::string& path) {
  require_known_keys(j, path, {"d_targets", "p_targets"});
  SweepSettings sw;
  if (j.contains("d_targets")) sw.d_targets = number_vector(j["d_targets"], path + ".d_targets");
  if (j.contains("p_targets")) sw.p_targets = number_vector(j["p_targets"], path + ".p_targets");
  return sw;
}

DiscreteLatentModel svi_model_from_json(const json& j, const std::string& path) {
  require_known_keys(j, path, {"source", "blocks", "enc_syn", "enc_det", "prior_syn", "dec_lik"});
  std::vector<double> source = number_vector(require(j, path, "source"), path + ".source");
  SynsetPartition partition =
      partition_from_json(json{{"blocks", require(j, path, "blocks")}}, path);
  Matrix enc_syn = matrix_at(require(j, path, "enc_syn"), path + ".enc_syn");
  const json& det_json = require(j, path, "enc_det");
  if (!det_json.is_array() || det_json.empty()) {
    throw ConfigError(path + ".enc_det", "expected one table per source symbol");
  }
  std::vector<Matrix> enc_det;
  for (std::size_t x = 0; x < det_json.size(); ++x) {
    enc_det.push_back(matrix_at(det_json[x], path + ".enc_det[" + std::to_string(x) + "]"));
  }
  std::vector<double> prior = number_vector(require(j, path, "prior_syn"), path + ".prior_syn");
  Matrix dec_lik = matrix_at(require(j, path, "dec_lik"), path + ".dec_lik");
  return wrap_validation(path, [&] {
    return DiscreteLatentModel(FiniteDistribution(std::move(source), true), std::move(partition),
                               std::move(enc_syn), std::move(enc_det),
                               FiniteDistribution(std::move(prior), true), std::move(dec_lik));
  });
}

LikelihoodInstance likelihood_from_json(const json& j, const std::string& path) {
  require_known_keys(j, path, {"source", "model", "blocks"});
  std::vector<double> source = number_vector(require(j, path, "source"), path + ".source");
  std::vector<double> model = number_vector(require(j, path, "model"), path + ".model");
  SynsetPartition partition =
      partition_from_json(json{{"blocks", require(j, path, "blocks")}}, path);
  return wrap_validation(path, [&] {
    return LikelihoodInstance(FiniteDistribution(std::move(source), true),
                              FiniteDistribution(std::move(model), true), std::move(partition));
  });
}

}  // namespace

ExperimentConfig parse_experiment_config(const json& root, const std::string& path) {
  if (!root.is_object()) throw ConfigError(path, "top level must be an object");
  require_known_keys(root, path,
                     {"source", "partition", "distortion", "solver", "codec", "sweeps",
                      "svi_model", "likelihood"});
  ExperimentConfig cfg;
  if (root.contains("source")) {
    cfg.source = distribution_from_json(root["source"], path + ".source");
  }
  if (root.contains("partition")) {
    cfg.partition = partition_from_json(root["partition"], path + ".partition");
    if (cfg.source && cfg.partition->alphabet_size() != cfg.source->size()) {
      throw ConfigError(path + ".partition", "partition does not cover the source alphabet");
    }
  }
  if (root.contains("distortion")) {
    cfg.distortion = distortion_from_json(root["distortion"], path + ".distortion", cfg.source);
  }
  if (root.contains("solver")) cfg.solver = solver_from_json(root["solver"], path + ".solver");
  if (root.contains("codec")) cfg.codec = codec_from_json(root["codec"], path + ".codec");
  if (root.contains("sweeps")) cfg.sweeps = sweeps_from_json(root["sweeps"], path + ".sweeps");
  if (root.contains("svi_model")) {
    cfg.svi_model = svi_model_from_json(root["svi_model"], path + ".svi_model");
  }
  if (root.contains("likelihood")) {
    cfg.likelihood = likelihood_from_json(root["likelihood"], path + ".likelihood");
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open config file");
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string(), e.what());
  }
  return parse_experiment_config(root, path.filename().string());
}

json svi_report_to_json(const SviReport& r) {
  return json{{"evidence", r.evidence},
              {"svlbo", r.svlbo},
              {"full_kl", r.full_kl},
              {"partial_kl", r.partial_kl},
              {"det_cond_entropy", r.det_cond_entropy},
              {"likelihood_term", r.likelihood_term},
              {"rate_term", r.rate_term}};
}

json run_report_to_json(const RunReport& r) {
  return json{{"n", r.n},
              {"rate_bits_per_symbol", r.rate_bits_per_symbol},
              {"h_s", r.h_s},
              {"expected_distortion", r.expected_distortion},
              {"empirical_kl_source_vs_recon", r.empirical_kl_source_vs_recon},
              {"empirical_mi_syntactic", r.empirical_mi_syntactic},
              {"empirical_mi_semantic", r.empirical_mi_semantic}};
}

json degeneration_report_to_json(const DegenerationReport& r) {
  json assertions = json::array();
  for (const auto& a : r.assertions) {
    assertions.push_back(json{{"name", a.name}, {"residual", a.residual}, {"pass", a.pass}});
  }
  return json{{"assertions", assertions}, {"all_pass", r.all_pass}};
}

namespace {

void rename_into_place(const std::filesystem::path& tmp, const std::filesystem::path& path) {
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot move " + tmp.string() + " to " + path.string() + ": " +
                             ec.message());
  }
}

}  // namespace

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  rename_into_place(tmp, path);
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::vector<std::uint8_t>& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(reinterpret_cast<const char*>(content.data()),
              static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  rename_into_place(tmp, path);
}

}  // namespace synrdp
