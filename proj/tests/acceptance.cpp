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
//
// Acceptance suite: one line per criterion, nonzero exit when any fails.
//
//   acceptance <path-to-cli> <configs-dir> <scratch-dir>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "synrdp/codec.hpp"
#include "synrdp/latent_model.hpp"
#include "synrdp/likelihood.hpp"
#include "synrdp/measures.hpp"
#include "synrdp/rdp.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using namespace synrdp;

namespace {

struct Criterion {
  int id;
  std::string label;
  bool pass = true;
  std::string detail;
  double seconds = 0.0;
};

std::vector<Criterion> g_results;

class Run {
 public:
  Run(int id, std::string label) : start_(std::chrono::steady_clock::now()) {
    criterion_.id = id;
    criterion_.label = std::move(label);
  }

  void expect(bool ok, const std::string& what) {
    if (!ok && criterion_.pass) {
      criterion_.pass = false;
      criterion_.detail = what;
    }
  }

  void expect_le(double value, double bound, const std::string& what) {
    std::ostringstream os;
    os << what << " (" << value << " > " << bound << ")";
    expect(value <= bound, os.str());
  }

  ~Run() {
    criterion_.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    g_results.push_back(criterion_);
  }

 private:
  Criterion criterion_;
  std::chrono::steady_clock::time_point start_;
};

// --------------------------------------------------------------------------

void criterion1_semantic_measures() {
  Run run(1, "semantic-measure suite (1000 random instances)");
  Xoshiro256 rng(1001);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.next_below(15));
    const FiniteDistribution p = test::random_distribution(rng, n, 0.0);
    const SynsetPartition s = test::random_partition(rng, n);

    run.expect_le(semantic_entropy(p, s), entropy(p) + 1e-12, "H_s <= H");
    run.expect_le(-semantic_entropy(p, s), 1e-12, "H_s >= 0");

    const FiniteDistribution q = test::random_distribution(rng, n);
    run.expect_le(partial_semantic_kl(q, p, s), kl_divergence(q, p) + 1e-12,
                  "partial semantic KL <= KL");

    if (s.block_count() >= 2) {
      auto merged = s.blocks();
      const std::size_t a = rng.next_below(merged.size());
      std::size_t b = rng.next_below(merged.size());
      while (b == a) b = rng.next_below(merged.size());
      merged[a].insert(merged[a].end(), merged[b].begin(), merged[b].end());
      merged.erase(merged.begin() + static_cast<std::ptrdiff_t>(b));
      run.expect_le(semantic_entropy(p, SynsetPartition(std::move(merged))),
                    semantic_entropy(p, s) + 1e-12, "coarsening monotonicity");
    }
  }
}

void criterion2_full_kl_nonnegativity() {
  Run run(2, "full semantic KL non-negativity");
  Xoshiro256 rng(1002);
  for (int i = 0; i < 1000; ++i) {
    const DiscreteLatentModel m = test::random_model(rng);
    for (std::size_t x = 0; x < m.x_size(); ++x) {
      run.expect_le(-full_semantic_kl(m, x), 1e-12, "full_semantic_kl >= -1e-12");
    }
    const std::size_t x = rng.next_below(m.x_size());
    const FiniteDistribution post = true_syn_posterior(m, m.source_partition().block_of(x));
    run.expect_le(std::abs(full_semantic_kl(m.with_enc_syn_row(x, post.probs()), x)), 1e-12,
                  "zero at the true posterior");
  }
}

void criterion3_kl_decomposition() {
  Run run(3, "semantic KL decomposition: partial = full - detail entropy");
  Xoshiro256 rng(1003);
  for (int i = 0; i < 1000; ++i) {
    const DiscreteLatentModel m = test::random_model(rng);
    for (std::size_t x = 0; x < m.x_size(); ++x) {
      const SemanticKlDecomposition t = semantic_kl_decomposition(m, x);
      run.expect_le(std::abs(t.partial - (t.full - t.det_cond_entropy)), 1e-10,
                    "decomposition residual");
    }
  }
}

void criterion4_svlbo() {
  Run run(4, "SVLBO identity: evidence = SVLBO + full KL");
  Xoshiro256 rng(1004);
  for (int i = 0; i < 1000; ++i) {
    const DiscreteLatentModel m = test::random_model(rng);
    const std::size_t x = rng.next_below(m.x_size());
    const SviReport r = svlbo_report(m, x);
    run.expect_le(std::abs(r.evidence - (r.svlbo + r.full_kl)), 1e-10, "identity residual");

    const FiniteDistribution post = true_syn_posterior(m, m.source_partition().block_of(x));
    const SviReport tight = svlbo_report(m.with_enc_syn_row(x, post.probs()), x);
    run.expect_le(std::abs(tight.evidence - tight.svlbo), 1e-10, "tight bound at the posterior");
  }
}

void criterion5_likelihood_identity() {
  Run run(5, "likelihood identity: f = KL + delta_p, collapse, gradient direction");
  Xoshiro256 rng(1005);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.next_below(10));
    const LikelihoodInstance inst(test::random_distribution(rng, n),
                                  test::random_distribution(rng, n),
                                  test::random_partition(rng, n));
    run.expect_le(std::abs(divergence_identity_residual(inst)), 1e-12, "identity residual");
  }
  // singleton collapse
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.next_below(8));
    const FiniteDistribution p = test::random_distribution(rng, n);
    const FiniteDistribution m = test::random_distribution(rng, n);
    const LikelihoodInstance inst(p, m, SynsetPartition::singletons(n));
    run.expect_le(std::abs(f_constant(inst)), 1e-12, "singleton f = 0");
    run.expect_le(std::abs(delta_p(inst) + kl_divergence(p, m)), 1e-12, "singleton delta_p = -KL");
  }
  // projected gradient descent riding KL to zero drags delta_p onto f
  for (int i = 0; i < 10; ++i) {
    const std::size_t n = 3 + static_cast<std::size_t>(rng.next_below(6));
    const FiniteDistribution source = test::random_distribution(rng, n);
    const FiniteDistribution fitted =
        fit_model_to_source(source, test::random_distribution(rng, n), 1e-9);
    run.expect_le(kl_divergence(source, fitted), 1e-8, "descent reaches KL < 1e-8");
    const LikelihoodInstance inst(source, fitted, test::random_partition(rng, n));
    run.expect_le(std::abs(delta_p(inst) - f_constant(inst)), 1e-6, "delta_p converged to f");
  }
}

void criterion6_gaussian() {
  Run run(6, "gaussian reduction: nll = weighted E-MSE + constant");
  Xoshiro256 rng(1006);
  for (int i = 0; i < 100; ++i) {
    const std::size_t d = 1 + static_cast<std::size_t>(rng.next_below(64));
    std::vector<double> x(d);
    std::vector<double> xh(d);
    for (auto& v : x) v = 6.0 * (rng.next_double() - 0.5);
    for (auto& v : xh) v = 6.0 * (rng.next_double() - 0.5);
    const double sigma2 = 0.05 + 3.0 * rng.next_double();
    const GaussianReduction g = gaussian_reduction(x, xh, sigma2);
    run.expect_le(std::abs(g.nll - (g.weighted_mse + g.constant)), 1e-9, "split identity");
    run.expect_le(std::abs(g.nll - test::oracle_gaussian_nll_bits(x, xh, sigma2)), 1e-9,
                  "density oracle");
  }
}

void criterion7_rd_solver() {
  Run run(7, "RD solver: binary symmetric closed form");
  const FiniteDistribution bern({0.5, 0.5});
  const DistortionMatrix hamming = DistortionMatrix::hamming(2);
  for (double d : {0.05, 0.1, 0.2, 0.3, 0.4}) {
    const RdpPoint pt = rd_rate_at(bern, hamming, d);
    run.expect_le(std::abs(pt.rate - test::oracle_bsc_rate(d)), 1e-4, "1 - H_b(D) match");
  }
  const RdpPoint corner = rd_rate_at(bern, hamming, 0.0);
  run.expect(corner.rate == 1.0, "D = 0 corner equals H = 1 exactly");
}

void criterion8_rdp_solver() {
  Run run(8, "RDP solver: BA match, monotone 5x5 grid, oracle spots");
  const FiniteDistribution p({0.5, 0.3, 0.2});
  const DistortionMatrix hamming = DistortionMatrix::hamming(3);

  // disabled perception reproduces Blahut-Arimoto
  for (double d : {0.1, 0.25}) {
    const RdpPoint rdp = rdp_solve(p, hamming, d, kNoPerceptionBudget);
    const RdpPoint ba = rd_rate_at(p, hamming, rdp.achieved_d);
    run.expect_le(std::abs(rdp.rate - ba.rate), 1e-4, "BA match at disabled perception");
  }

  // monotone non-increasing rates over the 5x5 target grid
  const std::vector<double> d_grid = {0.05, 0.125, 0.2, 0.275, 0.35};
  const std::vector<double> p_grid = {0.002, 0.01, 0.05, 0.2, 1.0};
  double rate[5][5];
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const RdpPoint pt = rdp_solve(p, hamming, d_grid[i], p_grid[j]);
      rate[i][j] = pt.rate;
      run.expect_le(pt.achieved_d, d_grid[i] + 1e-6, "distortion feasibility");
      run.expect_le(pt.achieved_p, p_grid[j] + 1e-6, "perception feasibility");
      run.expect_le(rd_rate_at(p, hamming, d_grid[i]).rate - 1e-4, pt.rate,
                    "R(D,P) >= R(D) - 1e-4");
    }
  }
  for (int i = 1; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      run.expect_le(rate[i][j], rate[i - 1][j] + 1e-4, "monotone in D");
    }
  }
  for (int i = 0; i < 5; ++i) {
    for (int j = 1; j < 5; ++j) {
      run.expect_le(rate[i][j], rate[i][j - 1] + 1e-4, "monotone in P");
    }
  }

  // exhaustive simplex-grid oracle at four spot points
  const std::vector<std::pair<double, double>> spots = {
      {0.15, 0.005}, {0.2, 0.01}, {0.25, 0.02}, {0.3, 0.03}};
  for (const auto& [d, pb] : spots) {
    const RdpPoint pt = rdp_solve(p, hamming, d, pb);
    const test::GridOracleResult oracle =
        test::rdp_grid_oracle(p.probs(), hamming.delta(), d, pb, 12, 4, 4);
    run.expect(oracle.feasible, "oracle found a feasible grid channel");
    run.expect_le(std::abs(pt.rate - oracle.rate_bits), 2e-3, "grid oracle match");
  }
}

void criterion9_codec() {
  Run run(9, "codec end-to-end at n = 1e5, seed 42");
  const FiniteDistribution p({0.5, 0.25, 0.25});
  const DistortionMatrix hamming = DistortionMatrix::hamming(3);
  {
    const CodecModel model(p, SynsetPartition({{0, 1}, {2}}), 42);
    const std::size_t n = 100000;
    const auto symbols = sample_source(model, n);
    const BitStream bs = encode(symbols, model);
    const auto blocks = decode_block_indices(bs, model);
    bool roundtrip = true;
    for (std::size_t i = 0; i < n; ++i) {
      roundtrip &= blocks[i] == model.partition().block_of(symbols[i]);
    }
    run.expect(roundtrip, "semantic round trip exact");

    const auto recon = decode(bs, model);
    const RunReport r = measure(symbols, recon, bs, model, hamming);
    run.expect(r.rate_bits_per_symbol >= 0.80 && r.rate_bits_per_symbol <= 0.83,
               "rate in [0.80, 0.83]");
    run.expect_le(r.empirical_kl_source_vs_recon, 0.01, "smoothed empirical KL < 0.01");
    run.expect_le(std::abs(r.empirical_mi_semantic - r.h_s), 0.05, "semantic MI near H_s");

    const FiniteDistribution push = model.reconstruction_pushforward();
    for (std::size_t i = 0; i < p.size(); ++i) {
      run.expect_le(std::abs(push[i] - p[i]), 1e-14, "exact pushforward equality");
    }
  }
  {
    const CodecModel model(p, SynsetPartition::singletons(3), 42);
    const std::size_t n = 100000;
    const auto symbols = sample_source(model, n);
    const BitStream bs = encode(symbols, model);
    const auto recon = decode(bs, model);
    run.expect(recon == symbols, "singleton run reconstructs bit-exactly");
    const RunReport r = measure(symbols, recon, bs, model, hamming);
    run.expect(r.rate_bits_per_symbol >= 1.50 && r.rate_bits_per_symbol <= 1.52,
               "singleton rate in [1.50, 1.52]");
  }
}

void criterion10_degenerations() {
  Run run(10, "degeneration suite and semantic MI inequality");
  {
    const DegenerationReport r = degeneration_suite(
        FiniteDistribution({0.5, 0.5}), DistortionMatrix::hamming(2),
        SynsetPartition::singletons(2));
    for (const auto& a : r.assertions) run.expect_le(a.residual, 1e-6, "bernoulli " + a.name);
  }
  {
    const DegenerationReport r =
        degeneration_suite(FiniteDistribution({0.5, 0.25, 0.25}), DistortionMatrix::hamming(3),
                           SynsetPartition({{0, 1}, {2}}));
    for (const auto& a : r.assertions) run.expect_le(a.residual, 1e-6, "skew3 " + a.name);
  }
  {
    const DegenerationReport r =
        degeneration_suite(FiniteDistribution::uniform(4), DistortionMatrix::hamming(4),
                           SynsetPartition({{0, 1}, {2, 3}}));
    for (const auto& a : r.assertions) run.expect_le(a.residual, 1e-6, "uniform4 " + a.name);
  }
  Xoshiro256 rng(1010);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.next_below(6));
    const JointDistribution j = test::random_joint(rng, n, n);
    const SemanticMiComparison c = semantic_mi_comparison(j, test::random_partition(rng, n));
    run.expect_le(c.i_semantic, c.i_syntactic + 1e-12, "I_semantic <= I_syntactic");
  }
}

// --------------------------------------------------------------------------

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

bool same_directory_bytes(const fs::path& a, const fs::path& b, std::string& mismatch) {
  std::vector<fs::path> names;
  for (const auto& entry : fs::directory_iterator(a)) names.push_back(entry.path().filename());
  std::sort(names.begin(), names.end());
  for (const fs::path& name : names) {
    if (!fs::exists(b / name)) {
      mismatch = (b / name).string() + " missing";
      return false;
    }
    if (read_file(a / name) != read_file(b / name)) {
      mismatch = name.string() + " differs";
      return false;
    }
  }
  return true;
}

void criterion11_reproducibility(const std::string& cli, const fs::path& configs,
                                 const fs::path& scratch) {
  Run run(11, "CLI reproducibility: same seed, jobs-invariant artifacts");
  const fs::path config = configs / "default.json";
  run.expect(fs::exists(config), "default config present");
  if (!fs::exists(config)) return;

  const fs::path a = scratch / "run_a";
  const fs::path b = scratch / "run_b";
  const fs::path c = scratch / "run_jobs4";
  fs::remove_all(a);
  fs::remove_all(b);
  fs::remove_all(c);

  auto invoke = [&](const fs::path& out, int jobs) {
    std::ostringstream cmd;
    cmd << "\"" << cli << "\" all -c \"" << config.string() << "\" --seed 7 --jobs " << jobs
        << " --out-dir \"" << out.string() << "\" > \"" << (out.string() + ".log") << "\" 2>&1";
    return std::system(cmd.str().c_str());
  };

  run.expect(invoke(a, 1) == 0, "first run exits 0");
  run.expect(invoke(b, 1) == 0, "second run exits 0");
  run.expect(invoke(c, 4) == 0, "jobs-4 run exits 0");

  std::string mismatch;
  run.expect(same_directory_bytes(a, b, mismatch), "repeat run byte-identical: " + mismatch);
  run.expect(same_directory_bytes(a, c, mismatch), "jobs-4 run byte-identical: " + mismatch);

  // CLI error contract: configuration problems exit with code 2
  {
    std::ostringstream cmd;
    cmd << "\"" << cli << "\" entropy -c \"" << (scratch / "missing.json").string()
        << "\" > /dev/null 2>&1";
    const int status = std::system(cmd.str().c_str());
    run.expect(WIFEXITED(status) && WEXITSTATUS(status) == 2, "bad config exits 2");
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 4) {
    std::fprintf(stderr, "usage: acceptance <cli-binary> <configs-dir> <scratch-dir>\n");
    return 2;
  }
  const std::string cli = argv[1];
  const fs::path configs = argv[2];
  const fs::path scratch = argv[3];
  fs::create_directories(scratch);

  criterion1_semantic_measures();
  criterion2_full_kl_nonnegativity();
  criterion3_kl_decomposition();
  criterion4_svlbo();
  criterion5_likelihood_identity();
  criterion6_gaussian();
  criterion7_rd_solver();
  criterion8_rdp_solver();
  criterion9_codec();
  criterion10_degenerations();
  criterion11_reproducibility(cli, configs, scratch);

  bool all_pass = true;
  for (const Criterion& c : g_results) {
    std::printf("[%s] criterion %2d: %s (%.2fs)%s%s\n", c.pass ? "PASS" : "FAIL", c.id,
                c.label.c_str(), c.seconds, c.pass ? "" : " -- ", c.pass ? "" : c.detail.c_str());
    all_pass &= c.pass;
  }
  std::printf("%s\n", all_pass ? "ACCEPTANCE: ALL CRITERIA PASS" : "ACCEPTANCE: FAILURES PRESENT");
  return all_pass ? 0 : 1;
}
