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

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "synrdp/error.hpp"
#include "synrdp/measures.hpp"
#include "test_util.hpp"

using namespace synrdp;

namespace {
FiniteDistribution dist(std::vector<double> p) { return FiniteDistribution(std::move(p)); }
SynsetPartition blocks(std::vector<std::vector<std::size_t>> b) {
  return SynsetPartition(std::move(b));
}
}  // namespace

TEST_CASE("distribution validation") {
  CHECK_THROWS_AS(FiniteDistribution({}), ValidationError);
  CHECK_THROWS_AS(FiniteDistribution({0.5, -0.5, 1.0}), ValidationError);
  CHECK_THROWS_AS(FiniteDistribution({0.5, 0.4}), ValidationError);
  // within tolerance
  CHECK_NOTHROW(FiniteDistribution({0.5, 0.5 + 5e-10}));
  // renormalization accepts decimal noise and larger deviations
  const FiniteDistribution p({0.2, 0.2}, true);
  CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(FiniteDistribution({0.0, 0.0}, true), ValidationError);
}

TEST_CASE("partition validation and canonical form") {
  CHECK_THROWS_AS(blocks({{0, 1}, {1, 2}}), ValidationError);  // overlap
  CHECK_THROWS_AS(blocks({{0}, {2}}), ValidationError);        // gap
  CHECK_THROWS_AS(blocks({{0, 1}, {}}), ValidationError);      // empty block

  const SynsetPartition a = blocks({{2}, {1, 0}});
  const SynsetPartition b = blocks({{0, 1}, {2}});
  CHECK(a == b);
  CHECK(a.hash() == b.hash());
  CHECK(a.block_of(1) == 0);
  CHECK(a.block_of(2) == 1);
  CHECK(a.hash() != SynsetPartition::singletons(3).hash());
}

TEST_CASE("entropy basics") {
  CHECK(entropy(FiniteDistribution::uniform(4)) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(entropy(dist({1.0, 0.0, 0.0})) == 0.0);
  CHECK(entropy(dist({0.5, 0.25, 0.25})) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(entropy(dist({0.5, 0.5}), LogUnit::kNats) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("semantic entropy") {
  const FiniteDistribution p = dist({0.5, 0.25, 0.25});
  CHECK(semantic_entropy(p, SynsetPartition::singletons(3)) ==
        doctest::Approx(1.5).epsilon(1e-12));
  CHECK(semantic_entropy(p, SynsetPartition::single_block(3)) == 0.0);
  CHECK(semantic_entropy(p, blocks({{0, 1}, {2}})) ==
        doctest::Approx(0.8112781244591328).epsilon(1e-12));
  CHECK_THROWS_AS(semantic_entropy(p, SynsetPartition::singletons(4)), ValidationError);
}

TEST_CASE("kl divergence") {
  const FiniteDistribution p = dist({0.5, 0.5});
  CHECK(kl_divergence(p, p) == 0.0);
  CHECK(kl_divergence(dist({1.0, 0.0}), p) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(kl_divergence(p, dist({0.9, 0.1})) ==
        doctest::Approx(0.7369655941662061).epsilon(1e-12));
  // support violation names the offending index
  try {
    kl_divergence(dist({0.5, 0.5}), dist({1.0, 0.0}));
    FAIL("expected SupportError");
  } catch (const SupportError& e) {
    CHECK(std::string(e.what()).find("index 1") != std::string::npos);
  }
}

TEST_CASE("partial semantic kl") {
  // one block: each term is q_i log2(q_i / 1)
  CHECK(partial_semantic_kl(dist({0.5, 0.5}), dist({0.5, 0.5}), SynsetPartition::single_block(2)) ==
        doctest::Approx(-1.0).epsilon(1e-12));

  const FiniteDistribution q = dist({0.25, 0.25, 0.5});
  const FiniteDistribution p = dist({0.5, 0.25, 0.25});
  // singleton blocks degenerate to classical KL
  CHECK(partial_semantic_kl(q, p, SynsetPartition::singletons(3)) ==
        doctest::Approx(kl_divergence(q, p)).epsilon(1e-12));

  const double partial = partial_semantic_kl(q, p, blocks({{0, 1}, {2}}));
  CHECK(partial == doctest::Approx(-0.29248125036057815).epsilon(1e-12));
  CHECK(partial <= kl_divergence(q, p));

  CHECK_THROWS_AS(
      partial_semantic_kl(dist({0.5, 0.5}), dist({0.0, 1.0}), SynsetPartition::singletons(2)),
      SupportError);
}

TEST_CASE("mutual information") {
  // independent joint
  Matrix product(2, std::vector<double>(3));
  const FiniteDistribution px = dist({0.3, 0.7});
  const FiniteDistribution py = dist({0.2, 0.5, 0.3});
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 3; ++y) product[x][y] = px[x] * py[y];
  CHECK(mutual_information(JointDistribution(product)) == doctest::Approx(0.0).epsilon(1e-12));

  // identity coupling of uniform-4
  Matrix ident(4, std::vector<double>(4, 0.0));
  for (std::size_t i = 0; i < 4; ++i) ident[i][i] = 0.25;
  CHECK(mutual_information(JointDistribution(ident)) == doctest::Approx(2.0).epsilon(1e-12));

  // random joints against the brute-force triple loop; symmetric in the axes
  Xoshiro256 rng(7);
  for (int i = 0; i < 50; ++i) {
    const JointDistribution j = test::random_joint(rng, 3, 3);
    CHECK(mutual_information(j) == doctest::Approx(test::oracle_mi_bits(j.mass())).epsilon(1e-12));
    Matrix transposed(3, std::vector<double>(3));
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b) transposed[b][a] = j.at(a, b);
    CHECK(mutual_information(JointDistribution(transposed)) ==
          doctest::Approx(mutual_information(j)).epsilon(1e-12));
  }
}

TEST_CASE("single-side semantic mutual information") {
  Xoshiro256 rng(11);
  const JointDistribution j = test::random_joint(rng, 4, 4);
  CHECK(single_side_semantic_mi(j, SynsetPartition::singletons(4)) ==
        doctest::Approx(mutual_information(j)).epsilon(1e-12));
  CHECK(single_side_semantic_mi(j, SynsetPartition::single_block(4)) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(single_side_semantic_mi(j, SynsetPartition::singletons(3)), ValidationError);

  // codec-induced joint: p(x, xhat) = p(x) * p(xhat)/P(block) on the block
  const FiniteDistribution p = dist({0.5, 0.25, 0.25});
  const SynsetPartition s = blocks({{0, 1}, {2}});
  Matrix mass(3, std::vector<double>(3, 0.0));
  const std::vector<double> block_mass = {0.75, 0.25};
  for (std::size_t x = 0; x < 3; ++x) {
    for (std::size_t y = 0; y < 3; ++y) {
      if (s.block_of(x) == s.block_of(y)) {
        mass[x][y] = p[x] * p[y] / block_mass[s.block_of(x)];
      }
    }
  }
  const JointDistribution codec_joint(mass);
  CHECK(single_side_semantic_mi(codec_joint, s) ==
        doctest::Approx(semantic_entropy(p, s)).epsilon(1e-9));
}

TEST_CASE("semantic measure properties over random instances") {
  Xoshiro256 rng(42);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.next_below(15));
    // zero floor: exercise zero-mass entries as well
    std::vector<double> raw = test::random_simplex(rng, n);
    if (i % 3 == 0) {
      raw[rng.next_below(n)] = 0.0;
    }
    const FiniteDistribution p(raw, true);
    const SynsetPartition s = test::random_partition(rng, n);

    const double h = entropy(p);
    const double hs = semantic_entropy(p, s);
    CHECK(hs >= -1e-12);
    CHECK(hs <= h + 1e-12);

    // equality iff every block has at most one positive-mass member
    bool at_most_one = true;
    for (std::size_t b = 0; b < s.block_count(); ++b) {
      int positive = 0;
      for (std::size_t idx : s.block(b)) positive += p[idx] > 0.0;
      at_most_one &= positive <= 1;
    }
    CHECK((std::abs(hs - h) < 1e-12) == at_most_one);

    const FiniteDistribution q = test::random_distribution(rng, n);
    if ([&] {
          for (std::size_t idx = 0; idx < n; ++idx) {
            if (q[idx] > 0.0 && p[idx] == 0.0) return false;
          }
          return true;
        }()) {
      CHECK(partial_semantic_kl(q, p, s) <= kl_divergence(q, p) + 1e-12);
    }
  }
}

TEST_CASE("kl non-negativity and equality condition") {
  Xoshiro256 rng(5);
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.next_below(8));
    const FiniteDistribution p = test::random_distribution(rng, n);
    const FiniteDistribution q = test::random_distribution(rng, n);
    const double d = kl_divergence(p, q);
    CHECK(d >= 0.0);
    double max_gap = 0.0;
    for (std::size_t idx = 0; idx < n; ++idx) max_gap = std::max(max_gap, std::abs(p[idx] - q[idx]));
    if (d < 1e-15) CHECK(max_gap < 1e-12);
    CHECK(kl_divergence(p, p) == 0.0);
  }
}

TEST_CASE("coarsening never increases semantic entropy") {
  Xoshiro256 rng(13);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.next_below(15));
    const FiniteDistribution p = test::random_distribution(rng, n, 0.0);
    const SynsetPartition s = test::random_partition(rng, n);
    if (s.block_count() < 2) continue;
    const double before = semantic_entropy(p, s);

    // merge two random distinct blocks
    auto merged_blocks = s.blocks();
    const std::size_t a = rng.next_below(merged_blocks.size());
    std::size_t b = rng.next_below(merged_blocks.size());
    while (b == a) b = rng.next_below(merged_blocks.size());
    merged_blocks[a].insert(merged_blocks[a].end(), merged_blocks[b].begin(),
                            merged_blocks[b].end());
    merged_blocks.erase(merged_blocks.begin() + static_cast<std::ptrdiff_t>(b));
    const double after = semantic_entropy(p, SynsetPartition(std::move(merged_blocks)));
    CHECK(after <= before + 1e-12);
  }
}

TEST_CASE("ssmi never exceeds plain mi") {
  Xoshiro256 rng(17);
  for (int i = 0; i < 300; ++i) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.next_below(6));
    const JointDistribution j = test::random_joint(rng, n, n);
    const SynsetPartition s = test::random_partition(rng, n);
    CHECK(single_side_semantic_mi(j, s) <= mutual_information(j) + 1e-12);
  }
}
