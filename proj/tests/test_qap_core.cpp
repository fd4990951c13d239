#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "qaplon/generator.hpp"
#include "qaplon/qap.hpp"
#include "qaplon/ranking.hpp"
#include "support/oracles.hpp"

using namespace qaplon;

namespace {

// dist = [[0,1],[2,0]], flow = [[0,3],[4,0]]: costs 11 and 10.
QapInstance two_by_two() {
  return QapInstance(2, {0, 1, 2, 0}, {0, 3, 4, 0});
}

QapInstance random_instance(int n, std::uint64_t seed) {
  GeneratorConfig cfg;
  cfg.klass = InstanceClass::kUniform;
  cfg.n = n;
  cfg.seed = seed;
  return gen_uniform(cfg);
}

std::vector<int> random_permutation(int n, std::mt19937& gen) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), gen);
  return p;
}

}  // namespace

TEST_SUITE_BEGIN("qap-core");

TEST_CASE("cost of the 2x2 hand example") {
  const QapInstance inst = two_by_two();
  CHECK(cost(inst, std::vector<int>{0, 1}) == 11);
  CHECK(cost(inst, std::vector<int>{1, 0}) == 10);
}

TEST_CASE("all-zero flow annihilates every term") {
  const QapInstance inst(3, {0, 5, 2, 5, 0, 7, 2, 7, 0},
                         std::vector<Cost>(9, 0));
  CHECK(cost(inst, std::vector<int>{0, 1, 2}) == 0);
  CHECK(cost(inst, std::vector<int>{2, 0, 1}) == 0);
}

TEST_CASE("cost matches the straight-line oracle on random instances") {
  std::mt19937 gen(7);
  for (int trial = 0; trial < 20; ++trial) {
    const QapInstance inst = random_instance(6, 100 + trial);
    const std::vector<int> p = random_permutation(6, gen);
    CHECK(cost(inst, p) == oracle::naive_cost(inst, p));
  }
}

TEST_CASE("cost rejects dimension mismatch") {
  const QapInstance inst = two_by_two();
  CHECK_THROWS_AS(cost(inst, std::vector<int>{0, 1, 2}), std::invalid_argument);
}

TEST_CASE("fitness is the exact negation of cost") {
  std::mt19937 gen(8);
  const QapInstance inst = random_instance(5, 1);
  for (int trial = 0; trial < 10; ++trial) {
    const std::vector<int> p = random_permutation(5, gen);
    CHECK(fitness(inst, p) == -static_cast<double>(cost(inst, p)));
  }
  CHECK(fitness(two_by_two(), std::vector<int>{0, 1}) == -11.0);
}

TEST_CASE("swap delta on the 2x2 hand example") {
  const QapInstance inst = two_by_two();
  CHECK(swap_delta(inst, std::vector<int>{0, 1}, 0, 1) == -1);
}

TEST_CASE("swapping indistinguishable facilities is free") {
  // flow rows/columns of the two swapped values are identical
  const QapInstance inst(3, {0, 3, 8, 3, 0, 2, 8, 2, 0},
                         {0, 0, 5, 0, 0, 5, 7, 7, 0});
  const std::vector<int> p{0, 1, 2};
  CHECK(swap_delta(inst, p, 0, 1) == 0);
}

TEST_CASE("swap delta equals full recomputation on random instances") {
  std::mt19937 gen(9);
  const QapInstance inst = random_instance(8, 77);
  std::uniform_int_distribution<int> pos(0, 7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::vector<int> p = random_permutation(8, gen);
    int r = pos(gen), s = pos(gen);
    if (r == s) continue;
    if (r > s) std::swap(r, s);
    std::vector<int> q = p;
    std::swap(q[r], q[s]);
    CHECK(swap_delta(inst, p, r, s) ==
          oracle::naive_cost(inst, q) - oracle::naive_cost(inst, p));
  }
}

TEST_CASE("swap delta rejects bad positions") {
  const QapInstance inst = two_by_two();
  const std::vector<int> p{0, 1};
  CHECK_THROWS_AS(swap_delta(inst, p, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(swap_delta(inst, p, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(swap_delta(inst, p, 0, 2), std::invalid_argument);
}

TEST_CASE("neighbor pairs enumerate n(n-1)/2 distinct swaps") {
  CHECK(neighbor_pairs(10).size() == 45);
  CHECK(neighbor_pairs(2) == std::vector<std::pair<int, int>>{{0, 1}});

  const auto pairs = neighbor_pairs(5);
  CHECK(pairs.size() == 10);
  std::set<std::pair<int, int>> distinct(pairs.begin(), pairs.end());
  CHECK(distinct.size() == 10);
  for (const auto& [r, s] : pairs) CHECK(r < s);

  // each swap yields a valid permutation differing in exactly two spots
  std::mt19937 gen(10);
  const std::vector<int> p = random_permutation(5, gen);
  for (const auto& [r, s] : pairs) {
    std::vector<int> q = p;
    apply_swap(q, r, s);
    CHECK(is_valid_permutation(q));
    int diff = 0;
    for (int i = 0; i < 5; ++i) diff += (p[i] != q[i]);
    CHECK(diff == 2);
  }
}

TEST_CASE("rank of the identity and the reversal") {
  CHECK(rank_of(std::vector<int>{0, 1, 2}) == 0);
  CHECK(rank_of(std::vector<int>{2, 1, 0}) == 5);
  CHECK(unrank(0, 3) == std::vector<int>{0, 1, 2});
  CHECK(unrank(5, 3) == std::vector<int>{2, 1, 0});
}

TEST_CASE("rank/unrank is a bijection over all of n = 7") {
  const std::uint64_t total = factorial(7);
  CHECK(total == 5040);
  std::vector<bool> seen(total, false);
  std::vector<int> p(7);
  std::iota(p.begin(), p.end(), 0);
  do {
    const ConfigId r = rank_of(p);
    REQUIRE(r < total);
    REQUIRE(!seen[r]);
    seen[r] = true;
    REQUIRE(unrank(r, 7) == p);
  } while (std::next_permutation(p.begin(), p.end()));
  CHECK(std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }));
}

TEST_CASE("rank is monotone in lexicographic order") {
  std::vector<int> p{0, 1, 2, 3, 4};
  ConfigId prev = rank_of(p);
  while (std::next_permutation(p.begin(), p.end())) {
    const ConfigId r = rank_of(p);
    CHECK(r == prev + 1);
    prev = r;
  }
}

TEST_CASE("unrank rejects out-of-range ranks") {
  CHECK_THROWS_AS(unrank(6, 3), std::invalid_argument);
  CHECK_THROWS_AS(unrank(factorial(4), 4), std::invalid_argument);
  CHECK_THROWS_AS(factorial(21), std::invalid_argument);
}

TEST_CASE("instance construction validates shape and sign") {
  CHECK_THROWS_AS(QapInstance(2, {0, 1, 2}, {0, 3, 4, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(QapInstance(2, {1, 1, 2, 0}, {0, 3, 4, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(QapInstance(2, {0, -1, 2, 0}, {0, 3, 4, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(QapInstance(1, {0}, {0}), std::invalid_argument);
}

TEST_SUITE_END();
