#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "rainbowlab/rainbowlab.hpp"
#include "support/oracles.hpp"

using namespace rainbowlab;

TEST(Rng, CounterStreamsAreReproducibleAndIndependent) {
  CounterRng a(42, 3), b(42, 3), c(42, 4);
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    EXPECT_NE(x, c());
  }
  CounterRng jump(42, 3, 50), walk(42, 3);
  for (int i = 0; i < 50; ++i) walk();
  EXPECT_EQ(jump(), walk());
}

TEST(Rng, BelowIsInRangeAndRoughlyUniform) {
  CounterRng rng(1);
  std::vector<std::uint64_t> hist(7, 0);
  for (int i = 0; i < 70000; ++i) ++hist[rng.below(7)];
  EXPECT_GT(chi_square_uniform(hist).p_value, 1e-4);
  EXPECT_EQ(rng.below(1), 0U);
}

TEST(Rng, SampleSubsetIsSortedDistinct) {
  CounterRng rng(9);
  for (std::uint64_t m = 0; m <= 10; ++m) {
    const auto s = sample_subset(10, m, rng);
    ASSERT_EQ(s.size(), m);
    EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
    EXPECT_EQ(std::set<std::uint64_t>(s.begin(), s.end()).size(), m);
  }
}

TEST(SampleMatching, TrivialShapes) {
  CounterRng rng(0);
  EXPECT_EQ(sample_matching(Universe(1, 3), rng).members(), (std::vector<Tuple>{Tuple{1, 1, 1}}));
  EXPECT_EQ(sample_matching(Universe(4, 1), rng).as_family(), Family::all(Universe(4, 1)));
}

TEST(SampleMatching, EverySampleIsAPerfectMatching) {
  CounterRng rng(5);
  const Universe u(6, 3);
  for (int i = 0; i < 200; ++i) {
    const auto m = sample_matching(u, rng);
    for (int j = 1; j <= u.k(); ++j)
      for (int a = 1; a <= u.n(); ++a) EXPECT_EQ(intersect_count(m, hyperplane(u, j, a)), 1U);
  }
}

TEST(MatchingCount, AgreesWithBruteForce) {
  for (const auto& [n, k] : {std::pair{1, 1}, std::pair{2, 2}, std::pair{3, 2}, std::pair{2, 3}, std::pair{3, 3},
                             std::pair{4, 2}, std::pair{4, 1}})
    EXPECT_EQ(matching_count(n, k), oracle::count_perfect_matchings(Universe(n, k))) << n << " " << k;
}

TEST(MatchingRank, IsABijection) {
  const Universe u(3, 3);
  std::set<std::uint64_t> ranks;
  std::vector<int> p{1, 2, 3};
  std::vector<std::vector<int>> perms;
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  for (const auto& a : perms)
    for (const auto& b : perms) ranks.insert(matching_rank(PerfectMatching(u, {a, b})));
  EXPECT_EQ(ranks.size(), 36U);
  EXPECT_EQ(*ranks.rbegin(), 35U);
}

TEST(IntersectCount, Identities) {
  const Universe u(2, 2);
  const auto g = multiset_sum(hyperplane(u, 1, 1), hyperplane(u, 2, 1));
  for (const auto& m : {PerfectMatching(u, {{1, 2}}), PerfectMatching(u, {{2, 1}})}) {
    EXPECT_EQ(intersect_count(m, g), 2U);
    EXPECT_EQ(intersect_count(m, Family::all(u)), 2U);
  }
  CounterRng rng(6);
  const Universe w(5, 2);
  for (int i = 0; i < 50; ++i) {
    const auto a = oracle::random_family(w, 0.4, rng), b = oracle::random_family(w, 0.4, rng);
    const auto m = sample_matching(w, rng);
    EXPECT_EQ(intersect_count(m, multiset_sum(a, b)), intersect_count(m, a) + intersect_count(m, b));
  }
}

TEST(Bounds, ConcentrationBound) {
  EXPECT_DOUBLE_EQ(bound_thm23(0.1, 100, 5), 2 * std::exp(-25.0 / 15.0));
  EXPECT_NEAR(bound_thm23(0.1, 100, 5), 0.37775120567512366, 1e-15);
  EXPECT_DOUBLE_EQ(bound_thm23(0, 100, 3), 2 * std::exp(-1.5));
  double prev = 3;
  for (double l = 1; l < 200; l *= 1.5) {
    const double b = bound_thm23(0.3, 50, l);
    EXPECT_LT(b, prev);
    prev = b;
  }
  EXPECT_THROW(bound_thm23(0.1, 100, 0), InvalidInput);
}

TEST(Bounds, Deviations) {
  const auto d = deviation_cor24(2000, 100, 2, 10);
  EXPECT_NEAR(d.sqrt_term, 15.480910240819798, 1e-12);
  EXPECT_NEAR(d.log_term, 23.965858188431927, 1e-12);
  EXPECT_EQ(d.branch, "log");
  EXPECT_DOUBLE_EQ(deviation_cor24(0, 100, 2, 10).value, 8 * std::log(20.0));
  EXPECT_DOUBLE_EQ(deviation_cor25(777, 30, 3, 4, 1).value, deviation_cor24(777, 30, 3, 4).value);
  EXPECT_THROW(deviation_cor25(1, 10, 2, 1, 0.5), InvalidInput);
}

TEST(Bounds, LayerSplitStaysWithinStatedDeviation) {
  CounterRng rng(12);
  const Universe u(6, 2);
  for (int trial = 0; trial < 30; ++trial) {
    TupleMultiset g(u);
    const auto t = 1 + rng.below(4);
    for (std::uint64_t c = 0; c < u.size(); ++c)
      if (rng.uniform() < 0.5) g.add(c, 1 + rng.below(t));
    if (g.total() == 0) continue;
    const auto split = split_layers(g, 10);
    EXPECT_EQ(split.layer_sizes.size(), g.max_multiplicity());
    EXPECT_TRUE(split.within());
  }
}

TEST(McTail, HyperplaneCountIsConstant) {
  const Universe u(8, 2);
  const auto rep = mc_tail(hyperplane(u, 1, 1), 500, {1, 2}, 3);
  EXPECT_EQ(rep.min_count, 1U);
  EXPECT_EQ(rep.max_count, 1U);
  for (const auto& r : rep.rows) {
    EXPECT_EQ(r.upper_emp, 0);
    EXPECT_EQ(r.lower_emp, 0);
  }
}

TEST(McTail, DeterministicAcrossWorkersAndCsvShape) {
  const Universe u(10, 2);
  CounterRng rng(1);
  const Family g(u, sample_subset(u.size(), 30, rng));
  const auto one = mc_tail(g, 2000, {1, 2, 3}, 77, 1);
  const auto four = mc_tail(g, 2000, {1, 2, 3}, 77, 4);
  std::ostringstream a, b;
  write_tail_csv(one, a);
  write_tail_csv(four, b);
  const auto csv = a.str();
  EXPECT_EQ(csv, b.str());
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "lambda,deviation,upper_emp,upper_se,lower_emp,lower_se,bound,samples,seed");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_THROW(mc_tail(g, 0, {1}, 1), InvalidInput);
}

TEST(ChiSquare, KnownValue) {
  // two degrees of freedom: p = exp(-statistic / 2)
  const auto c = chi_square_uniform({10, 20, 30});
  EXPECT_DOUBLE_EQ(c.statistic, 10.0);
  EXPECT_EQ(c.dof, 2U);
  EXPECT_NEAR(c.p_value, std::exp(-5.0), 1e-12);
}
