#include "stargaze/ranking.hpp"

#include "stargaze/error.hpp"
#include "stargaze/rng.hpp"
#include "testutil.hpp"

#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

using namespace stargaze;
using namespace stargaze::ranking;

namespace {

Ranking from_scores(std::vector<std::pair<std::string, double>> scores) {
  return rank_by_stars(scores);
}

} // namespace

TEST_CASE("rank_by_stars sorts descending") {
  const Ranking r = from_scores({{"a", 3.0}, {"b", 1.0}, {"c", 2.0}});
  CHECK(r.entries[0].repo == "a");
  CHECK(r.entries[0].rank == 1);
  CHECK(r.entries[1].repo == "c");
  CHECK(r.entries[1].rank == 2);
  CHECK(r.entries[2].repo == "b");
  CHECK(r.entries[2].rank == 3);
}

TEST_CASE("equal scores break ties lexicographically for display") {
  const Ranking r = from_scores({{"zz", 5.0}, {"aa", 5.0}, {"mm", 5.0}});
  CHECK(r.entries[0].repo == "aa");
  CHECK(r.entries[1].repo == "mm");
  CHECK(r.entries[2].repo == "zz");
}

TEST_CASE("spearman is one on identical rankings and minus one on reversals") {
  std::vector<std::pair<std::string, double>> scores;
  for (int i = 0; i < 9; ++i)
    scores.emplace_back("r" + std::to_string(i), static_cast<double>(i));
  std::vector<std::pair<std::string, double>> reversed;
  for (int i = 0; i < 9; ++i)
    reversed.emplace_back("r" + std::to_string(i), static_cast<double>(-i));
  CHECK(spearman(from_scores(scores), from_scores(scores)) == doctest::Approx(1.0));
  CHECK(spearman(from_scores(scores), from_scores(reversed)) ==
        doctest::Approx(-1.0));
}

TEST_CASE("spearman matches the brute-force oracle on small tied instances") {
  SplitMix64 rng(67);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + rng.bounded(10);
    std::vector<double> a(n), b(n);
    std::vector<std::pair<std::string, double>> sa, sb;
    bool degenerate_a = true, degenerate_b = true;
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = static_cast<double>(rng.bounded(5)); // small range forces ties
      b[i] = static_cast<double>(rng.bounded(5));
      if (a[i] != a[0]) degenerate_a = false;
      if (b[i] != b[0]) degenerate_b = false;
      sa.emplace_back("r" + std::to_string(i), a[i]);
      sb.emplace_back("r" + std::to_string(i), b[i]);
    }
    if (degenerate_a || degenerate_b) continue;
    const double oracle = testutil::spearman_bruteforce(a, b);
    const double rho = spearman(from_scores(sa), from_scores(sb));
    CHECK(rho == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(rho == spearman(from_scores(sb), from_scores(sa)));
  }
}

TEST_CASE("spearman is invariant under monotone transformations of scores") {
  SplitMix64 rng(71);
  std::vector<std::pair<std::string, double>> sa, sb, sb_transformed;
  for (int i = 0; i < 30; ++i) {
    const double a = rng.uniform(0.0, 100.0);
    const double b = rng.uniform(0.0, 100.0);
    sa.emplace_back("r" + std::to_string(i), a);
    sb.emplace_back("r" + std::to_string(i), b);
    sb_transformed.emplace_back("r" + std::to_string(i), std::exp(b / 20.0) + 5.0);
  }
  CHECK(spearman(from_scores(sa), from_scores(sb)) ==
        doctest::Approx(spearman(from_scores(sa), from_scores(sb_transformed)))
            .epsilon(1e-12));
}

TEST_CASE("spearman rejects mismatched or constant rankings") {
  const Ranking a = from_scores({{"x", 1.0}, {"y", 2.0}});
  const Ranking b = from_scores({{"x", 1.0}, {"z", 2.0}});
  CHECK_THROWS_AS(spearman(a, b), Error);
  const Ranking flat_a = from_scores({{"x", 1.0}, {"y", 1.0}});
  const Ranking flat_b = from_scores({{"x", 2.0}, {"y", 1.0}});
  CHECK_THROWS_AS(spearman(flat_a, flat_b), Error);
}

TEST_CASE("compare_rankings flags newcomers and diffs against the full real ranking") {
  // Real ranking: n1 (newcomer) ranks 2nd; predictions cover the other four.
  const Ranking real = from_scores(
      {{"a", 50.0}, {"n1", 40.0}, {"b", 30.0}, {"c", 20.0}, {"d", 10.0}});
  const Ranking predicted =
      from_scores({{"b", 9.0}, {"a", 8.0}, {"c", 2.0}, {"d", 1.0}});
  const RankComparison cmp = compare_rankings(predicted, real);
  CHECK(cmp.newcomers == 1);
  CHECK(cmp.rows.size() == 5);
  CHECK(cmp.newcomers + 4 == real.entries.size());
  // b: predicted 1, real 3 -> diff -2 (overestimated).
  CHECK(cmp.rows[2].repo == "b");
  CHECK(*cmp.rows[2].diff == -2);
  CHECK_FALSE(cmp.rows[1].diff.has_value());
  // The newcomer shifts b, c and d to better predicted ranks than real ones.
  CHECK(cmp.overestimated == 3);
  CHECK(cmp.underestimated == 1);
}

TEST_CASE("perfect predictions give zero diffs and rho one") {
  std::vector<std::pair<std::string, double>> scores;
  for (int i = 0; i < 12; ++i)
    scores.emplace_back("r" + std::to_string(i), 100.0 - i);
  const RankComparison cmp =
      compare_rankings(from_scores(scores), from_scores(scores));
  CHECK(cmp.rho == doctest::Approx(1.0));
  CHECK(cmp.newcomers == 0);
  for (const auto& row : cmp.rows) CHECK(*row.diff == 0);
}

TEST_CASE("compare_rankings requires predicted repos inside the real set") {
  const Ranking real = from_scores({{"a", 2.0}, {"b", 1.0}});
  const Ranking predicted = from_scores({{"a", 2.0}, {"zz", 1.0}});
  CHECK_THROWS_AS(compare_rankings(predicted, real), Error);
}

TEST_CASE("topk correlation over the full size equals the overall rho") {
  SplitMix64 rng(73);
  std::vector<std::pair<std::string, double>> real_scores, pred_scores;
  for (int i = 0; i < 40; ++i) {
    real_scores.emplace_back("r" + std::to_string(i), rng.uniform(0.0, 1000.0));
    pred_scores.emplace_back("r" + std::to_string(i), rng.uniform(0.0, 1000.0));
  }
  const Ranking real = from_scores(real_scores);
  const Ranking predicted = from_scores(pred_scores);
  const RankComparison cmp = compare_rankings(predicted, real);
  const auto topk = topk_correlation(predicted, real, {40});
  REQUIRE(topk.size() == 1);
  CHECK(topk[0].second == doctest::Approx(cmp.rho).epsilon(1e-12));
}

TEST_CASE("topk correlation is one when the head is predicted exactly") {
  const Ranking real = from_scores(
      {{"a", 90.0}, {"b", 80.0}, {"c", 10.0}, {"d", 5.0}, {"e", 1.0}});
  const Ranking predicted = from_scores(
      {{"a", 9.0}, {"b", 8.0}, {"e", 3.0}, {"c", 2.0}, {"d", 1.0}});
  const auto topk = topk_correlation(predicted, real, {2});
  CHECK(topk[0].second == doctest::Approx(1.0));
  CHECK_THROWS_AS(topk_correlation(predicted, real, {99}), Error);
}
