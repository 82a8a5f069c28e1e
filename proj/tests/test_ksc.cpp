#include "stargaze/ksc.hpp"

#include "stargaze/error.hpp"
#include "stargaze/rng.hpp"
#include "testutil.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>

using namespace stargaze;
using namespace stargaze::ksc;

namespace {

Vec random_vec(SplitMix64& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  Vec v(n);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

double norm(const Vec& v) {
  double s = 0.0;
  for (const double x : v) s += x * x;
  return std::sqrt(s);
}

} // namespace

TEST_CASE("shift translates and zero-fills") {
  CHECK(shift({1, 2, 3}, 1) == Vec{0, 1, 2});
  CHECK(shift({1, 2, 3}, 0) == Vec{1, 2, 3});
  CHECK(shift({1, 2, 3}, -1) == Vec{2, 3, 0});
  CHECK(shift({1, 2, 3}, 3) == Vec{0, 0, 0});
  CHECK_THROWS_AS(shift({1, 2, 3}, 2, 1), Error);
}

TEST_CASE("optimal_alpha is the closed-form projection scale") {
  CHECK(optimal_alpha({1, 2}, {2, 4}) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(optimal_alpha({3, -1, 2}, {3, -1, 2}) == doctest::Approx(1.0));
  CHECK(optimal_alpha({1, 0}, {0, 1}) == doctest::Approx(0.0));
  CHECK_THROWS_AS(optimal_alpha({1, 2}, {0, 0}), Error);
}

TEST_CASE("distance is zero on itself and on positive rescalings") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec x = random_vec(rng, 20);
    CHECK(distance(x, x, 3).d == doctest::Approx(0.0).epsilon(1e-12));
    const double c = std::exp(rng.uniform(-3.0, 3.0));
    Vec cx = x;
    for (double& v : cx) v *= c;
    CHECK(distance(x, cx, 3).d == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("distance finds the aligning shift") {
  const auto r = distance({0, 1, 0}, {1, 0, 0}, 1);
  CHECK(r.d == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r.q == 1);
  CHECK(r.alpha == doctest::Approx(1.0));
}

TEST_CASE("distance ties prefer smaller shifts, then negative ones") {
  // A constant vector matches itself at every shift except for edge loss;
  // q = 0 must win.
  const auto r = distance({1, 1, 1, 1}, {1, 1, 1, 1}, 2);
  CHECK(r.q == 0);
}

TEST_CASE("at q_max zero the residual is the sine of the angle") {
  SplitMix64 rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const Vec x = random_vec(rng, 10), y = random_vec(rng, 10);
    if (norm(x) == 0.0 || norm(y) == 0.0) continue;
    double xy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) xy += x[i] * y[i];
    const double cos_theta = xy / (norm(x) * norm(y));
    const double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
    CHECK(distance(x, y, 0).d == doctest::Approx(sin_theta).epsilon(1e-9));
    // ... which also makes the zero-shift distance symmetric.
    CHECK(distance(x, y, 0).d == doctest::Approx(distance(y, x, 0).d).epsilon(1e-9));
  }
}

TEST_CASE("distance rejects zero vectors") {
  CHECK_THROWS_AS(distance({0, 0}, {1, 1}, 0), Error);
  CHECK_THROWS_AS(distance({1, 1}, {0, 0}, 0), Error);
}

TEST_CASE("centroid of a single member is that member, unit-normalized") {
  const Vec mu = centroid({{3, 4}}, 0, {3, 4});
  CHECK(mu[0] == doctest::Approx(0.6).epsilon(1e-9));
  CHECK(mu[1] == doctest::Approx(0.8).epsilon(1e-9));
}

TEST_CASE("centroid of identical members is the shared direction") {
  const Vec mu = centroid({{2, 0, 0}, {2, 0, 0}}, 1, {1, 0, 0});
  CHECK(mu[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(mu[1]) < 1e-9);
}

TEST_CASE("centroid of two orthogonal members bisects them") {
  const Vec mu = centroid({{1, 0}, {0, 1}}, 0, {std::sqrt(0.5), std::sqrt(0.5)});
  CHECK(mu[0] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
  CHECK(mu[1] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
}

TEST_CASE("centroid beats a dense unit-circle grid on the shape objective") {
  SplitMix64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Vec> members;
    const std::size_t count = 2 + rng.bounded(6);
    for (std::size_t i = 0; i < count; ++i) members.push_back(random_vec(rng, 2));
    bool degenerate = false;
    for (const auto& m : members) degenerate = degenerate || norm(m) < 1e-6;
    if (degenerate) continue;
    const Vec current{std::sqrt(0.5), std::sqrt(0.5)};
    const Vec mu = centroid(members, 0, current);
    const double impl = testutil::centroid_objective(members, mu);
    const double grid = testutil::grid_best_objective(members, 2000);
    CHECK(impl <= grid + 1e-9);
  }
}

TEST_CASE("clustering recovers two well-separated shape families") {
  SplitMix64 rng(21);
  std::vector<Vec> vectors;
  std::vector<int> labels;
  for (int i = 0; i < 40; ++i) {
    const int family = i % 2;
    const double scale = std::exp(rng.uniform(0.0, 4.0));
    Vec v(24);
    for (std::size_t w = 0; w < v.size(); ++w) {
      const double t = static_cast<double>(w + 1) / 24.0;
      const double shape = family == 0 ? 1.0 + 0.2 * t : 1.0 + 6.0 * t * t;
      v[w] = shape * scale * (1.0 + rng.uniform(-0.05, 0.05));
    }
    vectors.push_back(std::move(v));
    labels.push_back(family);
  }
  Params params;
  params.k = 2;
  params.seed = 5;
  params.q_max = 4;
  params.restarts = 3;
  const ClusterModel model = cluster(vectors, {}, params);
  CHECK(testutil::cluster_purity(model.assignment, labels, 2, 2) == 1.0);
}

TEST_CASE("k equal to one puts everything into a single cluster") {
  SplitMix64 rng(31);
  std::vector<Vec> vectors;
  for (int i = 0; i < 10; ++i) vectors.push_back(random_vec(rng, 8, 0.1, 1.0));
  Params params;
  params.k = 1;
  params.seed = 9;
  params.q_max = 2;
  const ClusterModel model = cluster(vectors, {}, params);
  for (const int a : model.assignment) CHECK(a == 0);
  CHECK(model.centroids.size() == 1);
  CHECK(norm(model.centroids[0]) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("clustering is deterministic in the seed and parallelism-independent") {
  const auto data = testutil::make_trend_families(20, 16, 77, 0.08, 3);
  std::vector<Vec> vectors;
  for (const auto& w : data.windows) vectors.push_back(w.gained);
  Params params;
  params.k = 3;
  params.seed = 123;
  params.q_max = 4;
  params.restarts = 2;
  const ClusterModel a = cluster(vectors, {}, params);
  const ClusterModel b = cluster(vectors, {}, params);
  params.jobs = 2;
  const ClusterModel c = cluster(vectors, {}, params);
  CHECK(a.assignment == b.assignment);
  CHECK(a.objective == b.objective);
  CHECK(a.centroids == b.centroids);
  CHECK(a.assignment == c.assignment);
  CHECK(a.objective == c.objective);
  CHECK(a.centroids == c.centroids);

  params.jobs = 1;
  params.seed = 124;
  const ClusterModel d = cluster(vectors, {}, params);
  // A different seed is allowed to land elsewhere; sizes still cover the data
  // and every centroid stays unit-norm.
  std::size_t total = 0;
  for (const std::size_t s : d.cluster_sizes()) total += s;
  CHECK(total == vectors.size());
  for (const Vec& c : d.centroids)
    CHECK(norm(c) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("objective trace is monotone non-increasing") {
  const auto data = testutil::make_trend_families(30, 20, 99, 0.10, 4);
  std::vector<Vec> vectors;
  for (const auto& w : data.windows) vectors.push_back(w.gained);
  Params params;
  params.k = 4;
  params.seed = 2;
  params.q_max = 5;
  const ClusterModel model = cluster(vectors, {}, params);
  REQUIRE(!model.objective_trace.empty());
  for (std::size_t i = 1; i < model.objective_trace.size(); ++i)
    CHECK(model.objective_trace[i] <= model.objective_trace[i - 1] + 1e-12);
  CHECK(model.objective == doctest::Approx(model.objective_trace.back()));
}

TEST_CASE("clustering refuses fewer distinct vectors than clusters") {
  std::vector<Vec> vectors{{1, 2}, {1, 2}, {1, 2}};
  Params params;
  params.k = 2;
  CHECK_THROWS_AS(cluster(vectors, {}, params), Error);
}

TEST_CASE("clustering refuses zero vectors") {
  std::vector<Vec> vectors{{1, 2}, {0, 0}};
  Params params;
  params.k = 1;
  CHECK_THROWS_AS(cluster(vectors, {}, params), Error);
}

TEST_CASE("beta_cv matches a hand-evaluated six-point instance") {
  // Two groups of directions at 0/10/20 and 80/90/100 degrees; with q_max 0
  // the averaged two-way distance is |sin| of the angle between vectors.
  const auto at = [](double deg) {
    const double rad = deg * M_PI / 180.0;
    return Vec{std::cos(rad), std::sin(rad)};
  };
  const std::vector<Vec> vectors{at(0),  at(10), at(20),
                                 at(80), at(90), at(100)};
  ClusterModel model;
  model.k = 2;
  model.assignment = {0, 0, 0, 1, 1, 1};
  model.centroids = {at(10), at(90)};
  model.repos = {"a", "b", "c", "d", "e", "f"};

  const auto s = [](double deg) { return std::sin(deg * M_PI / 180.0); };
  // Intra pairs: 10, 20, 10 degrees in each group.
  const std::vector<double> intra{s(10), s(20), s(10), s(10), s(20), s(10)};
  // Inter pairs: 80, 90, 100(=80), 70, 80, 90, 60, 70, 80 degrees.
  const std::vector<double> inter{s(80), s(90), s(80), s(70), s(80),
                                  s(90), s(60), s(70), s(80)};
  const auto cv = [](const std::vector<double>& v) {
    double mean = 0.0;
    for (const double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (const double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1)) / mean;
  };
  const double expected = cv(intra) / cv(inter);

  const BetaCvCurve curve = beta_cv(vectors, {&model}, 0);
  REQUIRE(curve.entries.size() == 1);
  CHECK(curve.entries[0].first == 2);
  CHECK(curve.entries[0].second == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("beta_cv on exactly duplicated clusters has an undefined intra CV") {
  // Perfectly tight clusters make every intracluster distance exactly zero;
  // a coefficient of variation over a zero-mean multiset is undefined.
  const std::vector<Vec> vectors{{5, 1, 0}, {5, 1, 0}, {5, 1, 0},
                                 {0, 1, 5}, {0, 1, 5}, {0, 1, 5}};
  ClusterModel model;
  model.k = 2;
  model.assignment = {0, 0, 0, 1, 1, 1};
  CHECK_THROWS_AS(beta_cv(vectors, {&model}, 0), Error);
}

TEST_CASE("select_k returns the smallest k on a constant curve") {
  BetaCvCurve curve;
  for (int k = 2; k <= 8; ++k) curve.entries.emplace_back(k, 1.5);
  const auto sel = select_k(curve, 0.10, 3);
  CHECK(sel.k == 2);
  CHECK(sel.stable);
}

TEST_CASE("select_k finds the stabilization point") {
  BetaCvCurve curve;
  const double values[] = {3.0, 2.1, 1.4, 0.52, 0.50, 0.53, 0.51, 0.52, 0.54};
  int k = 2;
  for (const double v : values) curve.entries.emplace_back(k++, v);
  const auto sel = select_k(curve, 0.10, 3);
  CHECK(sel.k == 5); // the first 0.52: all of 0.50/0.53/0.51 within 10%
  CHECK(sel.stable);
}

TEST_CASE("select_k flags an oscillating curve and falls back") {
  BetaCvCurve curve;
  for (int k = 2; k <= 9; ++k)
    curve.entries.emplace_back(k, k % 2 == 0 ? 1.0 : 3.0);
  const auto sel = select_k(curve, 0.10, 3);
  CHECK_FALSE(sel.stable);
  CHECK(sel.k >= 2);
}

TEST_CASE("select_k validates the curve") {
  BetaCvCurve curve;
  curve.entries = {{2, 1.0}, {3, 1.0}};
  CHECK_THROWS_AS(select_k(curve, 0.1, 3), Error);
  curve.entries = {{2, 1.0}, {4, 1.0}, {5, 1.0}, {6, 1.0}};
  CHECK_THROWS_AS(select_k(curve, 0.1, 3), Error);
}

TEST_CASE("cluster model round-trips through its JSON document") {
  const auto data = testutil::make_trend_families(10, 12, 55, 0.1, 2);
  std::vector<Vec> vectors;
  std::vector<std::string> names;
  for (const auto& w : data.windows) {
    vectors.push_back(w.gained);
    names.push_back(w.repo);
  }
  Params params;
  params.k = 2;
  params.seed = 4;
  params.q_max = 3;
  const ClusterModel model = cluster(vectors, names, params);
  const std::string path =
      (std::filesystem::temp_directory_path() / "sg_ksc_rt.json").string();
  save_model(model, path);
  const ClusterModel loaded = load_model(path);
  CHECK(loaded.k == model.k);
  CHECK(loaded.seed == model.seed);
  CHECK(loaded.q_max == model.q_max);
  CHECK(loaded.iterations == model.iterations);
  CHECK(loaded.objective == model.objective);
  CHECK(loaded.objective_trace == model.objective_trace);
  CHECK(loaded.centroids == model.centroids);
  CHECK(loaded.repos == model.repos);
  CHECK(loaded.assignment == model.assignment);
  std::filesystem::remove(path);
}
