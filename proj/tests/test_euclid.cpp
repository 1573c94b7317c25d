#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include "nakm/euclid_kmeans.hpp"
#include "nakm/rho.hpp"
#include "oracles.hpp"

using namespace nakm;

namespace {

constexpr double NA = std::numeric_limits<double>::quiet_NaN();

Matrix rows(std::initializer_list<std::initializer_list<double>> r) {
  Matrix m(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(r.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : r) {
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

// Clustered points with every non-first column missing with probability p.
Matrix random_points(std::mt19937_64& rng, std::size_t n, std::size_t d, double p) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u;
  Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < n; ++i) {
    const double shift = 4.0 * static_cast<double>(rng() % 3);
    for (std::size_t c = 0; c < d; ++c) {
      x(i, c) = shift + g(rng);
      if (c > 0 && u(rng) < p) x(i, c) = NA;
    }
  }
  return x;
}

}  // namespace

TEST_CASE("na_centroid on hand examples") {
  const NADataset data(rows({{1, NA}, {3, 4}, {NA, 5}}));
  const std::vector<double> fallback{9, 9};
  std::vector<std::size_t> both{0, 1};
  CHECK(na_centroid(data, both, fallback) == Point{2, 4});
  std::vector<std::size_t> third{2};
  CHECK(na_centroid(data, third, fallback) == Point{9, 5});

  const NADataset full(rows({{1, 2}, {3, 6}, {5, 1}}));
  std::vector<std::size_t> all{0, 1, 2};
  CHECK(na_centroid(full, all, fallback) == Point{3, 3});
}

TEST_CASE("na_centroid equals coordinate-wise means on random clusters") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng() % 15, d = 1 + rng() % 5;
    Matrix x = random_points(rng, n, d, 0.4);
    const NADataset data(x);
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i)
      if (rng() % 2 == 0) members.push_back(i);
    const std::vector<double> fallback(d, -7.0);
    const auto c = na_centroid(data, members, fallback);
    for (std::size_t col = 0; col < d; ++col) {
      double s = 0.0;
      int cnt = 0;
      for (auto i : members)
        if (!std::isnan(x(i, col))) {
          s += x(i, col);
          ++cnt;
        }
      const double expect = cnt ? s / cnt : -7.0;
      CHECK(std::abs(c[col] - expect) <= 1e-12);
    }
  }
}

TEST_CASE("na_assign uses observed coordinates and keeps ties") {
  const Matrix c = rows({{0, 100}, {5, 0}});
  const std::vector<double> x{0, NA};
  CHECK(na_assign(x, CoordMask({0}, 2), c) == 0);
  const std::vector<double> y{4, 1};
  CHECK(na_assign(y, CoordMask::full(2), c) == 1);

  const Matrix tie = rows({{-1, 0}, {1, 0}, {3, 0}});
  const std::vector<double> mid{0, 0};
  CHECK(na_assign(mid, CoordMask::full(2), tie) == 0);
  CHECK(na_assign(mid, CoordMask::full(2), tie, 1) == 1);
  CHECK(na_assign(mid, CoordMask::full(2), tie, 2) == 0);
}

TEST_CASE("dataset validation") {
  CHECK_THROWS_AS(NADataset(rows({{1, 2}, {NA, NA}})), InvalidInput);
  CHECK_THROWS_AS(NADataset(rows({{1, std::numeric_limits<double>::infinity()}})), InvalidInput);
  CHECK_THROWS_AS(NADataset(rows({{1, 2}}), {1.0, 2.0}), InvalidInput);
  const NADataset w(rows({{1, 2}, {3, 4}}), {1.0, 3.0});
  CHECK(w.importance()[1] == doctest::Approx(0.75));
  CHECK(NADataset(rows({{1, NA}, {NA, 4}})).missing_count() == 2);
}

TEST_CASE("na_kmeans loss strictly decreases until it stops") {
  std::mt19937_64 rng(32);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 5 + rng() % 30, d = 1 + rng() % 4, k = 1 + rng() % 4;
    const NADataset data(random_points(rng, n, d, 0.3));
    const auto r = na_kmeans(data, k, 100, rng());
    REQUIRE(r.loss_trace.size() >= 2);
    const std::size_t last = r.loss_trace.size() - 1;
    for (std::size_t s = 1; s < last; ++s) CHECK(r.loss_trace[s] < r.loss_trace[s - 1]);
    CHECK(r.loss_trace[last] == r.loss_trace[last - 1]);
    CHECK(r.loss_trace.back() == doctest::Approx(na_loss(data, r.centroids, r.assignments)));
    CHECK(r.history.back() == r.assignments);
  }
}

TEST_CASE("na_kmeans on complete data follows textbook Lloyd") {
  std::mt19937_64 rng(33);
  int compared = 0;
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 6 + rng() % 30, d = 1 + rng() % 4, k = 2 + rng() % 3;
    const Matrix x = random_points(rng, n, d, 0.0);
    const Matrix init = initial_centroids(NADataset(x), k, rng());
    const auto r = na_kmeans(NADataset(x), init, 100);
    if (r.reseeded) continue;  // the textbook variant leaves empty clusters in place
    ++compared;
    CHECK(r.history == oracle::lloyd_history(x, init, 100));
    CHECK(lloyd_kmeans(x, init, 100).history == r.history);
  }
  CHECK(compared >= 40);
}

TEST_CASE("k = N puts every row in its own cluster") {
  const NADataset data(rows({{0, 1}, {5, NA}, {NA, -3}, {8, 8}}));
  const auto r = na_kmeans(data, 4, 50, 7);
  CHECK(r.loss_trace.back() == 0.0);
  std::vector<std::size_t> sorted = r.assignments;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<std::size_t>{0, 1, 2, 3});
  CHECK_THROWS_AS(na_kmeans(data, 5, 50, 7), ConfigError);
}

TEST_CASE("soft imputation on hand examples") {
  const NADataset data(rows({{0, NA}, {0, 1}, {2, 3}}));
  Clustering cl;
  cl.assignments = {0, 0, 0};
  cl.centroids = rows({{7, 8}});
  const auto theta = impute_soft_euclid(data, cl);
  REQUIRE(theta[0].size() == 2);
  const double e = std::exp(-4.0);
  CHECK(theta[0].components()[0].point(0)[0] == 0.0);
  CHECK(theta[0].components()[0].point(0)[1] == 1.0);
  CHECK(theta[0].components()[1].point(0)[0] == 0.0);
  CHECK(theta[0].components()[1].point(0)[1] == 3.0);
  CHECK(theta[0].mix_weights()[0] == doctest::Approx(1.0 / (1.0 + e)).epsilon(1e-14));
  CHECK(theta[0].mix_weights()[1] == doctest::Approx(e / (1.0 + e)).epsilon(1e-12));
  CHECK(theta[1].size() == 1);
  CHECK(theta[1].components()[0].point(0)[1] == 1.0);

  // No complete donor: fall back to the centroid.
  const NADataset lonely(rows({{0, NA}, {NA, 2}}));
  Clustering c2;
  c2.assignments = {0, 0};
  c2.centroids = rows({{7, 8}});
  const auto fb = impute_soft_euclid(lonely, c2);
  CHECK(fb[0].components()[0].point(0)[0] == 0.0);
  CHECK(fb[0].components()[0].point(0)[1] == 8.0);
}

TEST_CASE("imputed atoms agree with observed coordinates and weights sum to one") {
  std::mt19937_64 rng(34);
  for (int t = 0; t < 20; ++t) {
    const NADataset data(random_points(rng, 30, 3, 0.3));
    const auto cl = na_kmeans(data, 3, 100, rng());
    const auto theta = impute_soft_euclid(data, cl);
    for (std::size_t i = 0; i < data.rows(); ++i) {
      double s = 0.0;
      for (std::size_t l = 0; l < theta[i].size(); ++l) {
        s += theta[i].mix_weights()[l];
        for (auto c : data.mask(i).observed()) CHECK(theta[i].components()[l].point(0)[c] == data.values()(i, c));
      }
      CHECK(std::abs(s - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("mean of a Dirac mixture") {
  const RandomMeasure two({DiscreteMeasure::dirac({0, 1}), DiscreteMeasure::dirac({0, 3})}, {0.5, 0.5});
  CHECK(impute_mean_point(two) == Point{0, 2});
  const RandomMeasure first({DiscreteMeasure::dirac({0, 1}), DiscreteMeasure::dirac({0, 3})}, {1.0, 0.0});
  CHECK(impute_mean_point(first) == Point{0, 1});
  CHECK(impute_mean_point(RandomMeasure::single(DiscreteMeasure::dirac({4, 5}))) == Point{4, 5});
}

TEST_CASE("pairwise_rho on complete data is the Euclidean distance matrix") {
  std::mt19937_64 rng(35);
  const Matrix x = random_points(rng, 12, 3, 0.0);
  const NADataset data(x);
  const auto cl = na_kmeans(data, 2, 50, 1);
  const auto theta = impute_soft_euclid(data, cl);
  const Matrix r = pairwise_rho(theta);
  const Matrix e = euclidean_distances(x);
  CHECK((r - e).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((r - r.transpose()).cwiseAbs().maxCoeff() == 0.0);
}
