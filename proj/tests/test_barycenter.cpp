#include "doctest.h"

#include <algorithm>
#include <array>
#include <random>

#include "nakm/barycenter.hpp"
#include "nakm/rho.hpp"
#include "nakm/scenarios.hpp"
#include "nakm/transport.hpp"
#include "oracles.hpp"

using namespace nakm;

namespace {

BarycenterConfig config(std::size_t m, std::vector<double> w = {}) {
  BarycenterConfig cfg;
  cfg.support_size = m;
  cfg.max_iters = 500;
  cfg.tol = 1e-12;
  cfg.weights = std::move(w);
  return cfg;
}

void check_descent(const BarycenterResult& r) {
  for (std::size_t t = 1; t < r.objective_trace.size(); ++t)
    CHECK(r.objective_trace[t] <= r.objective_trace[t - 1] + 1e-10);
}

// Random dataset of observed measures whose masks jointly cover every coordinate.
std::vector<ObservedMeasure> random_observed(std::mt19937_64& rng, std::size_t n, std::size_t d) {
  std::vector<ObservedMeasure> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> obs;
    for (std::size_t c = 0; c < d; ++c)
      if (i == 0 || rng() % 3 != 0) obs.push_back(c);
    if (obs.empty()) obs.push_back(rng() % d);
    const std::size_t atoms = 1 + rng() % 5;
    out.emplace_back(oracle::random_weighted(rng, atoms, obs.size()), CoordMask(obs, d));
  }
  return out;
}

}  // namespace

TEST_CASE("free-support barycenter of one measure is the measure") {
  const auto m = DiscreteMeasure::uniform({{0, 1}, {2, 2}, {5, -1}});
  const std::vector<DiscreteMeasure> in{m};
  const auto r = free_support_barycenter(in, config(3), m);
  CHECK(same_measure(r.barycenter, m, 1e-12));
  CHECK(r.objective_trace.back() <= 1e-12);
}

TEST_CASE("free-support barycenter of two Diracs is the midpoint") {
  const std::vector<DiscreteMeasure> in{DiscreteMeasure::dirac({0, 4}), DiscreteMeasure::dirac({2, -2})};
  const auto r = free_support_barycenter(in, config(1, {0.5, 0.5}), DiscreteMeasure::dirac({7, 7}));
  CHECK(r.barycenter.point(0)[0] == doctest::Approx(1.0));
  CHECK(r.barycenter.point(0)[1] == doctest::Approx(1.0));
}

TEST_CASE("free-support barycenter on the line averages quantiles") {
  const std::vector<DiscreteMeasure> in{DiscreteMeasure::uniform({{0}, {2}}),
                                        DiscreteMeasure::uniform({{4}, {6}})};
  const auto cfg = config(2, {0.5, 0.5});
  const auto r = free_support_barycenter(in, cfg, DiscreteMeasure::uniform({{-1}, {9}}));
  CHECK(same_measure(r.barycenter, DiscreteMeasure::uniform({{2}, {4}}), 1e-9));

  // Grid search over 2-atom candidates confirms the objective is minimal.
  double best = std::numeric_limits<double>::infinity();
  for (double a = -1; a <= 7; a += 0.25)
    for (double b = a; b <= 7; b += 0.25)
      best = std::min(best, 0.5 * oracle::line_w2sq(DiscreteMeasure::uniform({{a}, {b}}), in[0]) +
                                0.5 * oracle::line_w2sq(DiscreteMeasure::uniform({{a}, {b}}), in[1]));
  CHECK(r.objective_trace.back() <= best + 1e-9);
  CHECK(r.objective_trace.back() == doctest::Approx(barycenter_objective(in, cfg, r.barycenter)));
}

TEST_CASE("free-support objective never increases") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 20; ++t) {
    const std::size_t d = 1 + rng() % 3;
    std::vector<DiscreteMeasure> in;
    for (int i = 0; i < 4; ++i) in.push_back(oracle::random_weighted(rng, 2 + rng() % 5, d));
    const auto r = free_support_barycenter(in, config(4), resample_uniform(in[0], 4));
    check_descent(r);
  }
}

TEST_CASE("generalized barycenter with full masks agrees with the free-support one") {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 20; ++t) {
    const std::size_t d = 1 + rng() % 3;
    std::vector<DiscreteMeasure> in;
    std::vector<ObservedMeasure> obs;
    for (int i = 0; i < 3; ++i) {
      in.push_back(oracle::random_weighted(rng, 2 + rng() % 4, d));
      obs.emplace_back(in.back(), CoordMask::full(d));
    }
    const auto cfg = config(3);
    const auto init = resample_uniform(in[1], 3);
    const auto a = free_support_barycenter(in, cfg, init);
    const auto b = generalized_barycenter(obs, cfg, init, 0.0);
    CHECK(std::abs(a.objective_trace.back() - b.objective_trace.back()) <=
          1e-6 * std::max(1.0, a.objective_trace.back()));
  }
}

TEST_CASE("generalized barycenter of a single full measure is itself") {
  const auto m = DiscreteMeasure::uniform({{1, 1}, {3, 0}});
  const std::vector<ObservedMeasure> obs{ObservedMeasure(m, CoordMask::full(2))};
  const auto r = generalized_barycenter(obs, config(2), m, 0.0);
  CHECK(same_measure(r.barycenter, m, 1e-12));
}

TEST_CASE("generalized barycenter of the mixed toy cluster") {
  const auto toy = toy_measures();
  const std::vector<ObservedMeasure> cluster{toy[4], toy[5]};
  const auto init = default_barycenter_init(cluster, 3);
  const auto r = generalized_barycenter(cluster, config(3), init, 0.0);
  check_descent(r);

  // The red measure's atoms sorted by x match the x-only atoms sorted by x
  // (the pairing is monotone), so the barycenter is explicit.
  const std::vector<std::array<double, 2>> red{{20.0, 10.0}, {21.0, 11.0}, {22.0, 9.5}};
  const std::vector<double> xs{20.6, 21.3, 22.5};
  std::vector<std::array<double, 2>> got;
  for (std::size_t a = 0; a < 3; ++a) got.push_back({r.barycenter.point(a)[0], r.barycenter.point(a)[1]});
  std::sort(got.begin(), got.end());
  for (std::size_t a = 0; a < 3; ++a) {
    CHECK(std::abs(got[a][1] - red[a][1]) <= 1e-12);
    CHECK(std::abs(got[a][0] - 0.5 * (red[a][0] + xs[a])) <= 1e-6);
  }
}

TEST_CASE("damped objective is monotone on random instances") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 20; ++t) {
    const std::size_t d = 2 + rng() % 2;
    const auto obs = random_observed(rng, 4, d);
    const auto prev = default_barycenter_init(obs, 3);
    const double damping = (t % 4) * 0.2;
    const auto r = generalized_barycenter(obs, config(3), prev, damping, UnobservedPolicy::KeepPrevious);
    check_descent(r);
    CHECK(r.objective_trace.back() ==
          doctest::Approx(generalized_objective(obs, config(3), r.barycenter, prev, damping)).epsilon(1e-9));
  }
}

TEST_CASE("unobserved coordinates") {
  const std::vector<ObservedMeasure> obs{
      ObservedMeasure(DiscreteMeasure::uniform({{1.0}, {2.0}}), CoordMask({0}, 2))};
  const auto prev = DiscreteMeasure::uniform({{0, 7}, {0, 8}});
  CHECK_THROWS_AS(generalized_barycenter(obs, config(2), prev, 0.0), UnconstrainedCoordinate);
  const auto kept = generalized_barycenter(obs, config(2), prev, 0.0, UnobservedPolicy::KeepPrevious);
  std::vector<double> ys{kept.barycenter.point(0)[1], kept.barycenter.point(1)[1]};
  std::sort(ys.begin(), ys.end());
  CHECK(ys == std::vector<double>{7, 8});
  // With damping the previous barycenter pins the coordinate and no error is raised.
  CHECK_NOTHROW(generalized_barycenter(obs, config(2), prev, 0.3));
  CHECK_THROWS_AS(generalized_barycenter(obs, config(2), prev, 1.0), ConfigError);
}

TEST_CASE("reduce_to_classical on hand examples") {
  const auto m1 = DiscreteMeasure::uniform({{1, 2}, {3, 4}});
  const auto m2 = DiscreteMeasure::uniform({{0, 0}});
  const std::vector<ObservedMeasure> full{ObservedMeasure(m1, CoordMask::full(2)),
                                          ObservedMeasure(m2, CoordMask::full(2))};
  const std::vector<double> w{0.25, 0.75};
  const auto r = reduce_to_classical(full, w);
  CHECK(r.a.isApprox(Matrix::Identity(2, 2)));
  CHECK(r.transformed[0].coords() == m1.coords());

  const std::vector<ObservedMeasure> split{
      ObservedMeasure(DiscreteMeasure::uniform({{3.0}, {5.0}}), CoordMask({0}, 2)),
      ObservedMeasure(DiscreteMeasure::uniform({{1.0}}), CoordMask({1}, 2))};
  const std::vector<double> half{0.5, 0.5};
  const auto s = reduce_to_classical(split, half);
  CHECK(s.a(0, 0) == doctest::Approx(0.5));
  CHECK(s.a(1, 1) == doctest::Approx(0.5));
  CHECK(s.a(0, 1) == 0.0);
  CHECK(s.transformed[0].point(0)[0] == doctest::Approx(std::sqrt(2.0) * 3.0));
  CHECK(s.transformed[0].point(0)[1] == 0.0);
  CHECK(s.transformed[0].point(1)[0] == doctest::Approx(std::sqrt(2.0) * 5.0));

  const auto back = from_classical(s, to_classical(s, DiscreteMeasure::dirac({2, -3})));
  CHECK(back.point(0)[0] == doctest::Approx(2.0));
  CHECK(back.point(0)[1] == doctest::Approx(-3.0));

  const std::vector<ObservedMeasure> lonely{split[0]};
  const std::vector<double> one{1.0};
  CHECK_THROWS_AS(reduce_to_classical(lonely, one), NumericalError);
}

TEST_CASE("classical reduction and generalized barycenter reach the same objective") {
  std::mt19937_64 rng(24);
  for (int t = 0; t < 30; ++t) {
    const std::size_t d = 2 + rng() % 2;
    const auto obs = random_observed(rng, 3 + rng() % 3, d);
    std::vector<double> w(obs.size());
    double total = 0.0;
    for (double& v : w) total += (v = 0.2 + static_cast<double>(rng() % 100) / 100.0);
    for (double& v : w) v /= total;

    const auto red = reduce_to_classical(obs, w);
    const auto init = default_barycenter_init(obs, 3);
    const auto cfg = config(3, w);
    const auto direct = generalized_barycenter(obs, cfg, init, 0.0);
    const auto classical = free_support_barycenter(red.transformed, config(3, red.weights), to_classical(red, init));
    const double via = generalized_objective(obs, cfg, from_classical(red, classical.barycenter), init, 0.0);
    const double ref = direct.objective_trace.back();
    CHECK(std::abs(via - ref) <= 1e-6 * std::max(1.0, std::abs(ref)));
  }
}

TEST_CASE("generalized barycenter is translation equivariant") {
  std::mt19937_64 rng(25);
  const auto obs = random_observed(rng, 4, 2);
  const Point shift{3.5, -1.25};
  std::vector<ObservedMeasure> moved;
  for (const auto& o : obs) {
    std::vector<double> c = o.measure.coords();
    const auto& k = o.mask.observed();
    for (std::size_t a = 0; a < o.measure.size(); ++a)
      for (std::size_t q = 0; q < k.size(); ++q) c[a * k.size() + q] += shift[k[q]];
    moved.emplace_back(DiscreteMeasure(k.size(), std::move(c), o.measure.weights()), o.mask);
  }
  const auto init = default_barycenter_init(obs, 3);
  std::vector<double> ic = init.coords();
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t c = 0; c < 2; ++c) ic[a * 2 + c] += shift[c];
  const auto r0 = generalized_barycenter(obs, config(3), init, 0.0);
  const auto r1 = generalized_barycenter(moved, config(3), DiscreteMeasure(2, ic, init.weights()), 0.0);
  CHECK(r0.objective_trace.back() == doctest::Approx(r1.objective_trace.back()).epsilon(1e-8));
}

TEST_CASE("barycenter argument validation") {
  const std::vector<DiscreteMeasure> none;
  CHECK_THROWS_AS(free_support_barycenter(none, config(1), DiscreteMeasure::dirac({0})), InvalidInput);
  const std::vector<DiscreteMeasure> one{DiscreteMeasure::dirac({0})};
  CHECK_THROWS(free_support_barycenter(one, config(2), DiscreteMeasure::dirac({0})));
  CHECK_THROWS(free_support_barycenter(one, config(1, {-1.0}), DiscreteMeasure::dirac({0})));
}
