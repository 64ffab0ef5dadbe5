#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "abraham/kgrid.hpp"
#include "oracles.hpp"

using namespace abraham;

TEST_CASE("gauss-legendre nodes integrate polynomials exactly") {
  std::vector<double> x, w;
  gauss_legendre(8, x, w);
  CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(2.0).epsilon(1e-14));
  // degree-15 monomial is the highest exact one for n = 8
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += w[i] * std::pow(x[i], 14);
  CHECK(acc == doctest::Approx(2.0 / 15.0).epsilon(1e-13));
  for (std::size_t i = 0; i + 1 < x.size(); ++i) CHECK(x[i] < x[i + 1]);
}

TEST_CASE("minimal grid: 4 directions, angular weights sum to 4 pi") {
  const KGrid g = build_kgrid(4, 0.1, 1.0, 2, 2);
  CHECK(g.n_directions() == 4);
  double s = 0.0;
  for (double w : g.angular_weights) s += w;
  CHECK(s == doctest::Approx(4.0 * M_PI).epsilon(1e-12));
}

TEST_CASE("antipode index is a fixed-point-free involution; directions negate") {
  const KGrid g = build_kgrid(8, 1e-3, 8.0, 8, 8);
  for (std::size_t d = 0; d < g.n_directions(); ++d) {
    const std::size_t a = g.antipode_index[d];
    CHECK(a != d);
    CHECK(g.antipode_index[a] == d);
    CHECK((g.directions[d] + g.directions[a]).norm() == 0.0);
    CHECK(g.directions[d].norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(g.angular_weights[d] == doctest::Approx(g.angular_weights[a]).epsilon(1e-14));
  }
}

TEST_CASE("grid invariants: radial nodes increasing, weights positive") {
  const KGrid g = build_kgrid(32, 1e-3, 8.0, 8, 8);
  for (std::size_t i = 0; i < g.n_radial(); ++i) {
    CHECK(g.radial_nodes[i] > 0.0);
    CHECK(g.radial_weights[i] > 0.0);
    if (i > 0) CHECK(g.radial_nodes[i] > g.radial_nodes[i - 1]);
  }
  CHECK(g.radial_nodes.front() == doctest::Approx(1e-3).epsilon(1e-14));
  CHECK(g.radial_nodes.back() == doctest::Approx(8.0).epsilon(1e-14));
}

TEST_CASE("radial quadrature: gaussian moment against adaptive oracle") {
  // oracle: adaptive Simpson of k^2 exp(-k^2) over the truncated range, plus
  // the analytic value sqrt(pi)/4 of the full integral
  const double oracle = oracles::adaptive_simpson(
      [](double k) { return k * k * std::exp(-k * k); }, 0.0, 12.0, 1e-14);
  CHECK(oracle == doctest::Approx(std::sqrt(M_PI) / 4.0).epsilon(1e-12));

  const KGrid g = build_kgrid(32, 1e-3, 10.0, 2, 2);
  double acc = 0.0;
  for (std::size_t i = 0; i < g.n_radial(); ++i)
    acc += g.radial_weights[i] * std::exp(-g.radial_nodes[i] * g.radial_nodes[i]);
  CHECK(acc == doctest::Approx(0.443113).epsilon(1e-6));
  CHECK(std::abs(acc - oracle) / oracle < 1e-6);
}

TEST_CASE("full 3-d quadrature: gaussian integrates to the product value") {
  const KGrid g = build_kgrid(32, 1e-3, 10.0, 8, 8);
  double acc = 0.0;
  for (std::size_t n = 0; n < g.n_nodes(); ++n)
    acc += g.weight(n) * std::exp(-g.kmag(n) * g.kmag(n));
  CHECK(acc == doctest::Approx(4.0 * M_PI * std::sqrt(M_PI) / 4.0).epsilon(1e-6));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(build_kgrid(3, 1e-3, 8.0, 8, 8), std::invalid_argument);
  CHECK_THROWS_AS(build_kgrid(32, 0.0, 8.0, 8, 8), std::invalid_argument);
  CHECK_THROWS_AS(build_kgrid(32, 1e-3, 1e-4, 8, 8), std::invalid_argument);
  CHECK_THROWS_AS(build_kgrid(32, 1e-3, 8.0, 7, 8), std::invalid_argument);
  CHECK_THROWS_AS(build_kgrid(32, 1e-3, 8.0, 8, 3), std::invalid_argument);
}
