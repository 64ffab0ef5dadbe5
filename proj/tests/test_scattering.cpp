#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "abraham/scattering.hpp"
#include "abraham/soliton.hpp"
#include "oracles.hpp"

using namespace abraham;

namespace {

const ChargeModel& shared_model() {
  static const ChargeModel model(0.3, 1.0, 1.0);
  return model;
}

KGrid test_grid() { return build_kgrid(20, 1e-3, 6.0, 6, 6); }

Trajectory constant_velocity_trajectory(const Vec3& v, double t0, double t1,
                                        std::size_t n) {
  Trajectory traj;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = t0 + (t1 - t0) * double(i) / double(n - 1);
    traj.samples.push_back({t, v * t, v, {0, 0, 0}});
  }
  return traj;
}

}  // namespace

TEST_CASE("source term vanishes for zero acceleration") {
  const KGrid g = test_grid();
  const TrajectorySample s{1.0, {0.5, 0, 0}, {0, 0, 0.3}, {0, 0, 0}};
  const SpectralFieldPair out = source_term(s, shared_model(), g);
  CHECK(field_norm(out, g) == 0.0);
}

TEST_CASE("source term at rest matches the finite-difference oracle") {
  const KGrid g = test_grid();
  const Vec3 a{0.7, 0, 0};
  const TrajectorySample s{0.0, {0, 0, 0}, {0, 0, 0}, a};
  const SpectralFieldPair out = source_term(s, shared_model(), g);
  const double h = 1e-5;
  for (std::size_t n = 0; n < g.n_nodes(); n += 11) {
    const Vec3 k = g.kvec(n);
    const SolitonField sp{a * h, &shared_model()};
    const SolitonField sm{a * (-h), &shared_model()};
    const auto [ep, bp] = soliton_momentum(sp, k);
    const auto [em, bm] = soliton_momentum(sm, k);
    const CVec3 fd_e = (ep - em) * (0.5 / h);
    const CVec3 fd_b = (bp - bm) * (0.5 / h);
    CHECK((out.e_hat[n] - fd_e).norm() < 1e-7 * (fd_e.norm() + 1e-9));
    CHECK((out.b_hat[n] - fd_b).norm() < 1e-7 * (fd_b.norm() + 1e-9));
  }
}

TEST_CASE("translation covariance: shifting q multiplies by a phase") {
  const KGrid g = test_grid();
  const Vec3 dq{0.4, -0.7, 1.1};
  const TrajectorySample s1{0.0, {0.2, 0.1, 0.0}, {0, 0, 0.4}, {0.1, 0.2, 0.0}};
  TrajectorySample s2 = s1;
  s2.q += dq;
  const SpectralFieldPair f1 = source_term(s1, shared_model(), g);
  const SpectralFieldPair f2 = source_term(s2, shared_model(), g);
  for (std::size_t n = 0; n < g.n_nodes(); n += 7) {
    const Complex phase = std::exp(Complex(0.0, -dot(g.kvec(n), dq)));
    CHECK((f2.e_hat[n] - f1.e_hat[n] * phase).norm() < 1e-15);
    CHECK((f2.b_hat[n] - f1.b_hat[n] * phase).norm() < 1e-15);
  }
}

TEST_CASE("soliton trajectory with zero initial deviation scatters nothing") {
  const KGrid g = test_grid();
  const Trajectory traj = constant_velocity_trajectory({0, 0, 0.4}, 0.0, 5.0, 41);
  const SpectralFieldPair zero(g.n_nodes());
  const ScatterResult res =
      scattered_field(traj, zero, shared_model(), g, TimeDirection::Future);
  CHECK(field_norm(res.z_sc, g) == 0.0);
  CHECK(res.tail_bound == 0.0);
}

TEST_CASE("e = 0 with a pulse: z_sc equals the pulse itself") {
  const KGrid g = test_grid();
  const ChargeModel free_model(0.0, 1.0, 1.0);
  const SpectralFieldPair pulse = make_pulse(g, 1.0, 0.25, 0.6, {1, 0, 0}, {0, 0, 1});
  const Trajectory traj = constant_velocity_trajectory({0, 0, 0}, 0.0, 3.0, 31);
  const ScatterResult res =
      scattered_field(traj, pulse, free_model, g, TimeDirection::Future);
  double worst = 0.0;
  for (std::size_t n = 0; n < g.n_nodes(); ++n)
    worst = std::max(worst, (res.z_sc.e_hat[n] - pulse.e_hat[n]).norm());
  CHECK(worst == 0.0);
}

TEST_CASE("scattered_field is affine in the initial deviation with slope 1") {
  const KGrid g = test_grid();
  Trajectory traj;
  for (int i = 0; i <= 40; ++i) {
    const double t = 0.1 * i;
    // manufactured decelerating trajectory
    const double v = 0.3 / (1.0 + t);
    traj.samples.push_back(
        {t, {0, 0, 0.3 * std::log(1.0 + t)}, {0, 0, v}, {0, 0, -0.3 / ((1 + t) * (1 + t))}});
  }
  const SpectralFieldPair d1 = make_pulse(g, 1.0, 0.25, 0.5, {1, 0, 0}, {0, 0, 1});
  const SpectralFieldPair d2 = make_pulse(g, 1.5, 0.3, 0.4, {0, 1, 0}, {1, 0, 0});
  const ScatterResult r1 =
      scattered_field(traj, d1, shared_model(), g, TimeDirection::Future);
  SpectralFieldPair sum = d1;
  axpy(sum, 1.0, d2);
  const ScatterResult r12 =
      scattered_field(traj, sum, shared_model(), g, TimeDirection::Future);
  double worst = 0.0;
  for (std::size_t n = 0; n < g.n_nodes(); ++n)
    worst = std::max(
        worst, (r12.z_sc.e_hat[n] - r1.z_sc.e_hat[n] - d2.e_hat[n]).norm());
  CHECK(worst < 1e-15);
}

TEST_CASE("quadrature refinement: halving the sampling step converges ~ h^4") {
  const KGrid g = test_grid();
  auto traj_with = [&](std::size_t n) {
    Trajectory traj;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = 6.0 * double(i) / double(n - 1);
      const double decay = std::exp(-0.5 * (t - 3.0) * (t - 3.0));
      traj.samples.push_back({t,
                              {0, 0, 0.1 * t},
                              {0, 0, 0.1},
                              {0.2 * decay, 0.0, 0.1 * decay}});
    }
    return traj;
  };
  const SpectralFieldPair zero(g.n_nodes());
  const auto coarse =
      scattered_field(traj_with(25), zero, shared_model(), g, TimeDirection::Future);
  const auto mid =
      scattered_field(traj_with(49), zero, shared_model(), g, TimeDirection::Future);
  const auto fine =
      scattered_field(traj_with(97), zero, shared_model(), g, TimeDirection::Future);
  const double d_cm = field_norm(subtract(coarse.z_sc, mid.z_sc), g);
  const double d_mf = field_norm(subtract(mid.z_sc, fine.z_sc), g);
  CHECK(d_mf < d_cm / 8.0);  // Simpson: ~16x per halving
}

TEST_CASE("wave-operator diagnostic is exactly zero in the free case") {
  const KGrid g = test_grid();
  const ChargeModel free_model(0.0, 1.0, 1.0);
  const SpectralFieldPair pulse = make_pulse(g, 1.0, 0.25, 0.6, {1, 0, 0}, {0, 0, 1});
  std::vector<SpectralFieldPair> snaps;
  std::vector<double> times;
  for (double t : {0.0, 1.0, 2.0, 3.0}) {
    snaps.push_back(free_propagate(pulse, g, t));
    times.push_back(t);
  }
  Trajectory traj = constant_velocity_trajectory({0, 0, 0}, 0.0, 3.0, 31);
  const ScatterResult res =
      scattered_field(traj, pulse, free_model, g, TimeDirection::Future);
  const auto series =
      wave_operator_diagnostic(snaps, times, traj, free_model, g, res.z_sc);
  for (const auto& [T, dev] : series) {
    CHECK(dev < 1e-12);
    (void)T;
  }
}

TEST_CASE("soliton run: diagnostic deviations are all near zero") {
  const KGrid g = test_grid();
  const Vec3 v{0, 0, 0.4};
  Trajectory traj = constant_velocity_trajectory(v, 0.0, 2.0, 21);
  std::vector<SpectralFieldPair> snaps;
  std::vector<double> times;
  for (double t : {0.0, 1.0, 2.0}) {
    snaps.push_back(sample_soliton({v, &shared_model()}, v * t, g));
    times.push_back(t);
  }
  const SpectralFieldPair zero(g.n_nodes());
  const auto series = wave_operator_diagnostic(snaps, times, traj,
                                               shared_model(), g, zero);
  for (const auto& [T, dev] : series) {
    CHECK(dev < 1e-12);
    (void)T;
  }
}

TEST_CASE("trajectory validation") {
  const KGrid g = test_grid();
  Trajectory bad;
  bad.samples.push_back({1.0, {0, 0, 0}, {0, 0, 0}, {0, 0, 0}});
  bad.samples.push_back({0.5, {0, 0, 0}, {0, 0, 0}, {0, 0, 0}});
  const SpectralFieldPair zero(g.n_nodes());
  CHECK_THROWS_AS(
      scattered_field(bad, zero, shared_model(), g, TimeDirection::Future),
      std::invalid_argument);
}
