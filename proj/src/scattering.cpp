#include "abraham/scattering.hpp"

#include <cmath>
#include <stdexcept>

#include "abraham/soliton.hpp"

namespace abraham {

SpectralFieldPair source_term(const TrajectorySample& sample,
                              const ChargeModel& model, const KGrid& grid) {
  SpectralFieldPair out(grid.n_nodes());
  const SolitonField s{sample.v, &model};
  const std::size_t nd = grid.n_directions();
  for (std::size_t ir = 0; ir < grid.n_radial(); ++ir) {
    const double kmag = grid.radial_nodes[ir];
    for (std::size_t id = 0; id < nd; ++id) {
      const std::size_t n = ir * nd + id;
      const Vec3 k = grid.directions[id] * kmag;
      const auto [ge, gb] = soliton_vgrad(s, k, sample.a);
      const Complex phase = std::exp(Complex(0.0, -dot(k, sample.q)));
      out.e_hat[n] = ge * phase;
      out.b_hat[n] = gb * phase;
    }
  }
  return out;
}

namespace {

// Composite Simpson weights for samples at uniform spacing h (n points).
// Odd interval counts are closed with a 3/8 rule on the final three panels.
std::vector<double> simpson_weights(std::size_t n, double h) {
  if (n < 2) throw std::invalid_argument("simpson_weights: need >= 2 samples");
  std::vector<double> w(n, 0.0);
  if (n == 2) {
    w[0] = w[1] = 0.5 * h;
    return w;
  }
  const std::size_t intervals = n - 1;
  std::size_t simpson_end = n;  // one past the last index of the 1/3 part
  if (intervals % 2 != 0) simpson_end = n - 3;  // close with a 3/8 panel
  for (std::size_t i = 0; i + 2 < simpson_end + 1; i += 2) {
    w[i] += h / 3.0;
    w[i + 1] += 4.0 * h / 3.0;
    w[i + 2] += h / 3.0;
  }
  if (simpson_end != n) {
    const std::size_t j = n - 4;
    w[j] += 3.0 * h / 8.0;
    w[j + 1] += 9.0 * h / 8.0;
    w[j + 2] += 9.0 * h / 8.0;
    w[j + 3] += 3.0 * h / 8.0;
  }
  return w;
}

}  // namespace

ScatterResult scattered_field(const Trajectory& traj,
                              const SpectralFieldPair& initial_deviation,
                              const ChargeModel& model, const KGrid& grid,
                              TimeDirection direction) {
  const auto& smp = traj.samples;
  if (smp.size() < 2)
    throw std::invalid_argument("scattered_field: trajectory too short");
  for (std::size_t i = 0; i + 1 < smp.size(); ++i)
    if (!(smp[i].t < smp[i + 1].t))
      throw std::invalid_argument("scattered_field: sample times must increase");
  const double h = smp[1].t - smp[0].t;

  ScatterResult res;
  res.direction = direction;
  res.z_sc = initial_deviation;

  // integral_0^{+-T} ds U(-s) g(s); for the past branch the oriented integral
  // over [-T, 0] enters with the opposite sign.
  const double orient = (direction == TimeDirection::Future) ? 1.0 : -1.0;
  const std::vector<double> w = simpson_weights(smp.size(), h);

  std::vector<double> c(grid.n_radial()), s(grid.n_radial());
  SpectralFieldPair acc(grid.n_nodes());
  for (std::size_t j = 0; j < smp.size(); ++j) {
    SpectralFieldPair g = source_term(smp[j], model, grid);
    for (std::size_t ir = 0; ir < grid.n_radial(); ++ir) {
      c[ir] = std::cos(grid.radial_nodes[ir] * smp[j].t);
      s[ir] = -std::sin(grid.radial_nodes[ir] * smp[j].t);  // U(-s_j)
    }
    free_rotate_inplace(g, grid, c, s);
    axpy(acc, w[j], g);
  }
  axpy(res.z_sc, -orient, acc);

  // Tail budget: fit |vdot| ~ c (1+|t|)^-p on the recorded tail, convert to
  // source-norm units with the last sample's per-unit-acceleration norm.
  const AccelTailFit fit =
      direction == TimeDirection::Future
          ? Trajectory::fit_tail(smp)
          : Trajectory::fit_tail(std::vector<TrajectorySample>(smp.rbegin(), smp.rend()));
  const double t_end = std::max(std::abs(smp.front().t), std::abs(smp.back().t));
  if (fit.valid && fit.p > 1.0) {
    const TrajectorySample& last =
        direction == TimeDirection::Future ? smp.back() : smp.front();
    double unit_norm = 0.0;
    if (last.a.norm() > 1e-300) {
      TrajectorySample unit = last;
      unit.a = last.a / last.a.norm();
      unit_norm = field_norm(source_term(unit, model, grid), grid);
    }
    res.tail_bound = unit_norm * fit.c *
                     std::pow(1.0 + t_end, 1.0 - fit.p) / (fit.p - 1.0);
  }
  res.tail_warning =
      res.tail_bound > 0.1 * field_norm(res.z_sc, grid);
  return res;
}

std::vector<std::pair<double, double>> wave_operator_diagnostic(
    const std::vector<SpectralFieldPair>& snapshots,
    const std::vector<double>& snapshot_times, const Trajectory& traj,
    const ChargeModel& model, const KGrid& grid,
    const SpectralFieldPair& z_sc) {
  if (snapshots.size() != snapshot_times.size())
    throw std::invalid_argument("wave_operator_diagnostic: snapshot/time size mismatch");
  std::vector<std::pair<double, double>> series;
  series.reserve(snapshots.size());
  const auto& smp = traj.samples;
  for (std::size_t i = 0; i < snapshots.size(); ++i) {
    const double t = snapshot_times[i];
    // locate the trajectory sample at this time
    std::size_t best = 0;
    double best_err = 1e300;
    for (std::size_t j = 0; j < smp.size(); ++j) {
      const double err = std::abs(smp[j].t - t);
      if (err < best_err) {
        best_err = err;
        best = j;
      }
    }
    if (best_err > 1e-9 * (1.0 + std::abs(t)))
      throw std::invalid_argument("wave_operator_diagnostic: no trajectory sample at snapshot time");
    const SolitonField s{smp[best].v, &model};
    SpectralFieldPair dev =
        subtract(snapshots[i], sample_soliton(s, smp[best].q, grid));
    dev = free_propagate(dev, grid, -t);
    series.emplace_back(std::abs(t), field_norm(subtract(dev, z_sc), grid));
  }
  return series;
}

}  // namespace abraham
