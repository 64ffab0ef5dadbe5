#include "abraham/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace abraham {

Vec3 velocity_from_momentum(const Vec3& p, double mass) {
  return p / std::sqrt(mass * mass + p.norm2());
}

void apply_gauss_slaving(SpectralFieldPair& fields, const Vec3& q,
                         const KGrid& grid, const ChargeModel& model) {
  const std::size_t nd = grid.n_directions();
  for (std::size_t ir = 0; ir < grid.n_radial(); ++ir) {
    const double kmag = grid.radial_nodes[ir];
    const double coef = model.e() * model.phi_hat(kmag) / kmag;
    for (std::size_t id = 0; id < nd; ++id) {
      const std::size_t n = ir * nd + id;
      const Vec3& kh = grid.directions[id];
      const Complex phase = std::exp(Complex(0.0, -kmag * dot(kh, q)));
      const CVec3 e = fields.e_hat[n];
      const CVec3 e_tr = e - CVec3(kh) * dot(kh, e);
      // E_par = -i khat rho_hat / |k|
      fields.e_hat[n] = e_tr + CVec3(kh) * (Complex(0.0, -1.0) * coef * phase);
    }
  }
}

double gauss_defect(const SpectralFieldPair& fields, const Vec3& q,
                    const KGrid& grid, const ChargeModel& model) {
  double worst = 0.0;
  for (std::size_t n = 0; n < grid.n_nodes(); ++n) {
    const Vec3 k = grid.kvec(n);
    const Complex rho =
        model.e() * model.phi_hat(grid.kmag(n)) * std::exp(Complex(0.0, -dot(k, q)));
    const Complex div = Complex(0.0, 1.0) * dot(k, fields.e_hat[n]);
    worst = std::max(worst, std::abs(div - rho));
  }
  return worst;
}

std::pair<Vec3, Vec3> smeared_fields_at_particle(const SystemState& state,
                                                 const KGrid& grid,
                                                 const ChargeModel& model) {
  CVec3 e_acc, b_acc;
  const std::size_t nd = grid.n_directions();
  for (std::size_t ir = 0; ir < grid.n_radial(); ++ir) {
    const double kmag = grid.radial_nodes[ir];
    const double phik = model.phi_hat(kmag);
    for (std::size_t id = 0; id < nd; ++id) {
      const std::size_t n = ir * nd + id;
      const double w = grid.radial_weights[ir] * grid.angular_weights[id] * phik;
      const Complex phase =
          std::exp(Complex(0.0, kmag * dot(grid.directions[id], state.particle.q)));
      e_acc += state.fields.e_hat[n] * (w * phase);
      b_acc += state.fields.b_hat[n] * (w * phase);
    }
  }
  const double mag = e_acc.real().norm() + b_acc.real().norm();
  const double imag = e_acc.imag().norm() + b_acc.imag().norm();
  if (imag > 1e-9 * (mag + 1e-12))
    throw std::runtime_error(
        "smeared_fields_at_particle: imaginary residue exceeds tolerance "
        "(Hermitian symmetry corrupted)");
  return {e_acc.real(), b_acc.real()};
}

Vec3 acceleration(const SystemState& state, const KGrid& grid,
                  const ChargeModel& model) {
  const auto [e_phi, b_phi] = smeared_fields_at_particle(state, grid, model);
  const Vec3 force = (e_phi + cross(state.particle.v, b_phi)) * model.e();
  // dv = (F - v (v.F)) / (m gamma)
  const Vec3& v = state.particle.v;
  return (force - v * dot(v, force)) / (model.m() * state.particle.gamma());
}

namespace {

struct Derivative {
  SpectralFieldPair f;  // transverse field derivative (E sector only is driven)
  Vec3 dq;
  Vec3 dp;
};

// Stage derivative of the coupled system. `fields` must carry the slaved
// longitudinal part consistent with q. Only -j_tr drives the field sector.
Derivative eval_derivative(const SpectralFieldPair& fields, const Vec3& q,
                           const Vec3& p, const KGrid& grid,
                           const ChargeModel& model) {
  Derivative d;
  d.f = SpectralFieldPair(grid.n_nodes());
  const Vec3 v = velocity_from_momentum(p, model.m());

  const std::size_t nd = grid.n_directions();
  for (std::size_t ir = 0; ir < grid.n_radial(); ++ir) {
    const double kmag = grid.radial_nodes[ir];
    const double coef = model.e() * model.phi_hat(kmag);
    for (std::size_t id = 0; id < nd; ++id) {
      const std::size_t n = ir * nd + id;
      const Vec3& kh = grid.directions[id];
      const Complex phase = std::exp(Complex(0.0, -kmag * dot(kh, q)));
      const Vec3 v_tr = v - kh * dot(kh, v);
      d.f.e_hat[n] = CVec3(v_tr) * (-coef * phase);
      // b_hat derivative has no source; the free part is handled exactly.
    }
  }

  SystemState probe{fields, ParticleState{q, v}, 0.0};
  const auto [e_phi, b_phi] = smeared_fields_at_particle(probe, grid, model);
  d.dq = v;
  d.dp = (e_phi + cross(v, b_phi)) * model.e();
  return d;
}

SpectralFieldPair rotated(const SpectralFieldPair& f, const KGrid& grid,
                          const std::vector<double>& c,
                          const std::vector<double>& s) {
  SpectralFieldPair out = f;
  free_rotate_inplace(out, grid, c, s);
  return out;
}

}  // namespace

SystemState step(const SystemState& state, const KGrid& grid,
                 const ChargeModel& model, double dt) {
  if (dt == 0.0) throw std::invalid_argument("step: dt must be nonzero");
  if (!(state.particle.v.norm2() < 1.0))
    throw std::invalid_argument("step: |v| must be < 1");

  const std::size_t nr = grid.n_radial();
  std::vector<double> ch(nr), sh(nr), cf(nr), sf(nr), chm(nr), shm(nr), cfm(nr), sfm(nr);
  for (std::size_t ir = 0; ir < nr; ++ir) {
    const double kt = grid.radial_nodes[ir] * dt;
    ch[ir] = std::cos(0.5 * kt);
    sh[ir] = std::sin(0.5 * kt);
    cf[ir] = std::cos(kt);
    sf[ir] = std::sin(kt);
    chm[ir] = ch[ir];
    shm[ir] = -sh[ir];
    cfm[ir] = cf[ir];
    sfm[ir] = -sf[ir];
  }

  const double h = dt;
  const Vec3 q0 = state.particle.q;
  const Vec3 p0 = state.particle.momentum(model.m());
  const SpectralFieldPair& u0 = state.fields;  // slaved at q0 already

  // Lawson RK4: w' = U(-tau) N(U(tau) w). Stage fields are built by rotating
  // the w-frame combination forward, re-slaving the longitudinal part at the
  // stage position, and rotating the resulting source back.
  const Derivative g1 = eval_derivative(u0, q0, p0, grid, model);

  SpectralFieldPair y2 = u0;
  axpy(y2, 0.5 * h, g1.f);
  free_rotate_inplace(y2, grid, ch, sh);
  const Vec3 q2 = q0 + g1.dq * (0.5 * h);
  const Vec3 p2 = p0 + g1.dp * (0.5 * h);
  apply_gauss_slaving(y2, q2, grid, model);
  Derivative g2 = eval_derivative(y2, q2, p2, grid, model);
  g2.f = rotated(g2.f, grid, chm, shm);

  SpectralFieldPair y3 = u0;
  axpy(y3, 0.5 * h, g2.f);
  free_rotate_inplace(y3, grid, ch, sh);
  const Vec3 q3 = q0 + g2.dq * (0.5 * h);
  const Vec3 p3 = p0 + g2.dp * (0.5 * h);
  apply_gauss_slaving(y3, q3, grid, model);
  Derivative g3 = eval_derivative(y3, q3, p3, grid, model);
  g3.f = rotated(g3.f, grid, chm, shm);

  SpectralFieldPair y4 = u0;
  axpy(y4, h, g3.f);
  free_rotate_inplace(y4, grid, cf, sf);
  const Vec3 q4 = q0 + g3.dq * h;
  const Vec3 p4 = p0 + g3.dp * h;
  apply_gauss_slaving(y4, q4, grid, model);
  Derivative g4 = eval_derivative(y4, q4, p4, grid, model);
  g4.f = rotated(g4.f, grid, cfm, sfm);

  SystemState out;
  out.t = state.t + dt;
  SpectralFieldPair w1 = u0;
  axpy(w1, h / 6.0, g1.f);
  axpy(w1, h / 3.0, g2.f);
  axpy(w1, h / 3.0, g3.f);
  axpy(w1, h / 6.0, g4.f);
  free_rotate_inplace(w1, grid, cf, sf);
  out.fields = std::move(w1);

  const Vec3 p1 = p0 + (g1.dp + g2.dp * 2.0 + g3.dp * 2.0 + g4.dp) * (h / 6.0);
  const Vec3 q1 = q0 + (g1.dq + g2.dq * 2.0 + g3.dq * 2.0 + g4.dq) * (h / 6.0);
  out.particle.q = q1;
  out.particle.v = velocity_from_momentum(p1, model.m());
  if (!std::isfinite(out.particle.v.norm2()) || !(out.particle.v.norm2() < 1.0))
    throw std::runtime_error("step: velocity left the unit ball (dt or e too large)");
  apply_gauss_slaving(out.fields, q1, grid, model);
  return out;
}

double total_energy(const SystemState& state, const KGrid& grid,
                    const ChargeModel& model) {
  return model.m() * state.particle.gamma() +
         functionals(state.fields, grid).energy;
}

Vec3 total_momentum(const SystemState& state, const KGrid& grid,
                    const ChargeModel& model) {
  return state.particle.momentum(model.m()) +
         functionals(state.fields, grid).momentum;
}

AccelTailFit Trajectory::fit_tail(const std::vector<TrajectorySample>& samples) {
  AccelTailFit fit;
  if (samples.size() < 8) return fit;
  const std::size_t begin = samples.size() - samples.size() / 4;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t count = 0;
  for (std::size_t i = begin; i < samples.size(); ++i) {
    const double a = samples[i].a.norm();
    if (a <= 1e-300) continue;
    const double x = std::log(1.0 + std::abs(samples[i].t));
    const double y = std::log(a);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 4) return fit;
  const double n = static_cast<double>(count);
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-30) return fit;
  const double slope = (n * sxy - sx * sy) / denom;
  const double inter = (sy - slope * sx) / n;
  fit.p = -slope;
  fit.c = std::exp(inter);
  fit.valid = true;
  return fit;
}

SimulateResult simulate(const SystemState& initial, const KGrid& grid,
                        const ChargeModel& model, double t_final, double dt,
                        std::size_t sample_every, std::size_t trajectory_every,
                        double energy_drift_abort) {
  if (dt == 0.0 || std::abs(t_final) < std::abs(dt))
    throw std::invalid_argument("simulate: need |t_final| >= |dt| > 0");
  if (t_final * dt <= 0.0)
    throw std::invalid_argument("simulate: signs of t_final and dt must agree");
  if (trajectory_every == 0 || sample_every == 0)
    throw std::invalid_argument("simulate: cadences must be positive");

  const std::size_t n_steps =
      static_cast<std::size_t>(std::llround(t_final / dt));
  SimulateResult res;
  SystemState cur = initial;
  cur.t = initial.t;

  const double e0 = total_energy(cur, grid, model);
  double max_drift = 0.0;

  auto record = [&](const SystemState& st) {
    TrajectorySample smp;
    smp.t = st.t;
    smp.q = st.particle.q;
    smp.v = st.particle.v;
    smp.a = acceleration(st, grid, model);
    res.trajectory.samples.push_back(smp);
  };
  auto snapshot = [&](const SystemState& st) {
    res.snapshot_times.push_back(st.t);
    res.snapshots.push_back(st.fields);
  };

  record(cur);
  snapshot(cur);
  for (std::size_t i = 1; i <= n_steps; ++i) {
    cur = step(cur, grid, model, dt);
    if (i % trajectory_every == 0 || i == n_steps) record(cur);
    if (i % sample_every == 0 || i == n_steps) snapshot(cur);
    if (i % 64 == 0 || i == n_steps) {
      const double drift = std::abs(total_energy(cur, grid, model) - e0) /
                           (std::abs(e0) + 1e-300);
      max_drift = std::max(max_drift, drift);
      if (drift > energy_drift_abort)
        throw std::runtime_error("simulate: energy drift exceeded bound (integrator failure)");
    }
  }

  res.energy_drift = max_drift;
  res.final_state = cur;
  // Backward runs recorded in execution order have decreasing t; flip them.
  if (dt < 0.0) {
    std::reverse(res.trajectory.samples.begin(), res.trajectory.samples.end());
    std::reverse(res.snapshot_times.begin(), res.snapshot_times.end());
    std::reverse(res.snapshots.begin(), res.snapshots.end());
  }
  res.trajectory.tail_fit = Trajectory::fit_tail(
      dt > 0.0 ? res.trajectory.samples
               : std::vector<TrajectorySample>(res.trajectory.samples.rbegin(),
                                               res.trajectory.samples.rend()));
  res.v_final = cur.particle.v;
  const AccelTailFit& fit = res.trajectory.tail_fit;
  if (fit.valid && fit.p > 1.0)
    res.v_final_error_bound =
        fit.c * std::pow(1.0 + std::abs(t_final), 1.0 - fit.p) / (fit.p - 1.0);
  return res;
}

SpectralFieldPair make_pulse(const KGrid& grid, double k0, double width,
                             double amplitude, const Vec3& polarization,
                             const Vec3& direction) {
  if (!(width > 0.0)) throw std::invalid_argument("make_pulse: width must be positive");
  if (!(k0 > 3.0 * width))
    throw std::invalid_argument("make_pulse: need k0 > 3 width (IR-regular envelope)");
  const Vec3 d = normalized(direction);
  if (cross(polarization, d).norm() < 1e-12 * polarization.norm())
    throw std::invalid_argument("make_pulse: polarization parallel to direction");
  const Vec3 eps = normalized(polarization);

  // One-sided angular bump around +d keeps the packet directional; the
  // (k/k0)^2 factor makes |k| E -> 0 at the origin faster than |k|.
  constexpr double kAngularScale = 0.35;
  auto h_val = [&](double kmag, const Vec3& kh) -> Vec3 {
    const double env = amplitude * (kmag / k0) * (kmag / k0) *
                       std::exp(-0.5 * (kmag - k0) * (kmag - k0) / (width * width)) *
                       std::exp((dot(kh, d) - 1.0) / kAngularScale);
    return transverse(kh, eps) * env;
  };

  SpectralFieldPair out(grid.n_nodes());
  const std::size_t nd = grid.n_directions();
  for (std::size_t ir = 0; ir < grid.n_radial(); ++ir) {
    const double kmag = grid.radial_nodes[ir];
    for (std::size_t id = 0; id < nd; ++id) {
      const std::size_t n = ir * nd + id;
      const Vec3& kh = grid.directions[id];
      const Vec3 hp = h_val(kmag, kh);
      const Vec3 hm = h_val(kmag, -kh);  // h(-k); real, so conjugation is free
      out.e_hat[n] = CVec3((hp + hm) * 0.5);
      out.b_hat[n] = CVec3(cross(kh, (hp - hm) * 0.5));
    }
  }
  return out;
}

}  // namespace abraham
