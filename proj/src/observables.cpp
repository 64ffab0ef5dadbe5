#include "abraham/observables.hpp"

#include <cmath>
#include <stdexcept>

#include "abraham/soliton.hpp"

namespace abraham {

namespace {

// Neville extrapolation of (x_i, y_i) to x = 0, returning the successive
// diagonal values (order 0, 1, ..., n-1).
std::vector<Complex> neville_to_zero(const std::vector<double>& x,
                                     const std::vector<Complex>& y) {
  const std::size_t n = x.size();
  std::vector<Complex> tab = y;
  std::vector<Complex> diag;
  diag.push_back(tab[0]);
  for (std::size_t m = 1; m < n; ++m) {
    for (std::size_t i = 0; i + m < n; ++i) {
      tab[i] = (tab[i + 1] * (0.0 - x[i]) - tab[i] * (0.0 - x[i + m])) /
               (x[i + m] - x[i]);
    }
    diag.push_back(tab[0]);
  }
  return diag;
}

struct ExtrapolatedComponent {
  Complex value;
  double error;
};

ExtrapolatedComponent extrapolate(const std::vector<double>& k,
                                  const std::vector<Complex>& y) {
  const auto diag = neville_to_zero(k, y);
  ExtrapolatedComponent out;
  out.value = diag.back();
  out.error = diag.size() > 1
                  ? std::abs(diag[diag.size() - 1] - diag[diag.size() - 2])
                  : std::abs(diag[0]);
  return out;
}

}  // namespace

IRTail ir_extract(const SpectralFieldPair& field, const KGrid& grid,
                  const IRExtractOptions& opt) {
  std::size_t n_ir = 0;
  while (n_ir < grid.n_radial() && grid.radial_nodes[n_ir] < opt.k_ir) ++n_ir;
  if (n_ir < 3)
    throw std::invalid_argument(
        "ir_extract: need >= 3 radial nodes below k_ir for extrapolation");
  n_ir = std::min(n_ir, opt.max_order + 1);

  std::vector<double> kx(n_ir);
  for (std::size_t i = 0; i < n_ir; ++i) kx[i] = grid.radial_nodes[i];

  IRTail tail;
  tail.directions = grid.directions;
  const std::size_t nd = grid.n_directions();
  tail.e_tail.resize(nd);
  tail.b_tail.resize(nd);
  tail.error_e.assign(nd, 0.0);
  tail.error_b.assign(nd, 0.0);
  tail.non_converged.assign(nd, false);

  std::vector<Complex> ye(n_ir), yb(n_ir);
  for (std::size_t id = 0; id < nd; ++id) {
    CVec3 ev, bv;
    double ee = 0.0, eb = 0.0;
    Complex* ev_c[3] = {&ev.x, &ev.y, &ev.z};
    Complex* bv_c[3] = {&bv.x, &bv.y, &bv.z};
    for (int comp = 0; comp < 3; ++comp) {
      for (std::size_t i = 0; i < n_ir; ++i) {
        const std::size_t n = grid.node(i, id);
        const double km = grid.radial_nodes[i];
        const CVec3& e = field.e_hat[n];
        const CVec3& b = field.b_hat[n];
        ye[i] = km * (comp == 0 ? e.x : comp == 1 ? e.y : e.z);
        yb[i] = km * (comp == 0 ? b.x : comp == 1 ? b.y : b.z);
      }
      const auto re = extrapolate(kx, ye);
      const auto rb = extrapolate(kx, yb);
      *ev_c[comp] = re.value;
      *bv_c[comp] = rb.value;
      ee = std::max(ee, re.error);
      eb = std::max(eb, rb.error);
    }
    tail.e_tail[id] = ev;
    tail.b_tail[id] = bv;
    tail.error_e[id] = ee;
    tail.error_b[id] = eb;
    tail.non_converged[id] =
        (ee > ev.norm() && ev.norm() > 0.0) || (eb > bv.norm() && bv.norm() > 0.0);
  }
  return tail;
}

IRTail transverse_project(const IRTail& tail) {
  IRTail out = tail;
  for (std::size_t id = 0; id < tail.directions.size(); ++id) {
    const Vec3& kh = tail.directions[id];
    out.e_tail[id] = transverse(kh, tail.e_tail[id]);
    out.b_tail[id] = transverse(kh, tail.b_tail[id]);
  }
  return out;
}

IRConservationReport check_ir_conservation(
    const std::vector<SpectralFieldPair>& snapshots,
    const std::vector<double>& snapshot_times, const Trajectory& traj,
    const ChargeModel& model, const KGrid& grid, const IRExtractOptions& opt) {
  if (snapshots.size() < 2)
    throw std::invalid_argument("check_ir_conservation: need >= 2 snapshots");
  if (snapshots.size() != snapshot_times.size())
    throw std::invalid_argument("check_ir_conservation: snapshot/time size mismatch");

  IRConservationReport rep;
  const std::size_t nd = grid.n_directions();
  std::vector<CVec3> e0(nd), b0(nd);
  double scale_e = 0.0, scale_b = 0.0;

  auto tail_at = [&](std::size_t i, std::vector<CVec3>& et, std::vector<CVec3>& bt) {
    const double t = snapshot_times[i];
    std::size_t best = 0;
    double best_err = 1e300;
    for (std::size_t j = 0; j < traj.samples.size(); ++j) {
      const double err = std::abs(traj.samples[j].t - t);
      if (err < best_err) {
        best_err = err;
        best = j;
      }
    }
    if (best_err > 1e-9 * (1.0 + std::abs(t)))
      throw std::invalid_argument("check_ir_conservation: no trajectory sample at snapshot time");
    const SolitonField s{traj.samples[best].v, &model};
    const SpectralFieldPair dev =
        subtract(snapshots[i], sample_soliton(s, traj.samples[best].q, grid));
    const IRTail dev_tail = ir_extract(dev, grid, opt);
    et.resize(nd);
    bt.resize(nd);
    for (std::size_t id = 0; id < nd; ++id) {
      const auto [se, sb] = ir_limit_soliton(s, grid.directions[id]);
      et[id] = se + dev_tail.e_tail[id];
      bt[id] = sb + dev_tail.b_tail[id];
    }
  };

  tail_at(0, e0, b0);
  for (std::size_t id = 0; id < nd; ++id) {
    scale_e = std::max(scale_e, e0[id].norm());
    scale_b = std::max(scale_b, b0[id].norm());
  }
  const double scale = std::max(scale_e, scale_b) + 1e-300;

  std::vector<CVec3> et, bt;
  for (std::size_t i = 0; i < snapshots.size(); ++i) {
    tail_at(i, et, bt);
    double de = 0.0, db = 0.0, dl = 0.0;
    for (std::size_t id = 0; id < nd; ++id) {
      const Vec3& kh = grid.directions[id];
      de = std::max(de, (transverse(kh, et[id]) - transverse(kh, e0[id])).norm());
      db = std::max(db, (bt[id] - b0[id]).norm());
      dl = std::max(dl, std::abs(dot(kh, et[id]) - dot(kh, e0[id])));
    }
    rep.times.push_back(snapshot_times[i]);
    rep.transverse_drift_e.push_back(de / scale);
    rep.transverse_drift_b.push_back(db / scale);
    rep.longitudinal_drift.push_back(dl / scale);
    rep.max_transverse_drift =
        std::max(rep.max_transverse_drift, std::max(de, db) / scale);
    rep.max_longitudinal_drift = std::max(rep.max_longitudinal_drift, dl / scale);
  }
  return rep;
}

SoftPhotonReport soft_photon_residual(const ScatterResult& sc_plus,
                                      const ScatterResult& sc_minus,
                                      const Vec3& v_plus, const Vec3& v_minus,
                                      const ChargeModel& model,
                                      const KGrid& grid,
                                      const IRExtractOptions& opt) {
  const IRTail tp = ir_extract(sc_plus.z_sc, grid, opt);
  const IRTail tm = ir_extract(sc_minus.z_sc, grid, opt);
  const SolitonField sp{v_plus, &model};
  const SolitonField sm{v_minus, &model};

  SoftPhotonReport rep;
  const std::size_t nd = grid.n_directions();
  rep.directions = grid.directions;
  rep.lhs_e.resize(nd);
  rep.rhs_e.resize(nd);
  rep.lhs_b.resize(nd);
  rep.rhs_b.resize(nd);
  rep.residual_e.resize(nd);
  rep.residual_b.resize(nd);

  rep.tail_plus_e = tp.e_tail;
  rep.tail_plus_b = tp.b_tail;
  rep.tail_minus_e = tm.e_tail;
  rep.tail_minus_b = tm.b_tail;

  double res2_e = 0.0, res2_b = 0.0, rhs2_e = 0.0, rhs2_b = 0.0, extrap2 = 0.0;
  double wsum = 0.0;
  for (std::size_t id = 0; id < nd; ++id) {
    const auto [pe, pb] = ir_limit_soliton(sp, grid.directions[id]);
    const auto [me, mb] = ir_limit_soliton(sm, grid.directions[id]);
    rep.lhs_e[id] = tp.e_tail[id] - tm.e_tail[id];
    rep.lhs_b[id] = tp.b_tail[id] - tm.b_tail[id];
    rep.rhs_e[id] = -(pe - me);
    rep.rhs_b[id] = -(pb - mb);
    rep.residual_e[id] = (rep.lhs_e[id] - rep.rhs_e[id]).norm();
    rep.residual_b[id] = (rep.lhs_b[id] - rep.rhs_b[id]).norm();
    const double w = grid.angular_weights[id];
    wsum += w;
    res2_e += w * rep.residual_e[id] * rep.residual_e[id];
    res2_b += w * rep.residual_b[id] * rep.residual_b[id];
    rhs2_e += w * rep.rhs_e[id].norm2();
    rhs2_b += w * rep.rhs_b[id].norm2();
    const double ee = std::max(tp.error_e[id], tm.error_e[id]);
    const double eb = std::max(tp.error_b[id], tm.error_b[id]);
    extrap2 += w * (ee * ee + eb * eb);
  }
  rep.rhs_norm_e = std::sqrt(rhs2_e / wsum);
  rep.rhs_norm_b = std::sqrt(rhs2_b / wsum);
  rep.residual_norm_e = std::sqrt(res2_e / wsum) / (rep.rhs_norm_e + 1e-300);
  rep.residual_norm_b = std::sqrt(res2_b / wsum) / (rep.rhs_norm_b + 1e-300);
  rep.extrapolation_budget = std::sqrt(extrap2 / wsum);
  rep.tail_budget = sc_plus.tail_bound + sc_minus.tail_bound;
  return rep;
}

SpatialTail spatial_tail(const SpectralFieldPair& field,
                         const ParticleState& particle,
                         const ChargeModel& model, const KGrid& grid,
                         const SpatialTailOptions& opt) {
  if (opt.radii.size() < 2)
    throw std::invalid_argument("spatial_tail: need >= 2 radii");
  for (std::size_t i = 0; i + 1 < opt.radii.size(); ++i)
    if (!(opt.radii[i] < opt.radii[i + 1]))
      throw std::invalid_argument("spatial_tail: radii must increase");
  if (!(opt.radii.front() > 10.0 * model.r_phi()))
    throw std::invalid_argument("spatial_tail: radii must be >> r_phi");

  const SolitonField s{particle.v, &model};
  const SpectralFieldPair dev =
      subtract(field, sample_soliton(s, particle.q, grid));

  constexpr double kTwoPiPow32Inv = 0.06349363593424097;
  // Effective bandwidth of the window: exp(-(k/kc)^8) < 1e-3 beyond
  // kc * ln(1e3)^(1/8).
  const double k_eff = opt.window_k * std::pow(std::log(1e3), 0.125);

  SpatialTail tail;
  tail.directions = opt.directions;
  tail.label = "t";
  const std::size_t ndir = opt.directions.size();
  tail.e_tail.resize(ndir);
  tail.b_tail.resize(ndir);
  tail.error.assign(ndir, 0.0);
  tail.under_resolved.assign(ndir, false);

  std::vector<double> window(grid.n_radial());
  for (std::size_t ir = 0; ir < grid.n_radial(); ++ir) {
    const double r = grid.radial_nodes[ir] / opt.window_k;
    window[ir] = std::exp(-std::pow(r, 8.0));
  }

  for (std::size_t d = 0; d < ndir; ++d) {
    const Vec3 xh = normalized(opt.directions[d]);
    std::vector<double> inv_r(opt.radii.size());
    std::vector<Complex> ye[3], yb[3];
    for (int c = 0; c < 3; ++c) {
      ye[c].resize(opt.radii.size());
      yb[c].resize(opt.radii.size());
    }
    bool flagged = false;
    for (std::size_t m = 0; m < opt.radii.size(); ++m) {
      const double r = opt.radii[m];
      inv_r[m] = 1.0 / r;
      if (k_eff * r > static_cast<double>(grid.n_polar)) flagged = true;
      CVec3 e_acc, b_acc;
      for (std::size_t n = 0; n < grid.n_nodes(); ++n) {
        const std::size_t ir = grid.radial_of(n);
        const double w = grid.weight(n) * window[ir];
        if (w == 0.0) continue;
        const Complex phase =
            std::exp(Complex(0.0, grid.kmag(n) * dot(grid.khat(n), xh) * r));
        e_acc += dev.e_hat[n] * (w * phase);
        b_acc += dev.b_hat[n] * (w * phase);
      }
      const double r2 = r * r * kTwoPiPow32Inv;
      for (int c = 0; c < 3; ++c) {
        ye[c][m] = r2 * (c == 0 ? e_acc.x : c == 1 ? e_acc.y : e_acc.z);
        yb[c][m] = r2 * (c == 0 ? b_acc.x : c == 1 ? b_acc.y : b_acc.z);
      }
    }
    tail.under_resolved[d] = flagged;

    const Vec3 sol_e = soliton_position_tail(s, xh);
    const Vec3 sol_b = cross(particle.v, sol_e);
    Vec3 dev_e, dev_b;
    double err = 0.0;
    double* de_c[3] = {&dev_e.x, &dev_e.y, &dev_e.z};
    double* db_c[3] = {&dev_b.x, &dev_b.y, &dev_b.z};
    for (int c = 0; c < 3; ++c) {
      const auto re = extrapolate(inv_r, ye[c]);
      const auto rb = extrapolate(inv_r, yb[c]);
      *de_c[c] = re.value.real();
      *db_c[c] = rb.value.real();
      err = std::max(err, std::max(re.error, rb.error));
      // imaginary parts cancel for Hermitian data; fold residue into the error
      err = std::max(err, std::abs(re.value.imag()));
      err = std::max(err, std::abs(rb.value.imag()));
    }
    tail.e_tail[d] = sol_e + dev_e;
    tail.b_tail[d] = sol_b + dev_b;
    tail.error[d] = err;
  }
  return tail;
}

double flux_from_tail(const SpatialTail& tail) {
  double acc = 0.0;
  for (std::size_t d = 0; d < tail.directions.size(); ++d)
    acc += dot(normalized(tail.directions[d]), tail.e_tail[d]);
  return 4.0 * M_PI * acc / static_cast<double>(tail.directions.size());
}

}  // namespace abraham
