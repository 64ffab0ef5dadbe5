#pragma once
#include <string>
#include <vector>

#include "abraham/charge_model.hpp"
#include "abraham/dynamics.hpp"
#include "abraham/kgrid.hpp"
#include "abraham/scattering.hpp"
#include "abraham/spectral_field.hpp"

namespace abraham {

//! Per-direction infrared tails lim |k| (E, B)(k) with Richardson
//! extrapolation error estimates. Directions follow the grid's direction set
//! unless stated otherwise.
struct IRTail {
  std::vector<Vec3> directions;
  std::vector<CVec3> e_tail;
  std::vector<CVec3> b_tail;
  std::vector<double> error_e;  // per-direction extrapolation error estimate
  std::vector<double> error_b;
  std::vector<bool> non_converged;  // error larger than the value
  std::string label;
};

//! Per-direction spatial tails lim |x|^2 (E, B)(x).
struct SpatialTail {
  std::vector<Vec3> directions;
  std::vector<Vec3> e_tail;
  std::vector<Vec3> b_tail;
  std::vector<double> error;  // Richardson step difference, per direction
  std::vector<bool> under_resolved;
  std::string label;
};

//! Soft-photon bookkeeping: lhs = tails(z_sc,+) - tails(z_sc,-),
//! rhs = -(soliton tail at v_plus - soliton tail at v_minus), residual and
//! the error budget that should account for it.
struct SoftPhotonReport {
  std::vector<Vec3> directions;
  std::vector<CVec3> lhs_e, rhs_e, lhs_b, rhs_b;
  //! measured scattered tails entering lhs, kept for downstream checks
  std::vector<CVec3> tail_plus_e, tail_plus_b, tail_minus_e, tail_minus_b;
  std::vector<double> residual_e, residual_b;  // per direction
  double residual_norm_e = 0.0;  // aggregate, relative to ||rhs||
  double residual_norm_b = 0.0;
  double rhs_norm_e = 0.0;
  double rhs_norm_b = 0.0;
  double extrapolation_budget = 0.0;  // rms of extrapolation errors
  double tail_budget = 0.0;           // s-integral truncation bounds
};

//! IR extraction knobs: radial nodes below k_ir feed a Neville table in |k|
//! evaluated at 0; at most max_order+1 nodes are used and the error estimate
//! is the difference of the last two extrapolation orders.
struct IRExtractOptions {
  double k_ir = 6e-3;
  std::size_t max_order = 3;
};

IRTail ir_extract(const SpectralFieldPair& field, const KGrid& grid,
                  const IRExtractOptions& opt = {});

//! Projects both sectors onto the plane transverse to each direction.
IRTail transverse_project(const IRTail& tail);

//! Drift report for the momentum-space conservation law: the full-field tail
//! is the closed-form soliton tail at (q(t), v(t)) plus the extrapolated tail
//! of the deviation.
struct IRConservationReport {
  std::vector<double> times;
  //! max over directions of |tail(t) - tail(0)| / max|tail(0)|, per time
  std::vector<double> transverse_drift_e;
  std::vector<double> transverse_drift_b;
  std::vector<double> longitudinal_drift;  // khat.E tail deviation, per time
  double max_transverse_drift = 0.0;
  double max_longitudinal_drift = 0.0;
};

IRConservationReport check_ir_conservation(
    const std::vector<SpectralFieldPair>& snapshots,
    const std::vector<double>& snapshot_times, const Trajectory& traj,
    const ChargeModel& model, const KGrid& grid,
    const IRExtractOptions& opt = {});

SoftPhotonReport soft_photon_residual(const ScatterResult& sc_plus,
                                      const ScatterResult& sc_minus,
                                      const Vec3& v_plus, const Vec3& v_minus,
                                      const ChargeModel& model,
                                      const KGrid& grid,
                                      const IRExtractOptions& opt = {});

//! Spatial-tail evaluation options. The deviation part of the field is summed
//! with a smooth spectral window exp(-(k/window_k)^8); radii where the
//! windowed bandwidth times |x| exceeds the polar resolution are flagged.
struct SpatialTailOptions {
  std::vector<Vec3> directions;
  std::vector<double> radii;  // increasing, all >> r_phi
  double window_k = 0.35;
};

//! lim |x|^2 (E, B) along each direction: closed-form soliton tail at the
//! particle's (q, v) plus the windowed oscillatory-quadrature deviation tail,
//! Richardson-extrapolated in 1/|x| over the given radii.
SpatialTail spatial_tail(const SpectralFieldPair& field,
                         const ParticleState& particle,
                         const ChargeModel& model, const KGrid& grid,
                         const SpatialTailOptions& opt);

//! Sphere average of n . E_tail times 4 pi (the total asymptotic flux, which
//! Gauss's law pins to the total charge e). Uses equal-weight averaging over
//! the report's directions.
double flux_from_tail(const SpatialTail& tail);

}  // namespace abraham
