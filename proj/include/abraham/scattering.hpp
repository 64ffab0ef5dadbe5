#pragma once
#include <utility>
#include <vector>

#include "abraham/charge_model.hpp"
#include "abraham/dynamics.hpp"
#include "abraham/kgrid.hpp"
#include "abraham/spectral_field.hpp"

namespace abraham {

enum class TimeDirection { Future = +1, Past = -1 };

//! Scattered free-field data at t = 0:
//!   z_sc = Z(0) - integral_0^{+-T} ds U(-s) g(s)
//! where Z(0) is the initial deviation from the instantaneous soliton and g
//! is the soliton velocity-gradient source along the trajectory.
struct ScatterResult {
  SpectralFieldPair z_sc;
  TimeDirection direction = TimeDirection::Future;
  //! Estimate of the dropped |s| > T contribution, from the power-law fit of
  //! the source norm along the recorded tail.
  double tail_bound = 0.0;
  //! (T, ||U(-T) Z(T) - z_sc||) wave-operator convergence diagnostic.
  std::vector<std::pair<double, double>> convergence_series;
  //! Set when tail_bound exceeds 10% of ||z_sc|| (run too short for a
  //! trustworthy IR claim).
  bool tail_warning = false;
};

//! Source g(k) at one trajectory sample:
//!   g_E(k) = (vdot . grad_v) E_v(k) exp(-i k.q),  g_B analogous.
SpectralFieldPair source_term(const TrajectorySample& sample,
                              const ChargeModel& model, const KGrid& grid);

//! Composite-Simpson evaluation of the scattered field over the recorded
//! trajectory (which must cover [0, T] for Future or [-T, 0] for Past, with
//! t = 0 included as its first/last sample).
ScatterResult scattered_field(const Trajectory& traj,
                              const SpectralFieldPair& initial_deviation,
                              const ChargeModel& model, const KGrid& grid,
                              TimeDirection direction);

//! For each snapshot time T: || U(-T) Z(T) - z_sc || with
//! Z(T) = snapshot - soliton(q(T), v(T)). The trajectory supplies (q, v) at
//! the snapshot times (matched by |t| within half a sample spacing).
std::vector<std::pair<double, double>> wave_operator_diagnostic(
    const std::vector<SpectralFieldPair>& snapshots,
    const std::vector<double>& snapshot_times, const Trajectory& traj,
    const ChargeModel& model, const KGrid& grid,
    const SpectralFieldPair& z_sc);

}  // namespace abraham
