#pragma once
#include <vector>

#include "abraham/charge_model.hpp"
#include "abraham/kgrid.hpp"
#include "abraham/spectral_field.hpp"
#include "abraham/vec3.hpp"

namespace abraham {

//! Particle kinematics. The velocity is the stored representation; the
//! relativistic momentum m gamma v is derived on demand.
struct ParticleState {
  Vec3 q;
  Vec3 v;

  double gamma() const { return 1.0 / std::sqrt(1.0 - v.norm2()); }
  Vec3 momentum(double mass) const { return v * (mass * gamma()); }
};

//! Velocity corresponding to a relativistic momentum p: p / sqrt(m^2 + p^2).
Vec3 velocity_from_momentum(const Vec3& p, double mass);

//! Full state of the coupled system. The longitudinal electric component is
//! slaved to the Gauss constraint
//!   E_par(k) = -i khat e phi_hat(k) exp(-i k.q) / |k|
//! and is never evolved; apply_gauss_slaving re-imposes it.
struct SystemState {
  SpectralFieldPair fields;
  ParticleState particle;
  double t = 0.0;
};

struct TrajectorySample {
  double t = 0.0;
  Vec3 q, v, a;  // a recorded from the Lorentz-force expression, not differenced
};

//! Power-law fit |vdot(t)| ~ c (1 + |t|)^(-p) over the tail of a run.
struct AccelTailFit {
  double c = 0.0;
  double p = 0.0;
  bool valid = false;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;  // strictly increasing t
  AccelTailFit tail_fit;

  //! Fit over the last-quarter samples (log|a| vs log(1+|t|) least squares).
  static AccelTailFit fit_tail(const std::vector<TrajectorySample>& samples);
};

struct SimulateResult {
  SystemState final_state;
  Trajectory trajectory;
  std::vector<double> snapshot_times;
  std::vector<SpectralFieldPair> snapshots;  // taken every sample_every steps
  double energy_drift = 0.0;                 // max relative drift seen
  //! v(t_final) with the fitted error bound c (1+|t_final|)^(-(p-1))/(p-1).
  Vec3 v_final;
  double v_final_error_bound = 0.0;
};

//! Smeared fields at the particle: E_phi(q) = Re sum w exp(ik.q) E(k) phi_hat,
//! likewise B_phi. Throws when the imaginary part of the accumulator exceeds
//! 1e-9 of its magnitude (Hermitian symmetry corruption).
std::pair<Vec3, Vec3> smeared_fields_at_particle(const SystemState& state,
                                                 const KGrid& grid,
                                                 const ChargeModel& model);

//! Overwrites the longitudinal electric component with the Gauss-law value.
void apply_gauss_slaving(SpectralFieldPair& fields, const Vec3& q,
                         const KGrid& grid, const ChargeModel& model);

//! Max over nodes of |ik.E - rho_hat| (Gauss residual).
double gauss_defect(const SpectralFieldPair& fields, const Vec3& q,
                    const KGrid& grid, const ChargeModel& model);

//! One step of the interaction-picture (Lawson) RK4 scheme: transverse modes
//! are rotated exactly by the free group between stage evaluations and the
//! transverse current -j_tr(k) = -e phi_hat exp(-ik.q) v_tr drives them; the
//! particle advances under the smeared Lorentz force. dt < 0 steps backward.
SystemState step(const SystemState& state, const KGrid& grid,
                 const ChargeModel& model, double dt);

//! Integrates to t_final (sign of dt must match), recording the trajectory
//! every trajectory_every steps and field snapshots every sample_every steps.
//! Aborts (throws std::runtime_error) if the total-energy drift exceeds
//! energy_drift_abort.
SimulateResult simulate(const SystemState& initial, const KGrid& grid,
                        const ChargeModel& model, double t_final, double dt,
                        std::size_t sample_every,
                        std::size_t trajectory_every = 1,
                        double energy_drift_abort = 1e-2);

//! Lorentz-force acceleration dv/dt of the current state.
Vec3 acceleration(const SystemState& state, const KGrid& grid,
                  const ChargeModel& model);

//! Divergence-free, Hermitian-symmetric free wave packet concentrated near
//! |k| = k0 around `direction`, polarized along the transverse projection of
//! `polarization`, with an envelope vanishing faster than |k| at k = 0
//! (IR-regular: lim |k| E = 0). Requires k0 > 3 width and polarization not
//! parallel to direction.
SpectralFieldPair make_pulse(const KGrid& grid, double k0, double width,
                             double amplitude, const Vec3& polarization,
                             const Vec3& direction);

//! Total energy m gamma + field energy (the conserved Hamiltonian).
double total_energy(const SystemState& state, const KGrid& grid,
                    const ChargeModel& model);

//! Total momentum m gamma v + field momentum.
Vec3 total_momentum(const SystemState& state, const KGrid& grid,
                    const ChargeModel& model);

}  // namespace abraham
