#pragma once
#include <utility>
#include <vector>

#include "abraham/charge_model.hpp"
#include "abraham/vec3.hpp"

namespace abraham {

//! Coherent-state profile for the free quantized field whose first moments
//! reproduce the classical scattered radiation at low frequency. The
//! amplitude is
//!   w(k) = -e phi_hat(k) / (sqrt(2) |k|^(3/2)) * v_inf / (1 - khat.v_inf).
struct CoherentProfile {
  Vec3 v_inf;
  const ChargeModel* model = nullptr;
};

//! Orthonormal transverse polarization pair (eps1, eps2) at khat. Two-patch
//! construction: the frame is anchored on z-hat away from the z poles and on
//! x-hat near them; no global smooth frame exists on the sphere, but every
//! observable built here depends only on the spanned transverse plane.
std::pair<Vec3, Vec3> polarization_basis(const Vec3& k_hat);

//! w(k). Rejects k = 0 (the |k|^(-3/2) singularity is the point: |w|^2 is not
//! integrable at the origin, so the coherent vector escapes Fock space).
CVec3 w_amplitude(const CoherentProfile& profile, const Vec3& k);

//! Coherent-state expectations of the free quantized fields at (k, t):
//!   <E(k,t)> = sqrt(|k|/2) ( i e^{-i|k|t} P w(k) - i e^{+i|k|t} conj(P w(-k)) )
//!   <B(k,t)> = sqrt(1/(2|k|)) i k x ( e^{-i|k|t} P w(k) + e^{+i|k|t} conj(P w(-k)) )
//! with P the transverse polarization sum, evaluated through the explicit
//! polarization basis.
std::pair<CVec3, CVec3> expected_fields(const CoherentProfile& profile,
                                        const Vec3& k, double t);

//! Residuals of the infrared matching: Richardson-extrapolated
//! |k| <E>, |k| <B> against the closed-form classical limits
//!   lim |k| E_sc = -i e (2pi)^(-3/2) (P v)(khat.v) / (1-(khat.v)^2)
//!   lim |k| B_sc = +i e (2pi)^(-3/2) (v x khat)   / (1-(khat.v)^2).
struct IRMatchReport {
  std::vector<Vec3> directions;
  std::vector<double> residual_e;
  std::vector<double> residual_b;
  double max_residual = 0.0;
};

IRMatchReport ir_match_check(const CoherentProfile& profile,
                             const std::vector<Vec3>& directions, double t);

//! Classical low-frequency limits entering the matching (also the rest-start
//! transverse formula): returns (lim |k| E_sc, lim |k| B_sc) for velocity v.
std::pair<CVec3, CVec3> classical_ir_limits(const ChargeModel& model,
                                            const Vec3& v, const Vec3& k_hat);

}  // namespace abraham
