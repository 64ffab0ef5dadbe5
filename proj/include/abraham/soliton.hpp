#pragma once
#include <utility>

#include "abraham/charge_model.hpp"
#include "abraham/kgrid.hpp"
#include "abraham/spectral_field.hpp"
#include "abraham/vec3.hpp"

namespace abraham {

//! Traveling-wave (charge soliton) field evaluations for a particle moving
//! at constant velocity v, |v| < 1. Momentum-space closed form:
//!   E_v(k) = (-ik + v (v.ik)) e phi_hat(k) / (k^2 - (k.v)^2)
//!   B_v(k) = v x E_v(k)
//! The Gauss constraint ik.E_v = e phi_hat(k) holds identically in v.
struct SolitonField {
  Vec3 v;
  const ChargeModel* model = nullptr;
};

//! (E_v(k), B_v(k)). Throws on k = 0 (exposes a 1/|k| singularity; the IR
//! limit is available through ir_limit_soliton) and on |v| >= 1.
std::pair<CVec3, CVec3> soliton_momentum(const SolitonField& s, const Vec3& k);

//! Directional velocity gradient ((dv.grad_v) E_v, (dv.grad_v) B_v) in closed
//! form. This is the source kernel of the scattered-field integral.
std::pair<CVec3, CVec3> soliton_vgrad(const SolitonField& s, const Vec3& k,
                                      const Vec3& dv);

//! Spatial-tail coefficient of the soliton electric field:
//!   lim |x|^2 E_v(x) = (e / 4 pi) (1 - v^2) xhat / (1 - v^2 sin^2 theta)^(3/2)
//! with theta the angle between xhat and v. The magnetic tail is v x this.
Vec3 soliton_position_tail(const SolitonField& s, const Vec3& x_hat);

//! Infrared tails (script E_v(khat), script B_v(khat)) = lim |k| (E_v, B_v):
//!   E: -i e (2 pi)^(-3/2) (khat - (khat.v) v) / (1 - (khat.v)^2)
//!   B: -i e (2 pi)^(-3/2) (v x khat)          / (1 - (khat.v)^2)
std::pair<CVec3, CVec3> ir_limit_soliton(const SolitonField& s, const Vec3& k_hat);

//! Soliton fields of a particle at position q sampled on the grid, i.e.
//! E_v(k) exp(-i k.q) per node.
SpectralFieldPair sample_soliton(const SolitonField& s, const Vec3& q,
                                 const KGrid& grid);

}  // namespace abraham
