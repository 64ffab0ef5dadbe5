#pragma once
#include <vector>

#include "abraham/vec3.hpp"

namespace abraham {

//! Extended-charge model: coupling e, mass m, and a smooth radial profile
//! phi supported in |x| <= r_phi with unit total charge integral.
//!
//! The concrete profile is the standard bump
//!   phi(r) = C exp(-1 / (1 - (r/r_phi)^2)),  r < r_phi,
//! with C fixed by the normalization integral at construction.
//!
//! phi_hat uses the convention fhat(k) = (2 pi)^(-3/2) int exp(-ik.x) f d3x,
//! so phi_hat(0) = (2 pi)^(-3/2). Values are served from an immutable cubic
//! spline built at construction (clamped at k=0 where the radial derivative
//! vanishes); callers may share a ChargeModel across threads for reads.
class ChargeModel {
 public:
  ChargeModel(double e, double m, double r_phi);

  double e() const { return e_; }
  double m() const { return m_; }
  double r_phi() const { return r_phi_; }

  //! Normalized profile value phi(r); zero for r >= r_phi.
  double profile(double r) const;

  //! Radial Fourier transform phi_hat(|k|), spline-cached.
  double phi_hat(double k_mag) const;

  //! Same value by direct composite Gauss-Legendre quadrature (used to build
  //! the cache and for |k| beyond the cached range).
  double phi_hat_direct(double k_mag) const;

  double cache_k_max() const { return cache_k_max_; }

 private:
  double bump(double r) const;  // un-normalized profile
  void build_cache();

  double e_;
  double m_;
  double r_phi_;
  double norm_c_ = 0.0;

  double cache_k_max_ = 0.0;
  double cache_dk_ = 0.0;
  std::vector<double> cache_v_;
  std::vector<double> cache_d2_;  // spline second derivatives
};

}  // namespace abraham
