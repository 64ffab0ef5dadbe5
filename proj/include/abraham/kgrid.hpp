#pragma once
#include <cstddef>
#include <vector>

#include "abraham/vec3.hpp"

namespace abraham {

//! Spherical Fourier-space quadrature grid: log-spaced radial shells times a
//! direction set closed under khat -> -khat.
//!
//! Radial weights absorb the k^2 volume factor, so for any radial profile g
//!   integral_0^inf dk k^2 g(k)  ~=~  sum_i radial_weights[i] * g(radial_nodes[i]).
//! Angular weights integrate over the unit sphere (they sum to 4*pi).
//! Node storage is radial-major: node(ir, id) = ir * n_directions + id.
struct KGrid {
  std::vector<double> radial_nodes;     // |k|, strictly increasing
  std::vector<double> radial_weights;   // include k^2 dk
  std::vector<Vec3> directions;         // unit vectors
  std::vector<double> angular_weights;  // sum to 4*pi
  std::vector<std::size_t> antipode_index;

  // construction parameters, kept for serialization headers
  std::size_t n_polar = 0;
  std::size_t n_azimuth = 0;
  double k_min = 0.0;
  double k_max = 0.0;

  std::size_t n_radial() const { return radial_nodes.size(); }
  std::size_t n_directions() const { return directions.size(); }
  std::size_t n_nodes() const { return n_radial() * n_directions(); }

  std::size_t node(std::size_t ir, std::size_t id) const {
    return ir * n_directions() + id;
  }
  std::size_t radial_of(std::size_t n) const { return n / n_directions(); }
  std::size_t direction_of(std::size_t n) const { return n % n_directions(); }

  double kmag(std::size_t n) const { return radial_nodes[radial_of(n)]; }
  const Vec3& khat(std::size_t n) const { return directions[direction_of(n)]; }
  Vec3 kvec(std::size_t n) const { return khat(n) * kmag(n); }
  //! Full quadrature weight of node n (radial x angular).
  double weight(std::size_t n) const {
    return radial_weights[radial_of(n)] * angular_weights[direction_of(n)];
  }
  //! Node paired with n under k -> -k (same shell, antipodal direction).
  std::size_t antipode(std::size_t n) const {
    return node(radial_of(n), antipode_index[direction_of(n)]);
  }
};

//! Builds the grid: trapezoidal rule on the log-radial axis, Gauss-Legendre
//! polar nodes, uniform azimuth. Even polar/azimuth counts keep the direction
//! set antipodally closed with no fixed point.
//! Throws std::invalid_argument on parameters that break these properties
//! (odd angular counts, n_radial < 4, non-positive k_min, k_max <= k_min).
KGrid build_kgrid(std::size_t n_radial, double k_min, double k_max,
                  std::size_t n_polar, std::size_t n_azimuth);

//! Gauss-Legendre nodes/weights on [-1, 1] (Newton on the Legendre recurrence).
void gauss_legendre(std::size_t n, std::vector<double>& nodes,
                    std::vector<double>& weights);

}  // namespace abraham
