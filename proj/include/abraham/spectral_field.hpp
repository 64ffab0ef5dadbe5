#pragma once
#include <iosfwd>
#include <string>
#include <vector>

#include "abraham/kgrid.hpp"
#include "abraham/vec3.hpp"

namespace abraham {

//! Complex field amplitudes (E_hat, B_hat) on every node of a KGrid.
//! A pair describing a real position-space field satisfies the Hermitian
//! symmetry F(-k) = conj(F(k)); B_hat is transverse (khat . B_hat = 0).
struct SpectralFieldPair {
  std::vector<CVec3> e_hat;
  std::vector<CVec3> b_hat;

  SpectralFieldPair() = default;
  explicit SpectralFieldPair(std::size_t n_nodes)
      : e_hat(n_nodes), b_hat(n_nodes) {}

  std::size_t size() const { return e_hat.size(); }
};

//! Quadratic diagnostics of a field state.
struct FieldFunctionals {
  double energy = 0.0;   // (1/2) integral (|E|^2 + |B|^2)
  Vec3 momentum;         // integral Re(conj(E) x B); sign fixed by this definition
  double l2_norm = 0.0;  // sqrt(integral (|E|^2 + |B|^2))
};

//! Exact free Maxwell evolution, mode by mode. Transverse components rotate
//! as Etr -> cos(|k|t) Etr + i sin(|k|t) khat x B (and the magnetic
//! counterpart with the opposite sign); longitudinal components are constants
//! of the free flow. No time discretization is involved.
SpectralFieldPair free_propagate(const SpectralFieldPair& state,
                                 const KGrid& grid, double t);

//! In-place variant with precomputed per-shell cos(|k|t), sin(|k|t).
void free_rotate_inplace(SpectralFieldPair& state, const KGrid& grid,
                         const std::vector<double>& cos_kt,
                         const std::vector<double>& sin_kt);

//! Energy, momentum and L2 norm by grid quadrature in a fixed node order.
//! Warns (via the optional flag) when the imaginary part of the energy
//! accumulator exceeds 1e-10 of its real part, which signals broken
//! Hermitian symmetry.
FieldFunctionals functionals(const SpectralFieldPair& state, const KGrid& grid,
                             bool* symmetry_warning = nullptr);

//! Projects onto the Hermitian-symmetric subspace by averaging each node with
//! the conjugate of its antipode. Idempotent.
SpectralFieldPair enforce_hermitian(const SpectralFieldPair& state,
                                    const KGrid& grid);

//! Max deviation from Hermitian symmetry over all nodes and components.
double hermitian_defect(const SpectralFieldPair& state, const KGrid& grid);

//! Max |khat . B_hat| over nodes.
double transversality_defect(const SpectralFieldPair& state, const KGrid& grid);

//! Weighted L2 norm of the pair: sqrt(sum w (|E|^2 + |B|^2)).
double field_norm(const SpectralFieldPair& state, const KGrid& grid);

// --- small linear-algebra helpers used by the integrator and quadratures ---
void axpy(SpectralFieldPair& y, double a, const SpectralFieldPair& x);
SpectralFieldPair subtract(const SpectralFieldPair& a, const SpectralFieldPair& b);
void scale(SpectralFieldPair& f, double a);

// --- columnar file format ---
//! Writes one row per node: |k|, khat, Re/Im of the six components.
//! The header carries the grid parameters and the Fourier-convention version.
void write_field(std::ostream& os, const SpectralFieldPair& state,
                 const KGrid& grid);
void write_field_file(const std::string& path, const SpectralFieldPair& state,
                      const KGrid& grid);
//! Reads a field written by write_field; rebuilds the grid from the header
//! and verifies it matches `grid` when one is supplied.
SpectralFieldPair read_field_file(const std::string& path, KGrid* grid_out);

//! Fourier convention tag recorded in file headers.
inline constexpr const char* kConventionVersion = "fourier-unitary-minus-v1";

}  // namespace abraham
