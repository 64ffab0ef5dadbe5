#include "abraham/soliton.hpp"

#include <cmath>
#include <stdexcept>

namespace abraham {

namespace {

constexpr double kTwoPiPow32Inv = 0.06349363593424097;  // (2 pi)^(-3/2)

void check_velocity(const Vec3& v, const char* who) {
  if (!(v.norm2() < 1.0))
    throw std::invalid_argument(std::string(who) + ": |v| must be < 1");
}

}  // namespace

std::pair<CVec3, CVec3> soliton_momentum(const SolitonField& s, const Vec3& k) {
  check_velocity(s.v, "soliton_momentum");
  const double k2 = k.norm2();
  if (k2 == 0.0)
    throw std::invalid_argument("soliton_momentum: k = 0 (IR limit lives in ir_limit_soliton)");
  const Complex i_unit(0.0, 1.0);
  const Vec3& v = s.v;
  const double kv = dot(k, v);
  const double denom = k2 - kv * kv;  // > 0 for |v| < 1, k != 0
  const double amp = s.model->e() * s.model->phi_hat(std::sqrt(k2)) / denom;
  // (-ik + v (v.ik)) amp = -i (k - v (k.v)) amp
  const CVec3 e_v = CVec3(k - v * kv) * (-i_unit * amp);
  const CVec3 b_v = cross(v, e_v);
  return {e_v, b_v};
}

std::pair<CVec3, CVec3> soliton_vgrad(const SolitonField& s, const Vec3& k,
                                      const Vec3& dv) {
  check_velocity(s.v, "soliton_vgrad");
  const double k2 = k.norm2();
  if (k2 == 0.0) throw std::invalid_argument("soliton_vgrad: k = 0");
  const Complex i_unit(0.0, 1.0);
  const Vec3& v = s.v;
  const double kv = dot(k, v);
  const double kdv = dot(k, dv);
  const double denom = k2 - kv * kv;
  const double phik = s.model->e() * s.model->phi_hat(std::sqrt(k2));

  // E_v = N_E phi / D with N_E = -i (k - v (k.v)), D = k^2 - (k.v)^2.
  // (dv.grad_v) N_E = +i (dv (k.v) + v (k.dv));  (dv.grad_v) D = -2 (k.v)(k.dv).
  const CVec3 n_e = CVec3(k - v * kv) * (-i_unit);
  const CVec3 dn_e = CVec3(dv * kv + v * kdv) * i_unit;
  const double dd = -2.0 * kv * kdv;
  const CVec3 de = (dn_e * (1.0 / denom) - n_e * (dd / (denom * denom))) * phik;

  // B_v = -i (v x k) phi / D.
  const CVec3 n_b = cross(CVec3(v), CVec3(k)) * (-i_unit);
  const CVec3 dn_b = cross(CVec3(dv), CVec3(k)) * (-i_unit);
  const CVec3 db = (dn_b * (1.0 / denom) - n_b * (dd / (denom * denom))) * phik;
  return {de, db};
}

Vec3 soliton_position_tail(const SolitonField& s, const Vec3& x_hat) {
  check_velocity(s.v, "soliton_position_tail");
  const double v2 = s.v.norm2();
  const double cv = dot(x_hat, s.v);       // |v| cos(theta)
  const double sin2 = v2 - cv * cv;        // v^2 sin^2(theta)
  const double denom = std::pow(1.0 - sin2, 1.5);
  return x_hat * (s.model->e() / (4.0 * M_PI) * (1.0 - v2) / denom);
}

std::pair<CVec3, CVec3> ir_limit_soliton(const SolitonField& s, const Vec3& k_hat) {
  check_velocity(s.v, "ir_limit_soliton");
  const Complex i_unit(0.0, 1.0);
  const double c = dot(k_hat, s.v);
  const double pref = s.model->e() * kTwoPiPow32Inv / (1.0 - c * c);
  const CVec3 e_tail = CVec3(k_hat - s.v * c) * (-i_unit * pref);
  const CVec3 b_tail = CVec3(cross(s.v, k_hat)) * (-i_unit * pref);
  return {e_tail, b_tail};
}

SpectralFieldPair sample_soliton(const SolitonField& s, const Vec3& q,
                                 const KGrid& grid) {
  check_velocity(s.v, "sample_soliton");
  SpectralFieldPair out(grid.n_nodes());
  const std::size_t nd = grid.n_directions();
  for (std::size_t ir = 0; ir < grid.n_radial(); ++ir) {
    const double kmag = grid.radial_nodes[ir];
    const double phik = s.model->e() * s.model->phi_hat(kmag);
    for (std::size_t id = 0; id < nd; ++id) {
      const std::size_t n = ir * nd + id;
      const Vec3 k = grid.directions[id] * kmag;
      const double kv = dot(k, s.v);
      const double amp = phik / (kmag * kmag - kv * kv);
      const Complex i_unit(0.0, 1.0);
      const CVec3 e_v = CVec3(k - s.v * kv) * (-i_unit * amp);
      const Complex phase = std::exp(Complex(0.0, -dot(k, q)));
      out.e_hat[n] = e_v * phase;
      out.b_hat[n] = cross(s.v, e_v) * phase;
    }
  }
  return out;
}

}  // namespace abraham
