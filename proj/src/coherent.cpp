#include "abraham/coherent.hpp"

#include <cmath>
#include <stdexcept>

namespace abraham {

namespace {
constexpr double kTwoPiPow32Inv = 0.06349363593424097;  // (2 pi)^(-3/2)
}

std::pair<Vec3, Vec3> polarization_basis(const Vec3& k_hat) {
  const Vec3 anchor =
      std::abs(k_hat.z) < 0.9 ? Vec3{0.0, 0.0, 1.0} : Vec3{1.0, 0.0, 0.0};
  const Vec3 e1 = normalized(cross(anchor, k_hat));
  const Vec3 e2 = cross(k_hat, e1);
  return {e1, e2};
}

CVec3 w_amplitude(const CoherentProfile& profile, const Vec3& k) {
  if (!(profile.v_inf.norm2() < 1.0))
    throw std::invalid_argument("w_amplitude: |v_inf| must be < 1");
  const double kmag = k.norm();
  if (kmag == 0.0) throw std::invalid_argument("w_amplitude: k = 0");
  const Vec3 kh = k / kmag;
  const double pref = -profile.model->e() * profile.model->phi_hat(kmag) /
                      (std::sqrt(2.0) * std::pow(kmag, 1.5) *
                       (1.0 - dot(kh, profile.v_inf)));
  return CVec3(profile.v_inf * pref);
}

std::pair<CVec3, CVec3> expected_fields(const CoherentProfile& profile,
                                        const Vec3& k, double t) {
  const double kmag = k.norm();
  if (kmag == 0.0) throw std::invalid_argument("expected_fields: k = 0");
  const Vec3 kh = k / kmag;
  const Complex i_unit(0.0, 1.0);

  // Transverse sums through the explicit basis; at -k the basis differs but
  // spans the same plane, so summing at khat is equivalent.
  auto pol_sum = [&](const Vec3& khat, const CVec3& w) {
    const auto [e1, e2] = polarization_basis(khat);
    return CVec3(e1) * dot(e1, w) + CVec3(e2) * dot(e2, w);
  };
  const CVec3 pw_plus = pol_sum(kh, w_amplitude(profile, k));
  const CVec3 pw_minus = pol_sum(-kh, w_amplitude(profile, -k));

  const Complex em = std::exp(Complex(0.0, -kmag * t));
  const Complex ep = std::exp(Complex(0.0, +kmag * t));
  const CVec3 e_exp =
      (pw_plus * em - conj(pw_minus) * ep) * (i_unit * std::sqrt(0.5 * kmag));
  const CVec3 b_exp = cross(CVec3(k), pw_plus * em + conj(pw_minus) * ep) *
                      (i_unit / std::sqrt(2.0 * kmag));
  return {e_exp, b_exp};
}

std::pair<CVec3, CVec3> classical_ir_limits(const ChargeModel& model,
                                            const Vec3& v, const Vec3& k_hat) {
  const double c = dot(k_hat, v);
  const double denom = 1.0 - c * c;
  const Complex i_unit(0.0, 1.0);
  const Vec3 pv = v - k_hat * c;
  const CVec3 e_lim = CVec3(pv) * (-i_unit * model.e() * kTwoPiPow32Inv * c / denom);
  const CVec3 b_lim =
      CVec3(cross(v, k_hat)) * (i_unit * model.e() * kTwoPiPow32Inv / denom);
  return {e_lim, b_lim};
}

IRMatchReport ir_match_check(const CoherentProfile& profile,
                             const std::vector<Vec3>& directions, double t) {
  if (!(profile.v_inf.norm2() < 1.0))
    throw std::invalid_argument("ir_match_check: |v_inf| must be < 1");
  IRMatchReport rep;
  rep.directions = directions;

  // Geometric ladder of small |k| feeding a Neville table at 0.
  constexpr std::size_t kLadder = 4;
  std::vector<double> kx(kLadder);
  for (std::size_t i = 0; i < kLadder; ++i) kx[i] = 1e-3 / std::pow(2.0, double(i));

  for (const Vec3& dir : directions) {
    const Vec3 kh = normalized(dir);
    CVec3 e_extrap, b_extrap;
    Complex* ec[3] = {&e_extrap.x, &e_extrap.y, &e_extrap.z};
    Complex* bc[3] = {&b_extrap.x, &b_extrap.y, &b_extrap.z};
    for (int comp = 0; comp < 3; ++comp) {
      std::vector<Complex> ye(kLadder), yb(kLadder);
      for (std::size_t i = 0; i < kLadder; ++i) {
        const auto [ee, bb] = expected_fields(profile, kh * kx[i], t);
        const CVec3 se = ee * kx[i];
        const CVec3 sb = bb * kx[i];
        ye[i] = comp == 0 ? se.x : comp == 1 ? se.y : se.z;
        yb[i] = comp == 0 ? sb.x : comp == 1 ? sb.y : sb.z;
      }
      // Neville to k = 0
      std::vector<Complex> te = ye, tb = yb;
      for (std::size_t m = 1; m < kLadder; ++m)
        for (std::size_t i = 0; i + m < kLadder; ++i) {
          te[i] = (te[i + 1] * (0.0 - kx[i]) - te[i] * (0.0 - kx[i + m])) /
                  (kx[i + m] - kx[i]);
          tb[i] = (tb[i + 1] * (0.0 - kx[i]) - tb[i] * (0.0 - kx[i + m])) /
                  (kx[i + m] - kx[i]);
        }
      *ec[comp] = te[0];
      *bc[comp] = tb[0];
    }
    const auto [e_cl, b_cl] = classical_ir_limits(*profile.model, profile.v_inf, kh);
    rep.residual_e.push_back((e_extrap - e_cl).norm());
    rep.residual_b.push_back((b_extrap - b_cl).norm());
    rep.max_residual = std::max({rep.max_residual, rep.residual_e.back(),
                                 rep.residual_b.back()});
  }
  return rep;
}

}  // namespace abraham
