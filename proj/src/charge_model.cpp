#include "abraham/charge_model.hpp"

#include <cmath>
#include <stdexcept>

#include "abraham/kgrid.hpp"

namespace abraham {

namespace {

constexpr double kTwoPiPow32Inv = 0.06349363593424097;  // (2 pi)^(-3/2)

// Composite 16-point Gauss-Legendre over [a, b] split into `panels` panels.
template <typename F>
double composite_gl(const F& f, double a, double b, std::size_t panels) {
  static std::vector<double> x16, w16;
  if (x16.empty()) gauss_legendre(16, x16, w16);
  const double hp = (b - a) / static_cast<double>(panels);
  double total = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + hp * static_cast<double>(p);
    const double mid = lo + 0.5 * hp;
    double acc = 0.0;
    for (std::size_t i = 0; i < 16; ++i)
      acc += w16[i] * f(mid + 0.5 * hp * x16[i]);
    total += 0.5 * hp * acc;
  }
  return total;
}

}  // namespace

ChargeModel::ChargeModel(double e, double m, double r_phi)
    : e_(e), m_(m), r_phi_(r_phi) {
  if (!(m > 0.0)) throw std::invalid_argument("ChargeModel: mass must be positive");
  if (!(r_phi > 0.0)) throw std::invalid_argument("ChargeModel: r_phi must be positive");
  // 4 pi int r^2 bump(r) dr = 1/norm_c_
  const double radial =
      composite_gl([this](double r) { return r * r * bump(r); }, 0.0, r_phi_, 16);
  norm_c_ = 1.0 / (4.0 * M_PI * radial);
  build_cache();
}

double ChargeModel::bump(double r) const {
  const double s = r / r_phi_;
  if (s >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - s * s));
}

double ChargeModel::profile(double r) const { return norm_c_ * bump(r); }

double ChargeModel::phi_hat_direct(double k_mag) const {
  if (k_mag < 0.0) throw std::invalid_argument("phi_hat: k_mag must be >= 0");
  // Small |k|: the sin(kr)/k kernel is evaluated through its even limit
  // branch to avoid 0/0; the threshold keeps sin(kr)/(kr) well conditioned.
  if (k_mag * r_phi_ < 1e-6) {
    const double v = composite_gl(
        [this](double r) { return r * r * profile(r); }, 0.0, r_phi_, 16);
    return kTwoPiPow32Inv * 4.0 * M_PI * v;
  }
  const std::size_t panels =
      8 + static_cast<std::size_t>(k_mag * r_phi_ / 3.0);
  const double v = composite_gl(
      [this, k_mag](double r) { return r * std::sin(k_mag * r) * profile(r); },
      0.0, r_phi_, panels);
  return kTwoPiPow32Inv * 4.0 * M_PI * v / k_mag;
}

void ChargeModel::build_cache() {
  // Clamped cubic spline on a uniform |k| grid. phi_hat is even in |k| so the
  // left end slope is exactly zero; the right end uses the quadrature slope.
  const std::size_t n = 4096;
  cache_k_max_ = 64.0 / r_phi_;
  cache_dk_ = cache_k_max_ / static_cast<double>(n - 1);
  cache_v_.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    cache_v_[i] = phi_hat_direct(cache_dk_ * static_cast<double>(i));

  const double h = cache_dk_;
  const double slope_a = 0.0;
  const double slope_b =
      (phi_hat_direct(cache_k_max_) - phi_hat_direct(cache_k_max_ - 1e-5)) / 1e-5;
  std::vector<double> diag(n), rhs(n), sub(n);
  diag[0] = 2.0 * h;
  rhs[0] = 6.0 * ((cache_v_[1] - cache_v_[0]) / h - slope_a);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    diag[i] = 4.0 * h;
    rhs[i] = 6.0 * ((cache_v_[i + 1] - cache_v_[i]) / h -
                    (cache_v_[i] - cache_v_[i - 1]) / h);
  }
  diag[n - 1] = 2.0 * h;
  rhs[n - 1] = 6.0 * (slope_b - (cache_v_[n - 1] - cache_v_[n - 2]) / h);
  // Thomas solve with constant off-diagonal h.
  for (std::size_t i = 1; i < n; ++i) {
    const double w = h / diag[i - 1];
    diag[i] -= w * h;
    rhs[i] -= w * rhs[i - 1];
  }
  cache_d2_.resize(n);
  cache_d2_[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;)
    cache_d2_[i] = (rhs[i] - h * cache_d2_[i + 1]) / diag[i];
}

double ChargeModel::phi_hat(double k_mag) const {
  if (k_mag < 0.0) throw std::invalid_argument("phi_hat: k_mag must be >= 0");
  if (k_mag >= cache_k_max_) return phi_hat_direct(k_mag);
  const double u = k_mag / cache_dk_;
  std::size_t i = static_cast<std::size_t>(u);
  if (i + 1 >= cache_v_.size()) i = cache_v_.size() - 2;
  const double h = cache_dk_;
  const double a = (cache_dk_ * static_cast<double>(i + 1) - k_mag) / h;
  const double b = 1.0 - a;
  return a * cache_v_[i] + b * cache_v_[i + 1] +
         ((a * a * a - a) * cache_d2_[i] + (b * b * b - b) * cache_d2_[i + 1]) *
             (h * h) / 6.0;
}

}  // namespace abraham
