#include "abraham/kgrid.hpp"

#include <cmath>
#include <stdexcept>

namespace abraham {

void gauss_legendre(std::size_t n, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const std::size_t m = (n + 1) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    // Chebyshev-like initial guess, then Newton on P_n(x) = 0.
    double x = std::cos(M_PI * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (std::size_t j = 2; j <= n; ++j) {
        const double jd = static_cast<double>(j);
        const double p2 = ((2.0 * jd - 1.0) * x * p1 - (jd - 1.0) * p0) / jd;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

KGrid build_kgrid(std::size_t n_radial, double k_min, double k_max,
                  std::size_t n_polar, std::size_t n_azimuth) {
  if (n_radial < 4) throw std::invalid_argument("build_kgrid: n_radial must be >= 4");
  if (!(k_min > 0.0)) throw std::invalid_argument("build_kgrid: k_min must be positive");
  if (!(k_max > k_min)) throw std::invalid_argument("build_kgrid: k_max must exceed k_min");
  if (n_polar < 2 || n_polar % 2 != 0)
    throw std::invalid_argument("build_kgrid: n_polar must be even and >= 2 (antipodal pairing)");
  if (n_azimuth < 2 || n_azimuth % 2 != 0)
    throw std::invalid_argument("build_kgrid: n_azimuth must be even and >= 2 (antipodal pairing)");

  KGrid g;
  g.n_polar = n_polar;
  g.n_azimuth = n_azimuth;
  g.k_min = k_min;
  g.k_max = k_max;

  // Radial: trapezoid on u = log k. For integrands smooth in u and decaying
  // at both ends this rule converges spectrally; the k^3 factor is
  // dk k^2 = k^3 du.
  const double u0 = std::log(k_min);
  const double u1 = std::log(k_max);
  const double h = (u1 - u0) / static_cast<double>(n_radial - 1);
  g.radial_nodes.resize(n_radial);
  g.radial_weights.resize(n_radial);
  for (std::size_t i = 0; i < n_radial; ++i) {
    const double k = std::exp(u0 + h * static_cast<double>(i));
    const double trap = (i == 0 || i == n_radial - 1) ? 0.5 : 1.0;
    g.radial_nodes[i] = k;
    g.radial_weights[i] = trap * h * k * k * k;
  }

  // Angular: Gauss-Legendre in cos(theta), uniform azimuth.
  std::vector<double> ct, wt;
  gauss_legendre(n_polar, ct, wt);
  const double waz = 2.0 * M_PI / static_cast<double>(n_azimuth);
  g.directions.reserve(n_polar * n_azimuth);
  g.angular_weights.reserve(n_polar * n_azimuth);
  for (std::size_t ip = 0; ip < n_polar; ++ip) {
    const double c = ct[ip];
    const double s = std::sqrt(1.0 - c * c);
    for (std::size_t ia = 0; ia < n_azimuth; ++ia) {
      const double phi = waz * static_cast<double>(ia);
      g.directions.push_back({s * std::cos(phi), s * std::sin(phi), c});
      g.angular_weights.push_back(wt[ip] * waz);
    }
  }

  // khat -> -khat maps polar node ip to n_polar-1-ip (GL symmetry is exact)
  // and shifts azimuth by half a turn.
  g.antipode_index.resize(n_polar * n_azimuth);
  for (std::size_t ip = 0; ip < n_polar; ++ip) {
    for (std::size_t ia = 0; ia < n_azimuth; ++ia) {
      const std::size_t ja = (ia + n_azimuth / 2) % n_azimuth;
      g.antipode_index[ip * n_azimuth + ia] = (n_polar - 1 - ip) * n_azimuth + ja;
    }
  }

  // Snap antipodal directions to exact negation; GL symmetry makes the pair
  // equal to rounding already, but the involution should be bit-exact.
  for (std::size_t d = 0; d < g.directions.size(); ++d) {
    const std::size_t a = g.antipode_index[d];
    if (a > d) g.directions[a] = -g.directions[d];
    if (g.antipode_index[a] != d || a == d)
      throw std::logic_error("build_kgrid: antipode pairing is not a fixed-point-free involution");
  }
  return g;
}

}  // namespace abraham
