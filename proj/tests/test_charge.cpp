#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "abraham/charge_model.hpp"
#include "oracles.hpp"

using namespace abraham;

namespace {
constexpr double kTwoPiPow32Inv = 0.06349363593424097;
}

TEST_CASE("profile is radial, compactly supported, and normalized") {
  const ChargeModel model(0.5, 1.0, 1.0);
  CHECK(model.profile(1.0) == 0.0);
  CHECK(model.profile(1.5) == 0.0);
  CHECK(model.profile(0.0) > 0.0);
  CHECK(model.profile(0.5) > 0.0);

  // independent oracle: adaptive Simpson of 4 pi r^2 phi(r)
  const double total = 4.0 * M_PI *
                       oracles::adaptive_simpson(
                           [&](double r) { return r * r * model.profile(r); },
                           0.0, 1.0, 1e-13);
  CHECK(std::abs(total - 1.0) < 1e-10);
}

TEST_CASE("normalization is independent of the support radius") {
  const ChargeModel model(1.0, 2.0, 0.4);
  const double total = 4.0 * M_PI *
                       oracles::adaptive_simpson(
                           [&](double r) { return r * r * model.profile(r); },
                           0.0, 0.4, 1e-13);
  CHECK(std::abs(total - 1.0) < 1e-10);
}

TEST_CASE("phi_hat(0) is (2 pi)^(-3/2) and the small-k branch is continuous") {
  const ChargeModel model(0.5, 1.0, 1.0);
  CHECK(std::abs(model.phi_hat(0.0) - kTwoPiPow32Inv) < 1e-10);
  CHECK(std::abs(model.phi_hat(0.0) - 0.0634936) < 1e-7);
  CHECK(std::abs(model.phi_hat(1e-9) - model.phi_hat(0.0)) < 1e-12);
  // even function: flat to second order at the origin
  CHECK(std::abs(model.phi_hat(1e-4) - model.phi_hat(0.0)) < 1e-8);
}

TEST_CASE("spline cache agrees with direct quadrature") {
  const ChargeModel model(0.3, 1.0, 1.0);
  for (double k : {1e-4, 0.01, 0.3, 1.0, 2.7, 5.0, 7.99, 8.0, 13.0, 40.0}) {
    CHECK(std::abs(model.phi_hat(k) - model.phi_hat_direct(k)) < 1e-10);
  }
  // beyond the cached range the direct path serves values
  CHECK(model.phi_hat(model.cache_k_max() + 5.0) ==
        model.phi_hat_direct(model.cache_k_max() + 5.0));
}

TEST_CASE("phi_hat decays faster than any power (octave ratio test)") {
  const ChargeModel model(0.5, 1.0, 1.0);
  // sup of |phi_hat| over [k, 2k], sampled densely enough to straddle zeros
  auto octave_sup = [&](double k_lo) {
    double sup = 0.0;
    for (int i = 0; i <= 64; ++i)
      sup = std::max(sup, std::abs(model.phi_hat(
                              k_lo * std::pow(2.0, double(i) / 64.0))));
    return sup;
  };
  std::vector<double> sups;
  for (double k = 4.0; k <= 64.0; k *= 2.0) sups.push_back(octave_sup(k));
  // super-polynomial decay: the octave attenuation itself keeps strengthening
  for (std::size_t i = 0; i + 1 < sups.size(); ++i) {
    const double ratio = sups[i + 1] / sups[i];
    CHECK(ratio < 0.5);  // beats k^-1 per octave from the start
    if (i + 2 < sups.size()) CHECK(sups[i + 2] / sups[i + 1] < ratio);
  }
  CHECK(sups.back() / sups.front() < 1e-6);  // far faster than k^-3 overall
}

TEST_CASE("phi_hat at k = 1 against a 3-d Monte-Carlo transform oracle") {
  const ChargeModel model(0.5, 1.0, 1.0);
  // MC estimate of (2 pi)^(-3/2) int cos(k.x) phi(x) d3x over the support
  // ball, uniform sampling (the sine part vanishes by symmetry).
  oracles::Rng rng(0x5eed);
  const std::size_t n_samples = 400000;
  const double volume = 4.0 / 3.0 * M_PI;
  double sum = 0.0, sum2 = 0.0;
  std::size_t taken = 0;
  while (taken < n_samples) {
    const abraham::Vec3 x = rng.vec3();  // uniform in [-1,1]^3
    if (x.norm2() > 1.0) continue;       // rejection to the unit ball
    const double val = std::cos(x.z) * model.profile(x.norm());  // k = z-hat
    sum += val;
    sum2 += val * val;
    ++taken;
  }
  const double mean = sum / double(taken);
  const double var = sum2 / double(taken) - mean * mean;
  const double mc = kTwoPiPow32Inv * volume * mean;
  const double sigma =
      kTwoPiPow32Inv * volume * std::sqrt(var / double(taken));
  const double exact = model.phi_hat(1.0);
  CHECK(std::abs(mc - exact) < 3.0 * sigma);
  CHECK(sigma < 2e-4);  // the comparison is actually informative
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(ChargeModel(0.5, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ChargeModel(0.5, 1.0, -1.0), std::invalid_argument);
  const ChargeModel model(0.5, 1.0, 1.0);
  CHECK_THROWS_AS(model.phi_hat(-1.0), std::invalid_argument);
}
