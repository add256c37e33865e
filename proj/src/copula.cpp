#include "unimix/copula.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "unimix/math.hpp"

namespace unimix {

namespace {

void check_rho(double rho) {
  if (!(rho >= 0.0 && rho < 1.0))
    throw std::invalid_argument("copula: rho must be in [0,1)");
}

constexpr double kClamp = 1e-15;

}  // namespace

double log_copula_density(double x1, double x2, double rho) {
  check_rho(rho);
  if (!(x1 > 0.0 && x1 < 1.0 && x2 > 0.0 && x2 < 1.0))
    throw std::domain_error("copula_density: x on boundary of (0,1)");
  if (rho == 0.0) return 0.0;
  double q1 = norm_quantile(x1);
  double q2 = norm_quantile(x2);
  double omr2 = 1.0 - rho * rho;
  double quad = (rho * rho * (q1 * q1 + q2 * q2) - 2.0 * rho * q1 * q2) / omr2;
  return -0.5 * std::log(omr2) - 0.5 * quad;
}

double copula_density(double x1, double x2, double rho) {
  return std::exp(log_copula_density(x1, x2, rho));
}

double copula_mode_given(double x_other, double rho) {
  check_rho(rho);
  if (!(x_other > 0.0 && x_other < 1.0))
    throw std::domain_error("copula_mode_given: x_other on boundary");
  if (rho == 0.0) return 0.5;
  // stationarity of the quadratic in q1: rho^2 q1 = rho q2
  return norm_cdf(norm_quantile(x_other) / rho);
}

std::pair<double, double> sample_copula_pair(double rho, Rng& rng) {
  check_rho(rho);
  double z1 = rng.normal();
  double z2 = rho * z1 + std::sqrt(1.0 - rho * rho) * rng.normal();
  double x1 = std::clamp(norm_cdf(z1), kClamp, 1.0 - kClamp);
  double x2 = std::clamp(norm_cdf(z2), kClamp, 1.0 - kClamp);
  return {x1, x2};
}

double sample_copula_conditional(double x_given, double rho, Rng& rng) {
  check_rho(rho);
  double q = norm_quantile(std::clamp(x_given, kClamp, 1.0 - kClamp));
  double z = rng.normal(rho * q, std::sqrt(1.0 - rho * rho));
  return std::clamp(norm_cdf(z), kClamp, 1.0 - kClamp);
}

}  // namespace unimix
