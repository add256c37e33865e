#include "unimix/kernel.hpp"

#include <limits>

namespace unimix {

double partial_mean_integral(double xi, double mu, double sigma) {
  if (!std::isfinite(mu)) throw std::domain_error("partial_mean_integral: mu not finite");
  if (!(sigma > 0.0)) throw std::domain_error("partial_mean_integral: sigma must be > 0");
  if (std::isnan(xi)) throw std::domain_error("partial_mean_integral: xi is NaN");
  if (xi == 0.0) return 0.0;
  double z0 = -mu / sigma;
  double cdf_hi, pdf_hi;
  if (std::isinf(xi)) {
    cdf_hi = xi > 0 ? 1.0 : 0.0;
    pdf_hi = 0.0;
  } else {
    double z1 = (xi - mu) / sigma;
    cdf_hi = norm_cdf(z1);
    pdf_hi = norm_pdf(z1);
  }
  double v = mu * (cdf_hi - norm_cdf(z0)) + sigma * (norm_pdf(z0) - pdf_hi);
  return std::abs(v);
}

double kernel_density(double y, double mu, double c, double kappa) {
  double sigma = sigma_from(mu, c);
  double u = y - kappa;
  if (u == 0.0) {
    double inf = std::numeric_limits<double>::infinity();
    return partial_mean_integral(mu > 0 ? inf : -inf, mu, sigma);
  }
  return partial_mean_integral(1.0 / u, mu, sigma);
}

double kernel_density(double y, const KernelParams& p) {
  return kernel_density(y, p.mu, p.c, p.kappa);
}

double log_kernel_density(double y, double mu, double c, double kappa) {
  double f = kernel_density(y, mu, c, kappa);
  if (f > 0.0) return std::log(f);
  double u = y - kappa;
  if (u == 0.0) return -std::numeric_limits<double>::infinity();
  // integral_0^xi s g(s) ds ~ (xi^2/2) g(xi/2) for small xi; for larger xi
  // the true value is even smaller than double can hold, and the ballpark
  // only ever feeds comparisons between astronomically rejected states.
  double xi = 1.0 / u;
  double sigma = sigma_from(mu, c);
  return std::log(xi * xi / 2.0) + log_norm_pdf(0.5 * xi, mu, sigma);
}

double log_latent_density(double y, double x, double mu, double c, double kappa) {
  double u = y - kappa;
  if (u == 0.0) throw std::domain_error("latent density undefined at y == kappa");
  if (x <= 0.0) return -std::numeric_limits<double>::infinity();
  double sigma = sigma_from(mu, c);
  return std::log(x) - 2.0 * std::log(std::abs(u)) + log_norm_pdf(x / u, mu, sigma);
}

double latent_joint_density(double y, double x, const KernelParams& p) {
  if (x < 0.0 || x > 1.0)
    throw std::invalid_argument("latent_joint_density: x outside [0,1]");
  if (y == p.kappa) throw std::domain_error("latent_joint_density: y == kappa");
  if (x == 0.0) return 0.0;
  return std::exp(log_latent_density(y, x, p.mu, p.c, p.kappa));
}

double latent_maximizer(double y, double mu, double c, double kappa) {
  double u = y - kappa;
  // positive root of x^2 - mu*u*x - sigma^2*u^2 = 0, sigma^2 = mu^2/c
  double root = 0.5 * mu * u + std::abs(u) * std::abs(mu) * std::sqrt(1.0 / c + 0.25);
  return std::min(1.0, root);
}

double latent_maximizer(double y, const KernelParams& p) {
  return latent_maximizer(y, p.mu, p.c, p.kappa);
}

double sample_kernel(const KernelParams& p, Rng& rng) {
  double z;
  do {
    z = rng.normal(p.mu, p.sigma);
  } while (z == 0.0);
  return p.kappa + rng.uniform() / z;
}

double mixture_density(double y, const std::vector<double>& weights,
                       const std::vector<double>& mus, double c, double kappa) {
  if (weights.size() != mus.size())
    throw std::invalid_argument("mixture_density: weights/mus size mismatch");
  double f = 0.0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    f += weights[j] * kernel_density(y, mus[j], c, kappa);
  }
  return f;
}

}  // namespace unimix
