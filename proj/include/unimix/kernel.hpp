#ifndef UNIMIX_KERNEL_HPP
#define UNIMIX_KERNEL_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "unimix/math.hpp"
#include "unimix/rng.hpp"

namespace unimix {

// One mixture component: Y = kappa + X/Z, X ~ U(0,1), Z ~ N(mu, mu^2/c).
// c = (mu/sigma)^2 is held common across components; sigma is derived.
struct KernelParams {
  double mu;
  double c;
  double kappa;
  double sigma;

  KernelParams(double mu_, double c_, double kappa_)
      : mu(mu_), c(c_), kappa(kappa_), sigma(std::abs(mu_) / std::sqrt(c_)) {
    if (!(c_ > 0.0)) throw std::invalid_argument("KernelParams: c must be > 0");
    if (mu_ == 0.0 || !std::isfinite(mu_))
      throw std::invalid_argument("KernelParams: mu must be finite and nonzero");
    if (!std::isfinite(kappa_))
      throw std::invalid_argument("KernelParams: kappa must be finite");
  }
};

inline double sigma_from(double mu, double c) {
  return std::abs(mu) / std::sqrt(c);
}

// | integral_0^xi s N(ds | mu, sigma^2) |, with xi = +-inf supported.
double partial_mean_integral(double xi, double mu, double sigma);

// Density of Y at y. At y == kappa returns the one-sided limit on the side
// that Z's sign points to (the integral to sign(mu)*inf).
double kernel_density(double y, const KernelParams& p);
double kernel_density(double y, double mu, double c, double kappa);

// log kernel density; falls back to a small-xi expansion when the closed form
// underflows to zero, so MH ratios stay usable for far-out observations.
double log_kernel_density(double y, double mu, double c, double kappa);

// Joint density f(y, x) = (x / (y-kappa)^2) N(x/(y-kappa) | mu, sigma^2);
// integrating x over [0,1] recovers kernel_density exactly.
double latent_joint_density(double y, double x, const KernelParams& p);
double log_latent_density(double y, double x, double mu, double c, double kappa);

// argmax over x in (0,1] of latent_joint_density(y, x).
double latent_maximizer(double y, const KernelParams& p);
double latent_maximizer(double y, double mu, double c, double kappa);

double sample_kernel(const KernelParams& p, Rng& rng);

double mixture_density(double y, const std::vector<double>& weights,
                       const std::vector<double>& mus, double c, double kappa);

}  // namespace unimix

#endif
