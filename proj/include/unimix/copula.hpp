#ifndef UNIMIX_COPULA_HPP
#define UNIMIX_COPULA_HPP

#include <utility>

#include "unimix/rng.hpp"

namespace unimix {

// Bivariate Gaussian copula, correlation rho in [0,1).

double log_copula_density(double x1, double x2, double rho);
double copula_density(double x1, double x2, double rho);

// argmax over one coordinate of copula_density with the other fixed:
// Phi(Phi^{-1}(x_other)/rho); flat copula at rho == 0 returns 0.5.
double copula_mode_given(double x_other, double rho);

// (Phi(z1), Phi(z2)) with (z1,z2) standard bivariate normal, correlation rho.
std::pair<double, double> sample_copula_pair(double rho, Rng& rng);

// Gaussian-scale conditional draw: x2 | x1 with q2 ~ N(rho*q1, 1-rho^2).
double sample_copula_conditional(double x_given, double rho, Rng& rng);

}  // namespace unimix

#endif
