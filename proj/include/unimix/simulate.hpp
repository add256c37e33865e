#ifndef UNIMIX_SIMULATE_HPP
#define UNIMIX_SIMULATE_HPP

#include <array>
#include <span>
#include <vector>

#include "unimix/data.hpp"
#include "unimix/rng.hpp"

namespace unimix {

// Reference data generators for the simulated experiments and test fixtures.

// N(100, 100^2).
std::vector<double> simulate_model_a(std::size_t n, Rng& rng);

// Gamma with shape 3; rate 10 by default (mean 0.3), scale 10 when
// rate_convention is false (mean 30).
std::vector<double> simulate_model_b(std::size_t n, Rng& rng,
                                     bool rate_convention = true);

// Bivariate normal, mean (30, 60), covariance 10 * [[1, .5], [.5, 1]].
std::vector<std::array<double, 2>> simulate_biv_normal(std::size_t n, Rng& rng);

// Draws from the mixture model itself: component j ~ weights, then
// y = kappa + x/z with z ~ N(mu_j, mu_j^2/c).
std::vector<double> simulate_generative_kernel(std::span<const double> weights,
                                               std::span<const double> mus,
                                               double c, double kappa,
                                               std::size_t n, Rng& rng);

enum class DependenceSide { Z, X };

struct DependenceRow {
  double rho;       // imposed Gaussian-scale correlation, in (-1, 1)
  double corr_lo;   // 2.5% quantile of empirical corr(Y1, Y2) over reps
  double corr_med;  // 50%
  double corr_hi;   // 97.5%
};

// Y_l = kappa_l + X_l/Z_l with the imposed correlation either on the normal
// pair (Z1, Z2) or on the uniform pair (X1, X2) through the Gaussian copula;
// the unlinked side stays independent. c = 1 per dimension, kappa = (0, 0).
std::vector<DependenceRow> dependence_study(DependenceSide side,
                                            std::array<double, 2> mu,
                                            std::span<const double> grid,
                                            int reps, std::size_t n, Rng& rng);

// One rep's empirical corr(Y1, Y2); exposed for the sign-configuration tests.
double dependence_rep_corr(DependenceSide side, std::array<double, 2> mu,
                           double rho, std::size_t n, Rng& rng);

Dataset to_dataset(const std::vector<double>& y, const std::string& name = "y");
Dataset to_dataset(const std::vector<std::array<double, 2>>& y,
                   const std::string& name1 = "y1",
                   const std::string& name2 = "y2");

}  // namespace unimix

#endif
