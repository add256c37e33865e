#ifndef UNIMIX_CONFIG_HPP
#define UNIMIX_CONFIG_HPP

#include <cstdint>
#include <string>

namespace unimix {

struct PriorConfig {
  double sigma_mu2 = 10.0;      // variance of the N(0, sigma_mu^2) prior on mu_j
  double sigma_kappa2 = 10000.0;
  double alpha_c = 0.1;
  double beta_c = 0.1;
  double alpha_M = 0.01;
  double beta_M = 0.01;
};

struct McmcConfig {
  double h_mu = 0.25;   // RW proposal variance for mu
  double h_c = 0.25;    // log-RW proposal variance for c
  double h_rho = 0.5;   // logit-RW proposal variance for rho
  int m = 3;            // kappa move window
  int trial_cap = 100;  // copula-proposal trials before the ARS fallback
  double gamma = 0.01;  // slice bound rate, xi_j = exp(-gamma j)
  // Bivariate (d, kappa) stage: false = product of marginal closed-form
  // kernels (the printed algorithm); true = conditional-on-x latent kernels,
  // which leave the augmented posterior exactly invariant.
  bool latent_conditional_dk = false;
  // M step: true = stick-conditional Gibbs (exact for the slice state);
  // false = the two-step Beta/Gamma update keyed on the cluster count.
  bool stick_m_update = true;
};

enum class FitModel { uni_marginal, uni_bridge, bivariate };

struct ChainConfig {
  long iterations = 30000;
  long burn_in = 2000;
  long thin = 10;
  std::uint64_t seed = 1;
  int n_chains = 1;
};

struct RunConfig {
  FitModel model = FitModel::uni_marginal;
  PriorConfig priors;
  McmcConfig tuning;
  ChainConfig chain;
  std::string input_path;
  std::string output_dir;
  std::string column1;  // empty: first numeric column
  std::string column2;  // set for bivariate fits
};

// Chain-length presets matching the reported experiments.
inline ChainConfig paper_univariate_chain() {
  return {300000, 10000, 100, 1, 1};
}
inline ChainConfig paper_bivariate_chain() {
  return {75000, 5000, 50, 1, 1};
}

}  // namespace unimix

#endif
