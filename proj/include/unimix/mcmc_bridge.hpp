#ifndef UNIMIX_MCMC_BRIDGE_HPP
#define UNIMIX_MCMC_BRIDGE_HPP

#include "unimix/mcmc_uni.hpp"

namespace unimix {

// Univariate sampler that keeps the latent x = (x_1..x_n) in the state,
// mirroring what the multivariate case forces.
struct BridgeChainState {
  UniChainState base;
  std::vector<double> x;  // in (0,1], one per observation
};

BridgeChainState init_bridge_state(const Dataset& data, const PriorConfig& priors,
                                   Rng& rng);

bool update_mu_latent(int j, BridgeChainState& st, const Dataset& data,
                      const PriorConfig& priors, double h_mu, Rng& rng);

// c | x, mu, kappa, y ~ Gamma(n/2 + alpha_c,
//                             beta_c + 1/2 sum ((x_i/(y_i-kappa) - mu_di)/mu_di)^2)
double gibbs_c(BridgeChainState& st, const Dataset& data,
               const PriorConfig& priors, Rng& rng);

// Exact draw from f(x | y, mu, c, kappa) by rejection from U(0,1],
// bounded by the latent density at its maximizer.
double sample_x(double y, double mu, double c, double kappa, Rng& rng,
                long* trials = nullptr);

// Same target through adaptive rejection sampling (the 7.2 building block).
double ars_sample_x(double y, double mu, double c, double kappa, Rng& rng);

void sweep_bridge(BridgeChainState& st, const Dataset& data,
                  const PriorConfig& priors, const McmcConfig& cfg, Rng& rng,
                  MoveCounters* counters = nullptr);

}  // namespace unimix

#endif
