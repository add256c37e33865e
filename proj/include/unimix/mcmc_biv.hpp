#ifndef UNIMIX_MCMC_BIV_HPP
#define UNIMIX_MCMC_BIV_HPP

#include <array>
#include <optional>
#include <utility>

#include "unimix/copula.hpp"
#include "unimix/mcmc_bridge.hpp"

namespace unimix {

// Bivariate chain: per-dimension kernels coupled through the Gaussian copula
// on the latent x, one shared allocation per observation.
struct BivChainState {
  StickState sticks;
  AllocationState alloc;
  std::vector<std::array<double, 2>> mus;  // [component][dim]
  std::array<double, 2> c{1.0, 1.0};
  std::array<double, 2> kappa{0.0, 0.0};
  std::vector<std::array<double, 2>> x;    // [obs][dim]
  double rho = 0.5;

  int truncation() const { return static_cast<int>(mus.size()); }
};

BivChainState init_biv_state(const Dataset& data, const PriorConfig& priors,
                             Rng& rng);

// The full conditional of one observation's latent pair, spelled out so the
// x samplers can be exercised standalone.
struct XPairTarget {
  std::array<double, 2> y;
  std::array<double, 2> mu;
  std::array<double, 2> c;
  std::array<double, 2> kappa;
  double rho;

  double log_latent(int dim, double x) const {
    return log_latent_density(y[dim], x, mu[dim], c[dim], kappa[dim]);
  }
  // log of latent_1 * latent_2 * copula, the target density up to a constant
  double log_target(double x1, double x2) const;
};

// 7.1: propose from the copula, accept against the per-dimension latent
// bounds. Exact draws; empty when trial_cap is exhausted.
std::optional<std::pair<double, double>> sample_x_pair_copula(
    const XPairTarget& t, int trial_cap, Rng& rng, long* trials = nullptr);

// 7.2: per-dimension ARS draws from the latents, accepted against the current
// pair through the copula-density ratio (an independence MH step, so the
// exact full conditional stays invariant).
std::pair<double, double> sample_x_pair_ars(const XPairTarget& t,
                                            std::pair<double, double> current,
                                            Rng& rng, bool* accepted = nullptr);

// The combined sampler: 7.1 until acceptance or trial_cap, then 7.2.
std::pair<double, double> sample_x_pair(const XPairTarget& t,
                                        std::pair<double, double> current,
                                        int trial_cap, Rng& rng,
                                        MoveCounters* counters = nullptr);

bool update_mu_biv(int dim, int j, BivChainState& st, const Dataset& data,
                   const PriorConfig& priors, double h_mu, Rng& rng);

double gibbs_c_biv(int dim, BivChainState& st, const Dataset& data,
                   const PriorConfig& priors, Rng& rng);

// Logit random-walk MH for the copula correlation.
bool update_rho(BivChainState& st, double h_rho, Rng& rng);

// Order-statistics kappa move on dimension `dim`; reassignments update the
// shared d and the acceptance ratio covers both dimensions' kernel terms.
bool update_kappa_biv(int dim, BivChainState& st, const Dataset& data,
                      const PriorConfig& priors, const McmcConfig& cfg,
                      Rng& rng);

void update_allocations_biv(BivChainState& st, const Dataset& data,
                            const McmcConfig& cfg, const SliceSchedule& sched,
                            Rng& rng);

void sweep_biv(BivChainState& st, const Dataset& data, const PriorConfig& priors,
               const McmcConfig& cfg, Rng& rng, MoveCounters* counters = nullptr);

XPairTarget make_x_target(const BivChainState& st, const Dataset& data,
                          std::size_t i);

}  // namespace unimix

#endif
