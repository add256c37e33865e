#ifndef UNIMIX_MCMC_UNI_HPP
#define UNIMIX_MCMC_UNI_HPP

#include <span>
#include <vector>

#include "unimix/config.hpp"
#include "unimix/data.hpp"
#include "unimix/dpmix.hpp"
#include "unimix/kernel.hpp"
#include "unimix/rng.hpp"

namespace unimix {

struct UniChainState {
  StickState sticks;
  AllocationState alloc;
  std::vector<double> mus;  // component means, size = truncation level
  double c = 1.0;
  double kappa = 0.0;

  int truncation() const { return static_cast<int>(mus.size()); }
};

struct MoveCounters {
  long mu_accept = 0, mu_total = 0;
  long c_accept = 0, c_total = 0;
  long kappa_accept = 0, kappa_total = 0;
  long rho_accept = 0, rho_total = 0;
  long x_copula_fallbacks = 0, x_updates = 0;
};

UniChainState init_uni_state(const Dataset& data, const PriorConfig& priors,
                             Rng& rng);

// Keeps mus/sticks sized to the truncation level; new components from the prior.
void resize_components_uni(UniChainState& st, int N, const PriorConfig& priors,
                           Rng& rng);

// Random-walk MH for mu_j (1-based j); empty components draw from the prior.
// Returns true when the state changed by an accepted MH step.
bool update_mu(int j, UniChainState& st, const Dataset& data,
               const PriorConfig& priors, double h_mu, Rng& rng);

// Log random-walk MH for c.
bool update_c(UniChainState& st, const Dataset& data, const PriorConfig& priors,
              double h_c, Rng& rng);

// The order-statistics kappa proposal with joint cluster reassignment.
struct KappaProposal {
  bool feasible = false;    // a move could be proposed at all
  int s = 0;
  double kappa_star = 0.0;
  int block_lo = 0, block_hi = -1;  // 0-based sorted ranks reassigned (inclusive)
  int new_d = 0;                    // component the block moves to
  double log_fwd_prop = 0.0;        // log Q(kappa*, d*; kappa, d)
  double log_rev_prop = 0.0;        // log Q(kappa, d; kappa*, d*)
  bool reversible = false;          // reverse rule reconstructs d exactly
};

// ysorted ascending; dsorted[r] is the allocation of the rank-r observation.
KappaProposal propose_kappa_move(std::span<const double> ysorted,
                                 std::span<const int> dsorted, double kappa_cur,
                                 int m, Rng& rng);

// Cardinality of the edge-truncated offset window at rank h (0-based count of
// data below kappa); exposed for the enumeration tests.
int kappa_window_size(int h, int n, int m);

bool apply_kappa_move_uni(UniChainState& st, const Dataset& data,
                          const PriorConfig& priors, const McmcConfig& cfg,
                          const SliceSchedule& sched, Rng& rng);

// Gibbs allocations d_i over j = 1..N_i with the marginal kernel.
void update_allocations_uni(UniChainState& st, const Dataset& data,
                            const SliceSchedule& sched, Rng& rng);

void sweep_uni(UniChainState& st, const Dataset& data, const PriorConfig& priors,
               const McmcConfig& cfg, Rng& rng, MoveCounters* counters = nullptr);

}  // namespace unimix

#endif
