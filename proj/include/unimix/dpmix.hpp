#ifndef UNIMIX_DPMIX_HPP
#define UNIMIX_DPMIX_HPP

#include <span>
#include <vector>

#include "unimix/rng.hpp"

namespace unimix {

// Deterministic slice bounds xi_j = exp(-gamma j), j >= 1.
struct SliceSchedule {
  double gamma = 0.01;

  double xi(int j) const;
  double log_xi(int j) const { return -gamma * j; }
  // N_i = max{ j : xi_j > u }
  int level_for(double u) const;
};

// Stick-breaking state: w_1 = v_1, w_j = v_j prod_{l<j} (1 - v_l).
struct StickState {
  std::vector<double> v;
  std::vector<double> w;
  std::vector<double> log_w;
  double M = 1.0;

  void recompute_weights();
  // Extend v with Beta(1, M) prior draws until at least n sticks exist.
  void ensure_sticks(std::size_t n, Rng& rng);
};

struct AllocationState {
  std::vector<int> d;      // component indicator per observation, 1-based
  std::vector<double> u;   // slice variable per observation
  std::vector<int> level;  // N_i = max{j : xi_j > u_i}

  int max_level() const;
  int max_d() const;
};

// u_i ~ U(0, xi_{d_i}); also reports the implied truncation level N_i.
double sample_slice(int d_i, const SliceSchedule& sched, Rng& rng, int* level_out);

// Conjugate full conditional v_j ~ Beta(1 + n_j, M + sum_{l>j} n_l), j <= N.
void update_sticks(StickState& sticks, const std::vector<int>& counts, int N,
                   Rng& rng);

// Two-step update keyed on the number of distinct allocations:
// nu ~ Beta(M_cur, n), then M ~ Gamma(alpha_M + k, beta_M - log(nu)).
double update_m_escobar_west(int k, int n, double M_cur, double alpha_M,
                             double beta_M, Rng& rng);

// Gibbs draw of M given the instantiated sticks v_1..v_N:
// M ~ Gamma(alpha_M + N, beta_M - sum_j log(1 - v_j)).
double update_m_sticks(const StickState& sticks, int N, double alpha_M,
                       double beta_M, Rng& rng);

// Draw an index from unnormalized log masses; returns a 0-based index,
// or -1 when every mass is degenerate (caller keeps the current value).
int sample_from_log_masses(std::span<const double> log_mass, Rng& rng);

// Component draw proportional to the stick weights, extending the sticks
// from the prior past the current truncation as needed. Returns 1-based j.
int sample_weight_index(StickState& sticks, Rng& rng);

int count_distinct(const std::vector<int>& d);
std::vector<int> occupancy_counts(const std::vector<int>& d, int n_components);

}  // namespace unimix

#endif
