#include "unimix/dpmix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_set>

#include "unimix/math.hpp"

namespace unimix {

double SliceSchedule::xi(int j) const {
  if (j < 1) throw std::invalid_argument("xi: indices start at 1");
  return std::exp(-gamma * j);
}

int SliceSchedule::level_for(double u) const {
  if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument("level_for: u outside (0,1)");
  return static_cast<int>(std::floor(-std::log(u) / gamma));
}

void StickState::recompute_weights() {
  w.resize(v.size());
  log_w.resize(v.size());
  double log_remaining = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    log_w[j] = std::log(v[j]) + log_remaining;
    w[j] = std::exp(log_w[j]);
    log_remaining += std::log1p(-v[j]);
  }
}

void StickState::ensure_sticks(std::size_t n, Rng& rng) {
  if (v.size() >= n) return;
  while (v.size() < n) v.push_back(rng.beta(1.0, M));
  recompute_weights();
}

int AllocationState::max_level() const {
  return level.empty() ? 0 : *std::max_element(level.begin(), level.end());
}

int AllocationState::max_d() const {
  return d.empty() ? 0 : *std::max_element(d.begin(), d.end());
}

double sample_slice(int d_i, const SliceSchedule& sched, Rng& rng, int* level_out) {
  if (d_i < 1) throw std::invalid_argument("sample_slice: d_i must be >= 1");
  double u;
  do {
    u = rng.uniform(0.0, sched.xi(d_i));
  } while (u <= 0.0);
  if (level_out) *level_out = sched.level_for(u);
  return u;
}

void update_sticks(StickState& sticks, const std::vector<int>& counts, int N,
                   Rng& rng) {
  if (static_cast<int>(counts.size()) < N)
    throw std::invalid_argument("update_sticks: counts shorter than N");
  sticks.v.resize(N);
  long tail = 0;
  for (int j = 0; j < N; ++j) tail += counts[j];
  for (int j = 0; j < N; ++j) {
    tail -= counts[j];
    sticks.v[j] = rng.beta(1.0 + counts[j], sticks.M + tail);
  }
  sticks.recompute_weights();
}

double update_m_escobar_west(int k, int n, double M_cur, double alpha_M,
                             double beta_M, Rng& rng) {
  if (k < 1 || n < 1) throw std::invalid_argument("update_m: need k >= 1 and n >= 1");
  double nu;
  do {
    nu = rng.beta(M_cur, static_cast<double>(n));
  } while (nu <= 0.0 || nu >= 1.0);
  return rng.gamma(alpha_M + k, beta_M - std::log(nu));
}

double update_m_sticks(const StickState& sticks, int N, double alpha_M,
                       double beta_M, Rng& rng) {
  if (static_cast<int>(sticks.v.size()) < N)
    throw std::invalid_argument("update_m_sticks: fewer than N sticks");
  double s = 0.0;
  for (int j = 0; j < N; ++j) s -= std::log1p(-sticks.v[j]);
  return rng.gamma(alpha_M + N, beta_M + s);
}

int sample_from_log_masses(std::span<const double> log_mass, Rng& rng) {
  double lse = log_sum_exp(log_mass);
  if (!std::isfinite(lse)) return -1;
  double target = rng.uniform();
  double cum = 0.0;
  for (std::size_t j = 0; j < log_mass.size(); ++j) {
    cum += std::exp(log_mass[j] - lse);
    if (target <= cum) return static_cast<int>(j);
  }
  return static_cast<int>(log_mass.size()) - 1;
}

int sample_weight_index(StickState& sticks, Rng& rng) {
  double target = rng.uniform();
  double cum = 0.0;
  std::size_t j = 0;
  while (true) {
    if (j >= sticks.v.size()) sticks.ensure_sticks(j + 1, rng);
    cum += sticks.w[j];
    ++j;
    if (target <= cum) return static_cast<int>(j);
    if (j > 100000) return static_cast<int>(j);  // sum of sticks -> 1 a.s.
  }
}

int count_distinct(const std::vector<int>& d) {
  std::unordered_set<int> s(d.begin(), d.end());
  return static_cast<int>(s.size());
}

std::vector<int> occupancy_counts(const std::vector<int>& d, int n_components) {
  std::vector<int> counts(n_components, 0);
  for (int di : d) {
    if (di >= 1 && di <= n_components) ++counts[di - 1];
  }
  return counts;
}

}  // namespace unimix
