#include "unimix/mcmc_uni.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "unimix/math.hpp"

namespace unimix {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_normal_prior(double x, double variance) {
  return log_norm_pdf(x, 0.0, std::sqrt(variance));
}

double log_gamma_prior(double x, double shape, double rate) {
  return (shape - 1.0) * std::log(x) - rate * x;  // up to a constant
}

}  // namespace

UniChainState init_uni_state(const Dataset& data, const PriorConfig& priors,
                             Rng& rng) {
  if (data.dim() != 1) throw std::invalid_argument("init_uni_state: need 1-d data");
  const std::size_t n = data.n();
  UniChainState st;
  const auto& ys = data.sorted[0];
  // midpoint of the two central order statistics, nudged off data values so
  // the latent representation stays defined
  double k0 = n >= 2 ? 0.5 * (ys[(n - 1) / 2] + ys[n / 2]) : ys[0] - 0.5;
  if (std::binary_search(ys.begin(), ys.end(), k0)) {
    double span = std::max(1.0, ys.back() - ys.front());
    k0 += 1e-9 * span;
  }
  st.kappa = k0;
  st.c = 1.0;
  st.sticks.M = 1.0;
  st.alloc.d.assign(n, 1);
  st.alloc.u.assign(n, 0.5);
  st.alloc.level.assign(n, 1);
  SliceSchedule sched;
  for (std::size_t i = 0; i < n; ++i) {
    st.alloc.u[i] = sample_slice(1, sched, rng, &st.alloc.level[i]);
  }
  int N = st.alloc.max_level();
  st.sticks.ensure_sticks(N, rng);
  st.mus.resize(N);
  for (auto& mu : st.mus) {
    do {
      mu = rng.normal(0.0, std::sqrt(priors.sigma_mu2));
    } while (mu == 0.0);
  }
  return st;
}

void resize_components_uni(UniChainState& st, int N, const PriorConfig& priors,
                           Rng& rng) {
  st.sticks.v.resize(std::min<std::size_t>(st.sticks.v.size(), N));
  st.sticks.ensure_sticks(N, rng);
  st.sticks.recompute_weights();
  while (static_cast<int>(st.mus.size()) > N) st.mus.pop_back();
  while (static_cast<int>(st.mus.size()) < N) {
    double mu;
    do {
      mu = rng.normal(0.0, std::sqrt(priors.sigma_mu2));
    } while (mu == 0.0);
    st.mus.push_back(mu);
  }
}

bool update_mu(int j, UniChainState& st, const Dataset& data,
               const PriorConfig& priors, double h_mu, Rng& rng) {
  const auto& y = data.cols[0];
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (st.alloc.d[i] == j) members.push_back(i);
  }
  double& mu = st.mus[j - 1];
  if (members.empty()) {
    do {
      mu = rng.normal(0.0, std::sqrt(priors.sigma_mu2));
    } while (mu == 0.0);
    return false;
  }
  double mu_star = mu + rng.normal(0.0, std::sqrt(h_mu));
  if (mu_star == 0.0) return false;  // excluded point, auto-reject
  double log_q = log_normal_prior(mu_star, priors.sigma_mu2) -
                 log_normal_prior(mu, priors.sigma_mu2);
  for (std::size_t i : members) {
    log_q += log_kernel_density(y[i], mu_star, st.c, st.kappa) -
             log_kernel_density(y[i], mu, st.c, st.kappa);
  }
  if (std::log(rng.uniform_pos()) <= log_q) {
    mu = mu_star;
    return true;
  }
  return false;
}

bool update_c(UniChainState& st, const Dataset& data, const PriorConfig& priors,
              double h_c, Rng& rng) {
  const auto& y = data.cols[0];
  double c_star = st.c * std::exp(rng.normal(0.0, std::sqrt(h_c)));
  if (!(c_star > 0.0) || !std::isfinite(c_star)) return false;
  // log-normal proposal Q(c*;c) = 1/c* x ..., so the ratio picks up c*/c
  double log_q = log_gamma_prior(c_star, priors.alpha_c, priors.beta_c) -
                 log_gamma_prior(st.c, priors.alpha_c, priors.beta_c) +
                 std::log(c_star) - std::log(st.c);
  for (std::size_t i = 0; i < y.size(); ++i) {
    double mu = st.mus[st.alloc.d[i] - 1];
    log_q += log_kernel_density(y[i], mu, c_star, st.kappa) -
             log_kernel_density(y[i], mu, st.c, st.kappa);
  }
  if (std::log(rng.uniform_pos()) <= log_q) {
    st.c = c_star;
    return true;
  }
  return false;
}

int kappa_window_size(int h, int n, int m) {
  int lo = std::max(-m, 1 - h);
  int hi = std::min(m, n - 1 - h);
  return hi >= lo ? hi - lo + 1 : 0;
}

KappaProposal propose_kappa_move(std::span<const double> ysorted,
                                 std::span<const int> dsorted, double kappa_cur,
                                 int m, Rng& rng) {
  KappaProposal prop;
  const int n = static_cast<int>(ysorted.size());
  if (n < 2 || m < 1) return prop;
  // h = rank (1-based count) of the largest order statistic below kappa
  int h = static_cast<int>(std::lower_bound(ysorted.begin(), ysorted.end(),
                                            kappa_cur) -
                           ysorted.begin());
  const int lo = std::max(-m, 1 - h);
  const int hi = std::min(m, n - 1 - h);
  if (hi < lo) return prop;
  prop.feasible = true;
  prop.s = rng.uniform_int(lo, hi);
  const int hs = h + prop.s;  // proposed interval is (y_(hs), y_(hs+1))
  const double a = ysorted[hs - 1];
  const double b = ysorted[hs];
  double fwd_len = std::max(b - a, 1e-12);
  prop.kappa_star = rng.uniform(a, b);
  if (b <= a) prop.kappa_star = a;  // tied neighbors: zero-length interval
  prop.log_fwd_prop = -std::log(static_cast<double>(kappa_window_size(h, n, m))) -
                      std::log(fwd_len);

  // reverse move: offset -s from rank hs back into (y_(h), y_(h+1))
  if (h >= 1 && h <= n - 1 && b > a) {
    double rev_len = std::max(ysorted[h] - ysorted[h - 1], 1e-12);
    prop.log_rev_prop =
        -std::log(static_cast<double>(kappa_window_size(hs, n, m))) -
        std::log(rev_len);
  } else {
    prop.log_rev_prop = kNegInf;  // current kappa outside the data range
  }

  prop.reversible = true;
  if (prop.s != 0 && (h < 1 || h > n - 1)) {
    // kappa outside the data range (initialization corner): the block rules
    // below have no donor cluster, and apply() rejects on log_rev_prop anyway
    prop.block_lo = 0;
    prop.block_hi = -1;
    prop.new_d = 0;
    prop.reversible = false;
    return prop;
  }
  if (prop.s > 0) {
    // ranks h+1..h+s (0-based h..hs-1) move to the cluster of y_(h)
    prop.block_lo = h;
    prop.block_hi = hs - 1;
    prop.new_d = dsorted[h - 1];
    for (int r = prop.block_lo; r <= prop.block_hi; ++r) {
      if (dsorted[r] != dsorted[hs]) prop.reversible = false;
    }
  } else if (prop.s < 0) {
    // ranks h+s+1..h (0-based hs..h-1) move to the cluster of y_(h+1)
    prop.block_lo = hs;
    prop.block_hi = h - 1;
    prop.new_d = dsorted[h];
    for (int r = prop.block_lo; r <= prop.block_hi; ++r) {
      if (dsorted[r] != dsorted[hs - 1]) prop.reversible = false;
    }
  } else {
    prop.block_lo = 0;
    prop.block_hi = -1;
    prop.new_d = 0;
  }
  return prop;
}

bool apply_kappa_move_uni(UniChainState& st, const Dataset& data,
                          const PriorConfig& priors, const McmcConfig& cfg,
                          const SliceSchedule& sched, Rng& rng) {
  const auto& ysorted = data.sorted[0];
  const auto& order = data.order[0];
  const std::size_t n = data.n();
  std::vector<int> dsorted(n);
  for (std::size_t r = 0; r < n; ++r) dsorted[r] = st.alloc.d[order[r]];

  KappaProposal prop = propose_kappa_move(ysorted, dsorted, st.kappa, cfg.m, rng);
  if (!prop.feasible) return false;
  if (!prop.reversible || !std::isfinite(prop.log_rev_prop)) return false;
  if (prop.kappa_star == st.kappa) return false;
  // keep the latent representation defined everywhere
  if (std::binary_search(ysorted.begin(), ysorted.end(), prop.kappa_star))
    return false;

  double log_q = prop.log_rev_prop - prop.log_fwd_prop +
                 log_normal_prior(prop.kappa_star, priors.sigma_kappa2) -
                 log_normal_prior(st.kappa, priors.sigma_kappa2);
  for (std::size_t r = 0; r < n; ++r) {
    const double yi = ysorted[r];
    int d_new = dsorted[r];
    if (static_cast<int>(r) >= prop.block_lo && static_cast<int>(r) <= prop.block_hi)
      d_new = prop.new_d;
    const int d_old = dsorted[r];
    log_q += log_kernel_density(yi, st.mus[d_new - 1], st.c, prop.kappa_star) -
             log_kernel_density(yi, st.mus[d_old - 1], st.c, st.kappa);
    if (d_new != d_old) {
      const std::size_t i = order[r];
      if (st.alloc.u[i] >= sched.xi(d_new)) return false;  // slice indicator
      log_q += st.sticks.log_w[d_new - 1] - sched.log_xi(d_new) -
               st.sticks.log_w[d_old - 1] + sched.log_xi(d_old);
    }
  }
  if (std::log(rng.uniform_pos()) <= log_q) {
    st.kappa = prop.kappa_star;
    for (int r = prop.block_lo; r <= prop.block_hi; ++r)
      st.alloc.d[order[r]] = prop.new_d;
    return true;
  }
  return false;
}

void update_allocations_uni(UniChainState& st, const Dataset& data,
                            const SliceSchedule& sched, Rng& rng) {
  const auto& y = data.cols[0];
  std::vector<double> log_mass;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const int Ni = std::min(st.alloc.level[i], st.truncation());
    log_mass.resize(Ni);
    for (int j = 1; j <= Ni; ++j) {
      log_mass[j - 1] = st.sticks.log_w[j - 1] - sched.log_xi(j) +
                        log_kernel_density(y[i], st.mus[j - 1], st.c, st.kappa);
    }
    int pick = sample_from_log_masses(log_mass, rng);
    if (pick >= 0) st.alloc.d[i] = pick + 1;
  }
}

void sweep_uni(UniChainState& st, const Dataset& data, const PriorConfig& priors,
               const McmcConfig& cfg, Rng& rng, MoveCounters* counters) {
  const std::size_t n = data.n();
  SliceSchedule sched{cfg.gamma};

  for (std::size_t i = 0; i < n; ++i) {
    st.alloc.u[i] = sample_slice(st.alloc.d[i], sched, rng, &st.alloc.level[i]);
  }
  const int N = st.alloc.max_level();
  resize_components_uni(st, N, priors, rng);

  if (cfg.stick_m_update) {
    st.sticks.M = update_m_sticks(st.sticks, N, priors.alpha_M, priors.beta_M, rng);
  } else {
    st.sticks.M = update_m_escobar_west(count_distinct(st.alloc.d),
                                        static_cast<int>(n), st.sticks.M,
                                        priors.alpha_M, priors.beta_M, rng);
  }
  update_sticks(st.sticks, occupancy_counts(st.alloc.d, N), N, rng);

  for (int j = 1; j <= N; ++j) {
    bool acc = update_mu(j, st, data, priors, cfg.h_mu, rng);
    if (counters) {
      ++counters->mu_total;
      counters->mu_accept += acc;
    }
  }

  bool c_acc = update_c(st, data, priors, cfg.h_c, rng);
  if (counters) {
    ++counters->c_total;
    counters->c_accept += c_acc;
  }

  update_allocations_uni(st, data, sched, rng);

  bool k_acc = apply_kappa_move_uni(st, data, priors, cfg, sched, rng);
  if (counters) {
    ++counters->kappa_total;
    counters->kappa_accept += k_acc;
  }
}

}  // namespace unimix
