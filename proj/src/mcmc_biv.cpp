#include "unimix/mcmc_biv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "unimix/math.hpp"

namespace unimix {

namespace {

constexpr double kInterior = 1e-15;

double clamp_interior(double x) {
  return std::clamp(x, kInterior, 1.0 - kInterior);
}

double log_normal_prior(double v, double variance) {
  return log_norm_pdf(v, 0.0, std::sqrt(variance));
}

double draw_nonzero_mu(double sigma_mu2, Rng& rng) {
  double mu;
  do {
    mu = rng.normal(0.0, std::sqrt(sigma_mu2));
  } while (mu == 0.0);
  return mu;
}

}  // namespace

double XPairTarget::log_target(double x1, double x2) const {
  return log_latent(0, x1) + log_latent(1, x2) +
         log_copula_density(clamp_interior(x1), clamp_interior(x2), rho);
}

BivChainState init_biv_state(const Dataset& data, const PriorConfig& priors,
                             Rng& rng) {
  if (data.dim() != 2) throw std::invalid_argument("init_biv_state: need 2-d data");
  const std::size_t n = data.n();
  BivChainState st;
  for (int l = 0; l < 2; ++l) {
    const auto& ys = data.sorted[l];
    double k0 = n >= 2 ? 0.5 * (ys[(n - 1) / 2] + ys[n / 2]) : ys[0] - 0.5;
    if (std::binary_search(ys.begin(), ys.end(), k0)) {
      k0 += 1e-9 * std::max(1.0, ys.back() - ys.front());
    }
    st.kappa[l] = k0;
  }
  st.rho = 0.5;
  st.sticks.M = 1.0;

  // Start near the layered representation the model uses for smooth joint
  // densities: group observations by the sign quadrant of (y - kappa) and,
  // within a quadrant, by the magnitude of the first coordinate; give each
  // group a mu matched to its members' 1/(y - kappa) scale, a concentrated
  // Z (large c), and latents chosen so z = x/(y - kappa) sits at mu. A
  // diffuse single-cluster start needs very long burn-in to find this mode.
  std::vector<int> group(n);
  {
    std::vector<std::vector<std::size_t>> quad(4);
    for (std::size_t i = 0; i < n; ++i) {
      int q = (data.cols[0][i] > st.kappa[0] ? 0 : 1) +
              2 * (data.cols[1][i] > st.kappa[1] ? 0 : 1);
      quad[q].push_back(i);
    }
    int next = 0;
    for (auto& members : quad) {
      if (members.empty()) continue;
      std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(data.cols[0][a] - st.kappa[0]) <
               std::abs(data.cols[0][b] - st.kappa[0]);
      });
      const std::size_t tiers = 1;
      for (std::size_t r = 0; r < members.size(); ++r)
        group[members[r]] = next + static_cast<int>(r * tiers / members.size());
      next += static_cast<int>(tiers);
    }
  }
  st.c = {50.0, 50.0};
  st.alloc.d.resize(n);
  st.alloc.u.resize(n);
  st.alloc.level.resize(n);
  SliceSchedule sched;
  for (std::size_t i = 0; i < n; ++i) {
    st.alloc.d[i] = group[i] + 1;
    st.alloc.u[i] = sample_slice(st.alloc.d[i], sched, rng, &st.alloc.level[i]);
  }
  const int N = std::max(st.alloc.max_d(), st.alloc.max_level());
  st.sticks.ensure_sticks(N, rng);
  st.mus.resize(N);
  for (auto& mu : st.mus) {
    mu[0] = draw_nonzero_mu(priors.sigma_mu2, rng);
    mu[1] = draw_nonzero_mu(priors.sigma_mu2, rng);
  }
  for (int j = 0; j < N; ++j) {
    for (int l = 0; l < 2; ++l) {
      std::vector<double> recips;
      for (std::size_t i = 0; i < n; ++i) {
        if (group[i] == j)
          recips.push_back(1.0 / (data.cols[l][i] - st.kappa[l]));
      }
      if (recips.empty()) continue;
      std::nth_element(recips.begin(), recips.begin() + recips.size() / 2,
                       recips.end());
      double m = 0.5 * recips[recips.size() / 2];
      if (m != 0.0 && std::isfinite(m)) st.mus[j][l] = m;
    }
  }
  st.x.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (int l = 0; l < 2; ++l) {
      double xi = st.mus[group[i]][l] * (data.cols[l][i] - st.kappa[l]);
      st.x[i][l] = std::clamp(xi, 1e-6, 1.0);
    }
  }
  return st;
}

namespace {

void resize_components_biv(BivChainState& st, int N, const PriorConfig& priors,
                           Rng& rng) {
  st.sticks.v.resize(std::min<std::size_t>(st.sticks.v.size(), N));
  st.sticks.ensure_sticks(N, rng);
  st.sticks.recompute_weights();
  while (static_cast<int>(st.mus.size()) > N) st.mus.pop_back();
  while (static_cast<int>(st.mus.size()) < N) {
    st.mus.push_back({draw_nonzero_mu(priors.sigma_mu2, rng),
                      draw_nonzero_mu(priors.sigma_mu2, rng)});
  }
}

}  // namespace

std::optional<std::pair<double, double>> sample_x_pair_copula(
    const XPairTarget& t, int trial_cap, Rng& rng, long* trials) {
  double log_bound = 0.0;
  for (int l = 0; l < 2; ++l) {
    double xhat = latent_maximizer(t.y[l], t.mu[l], t.c[l], t.kappa[l]);
    log_bound += t.log_latent(l, xhat);
  }
  for (int trial = 1; trial <= trial_cap; ++trial) {
    auto [x1, x2] = sample_copula_pair(t.rho, rng);
    double log_ratio = t.log_latent(0, x1) + t.log_latent(1, x2) - log_bound;
    if (log_ratio > 1e-9)
      throw std::runtime_error("sample_x_pair_copula: dominating bound violated");
    if (std::log(rng.uniform_pos()) <= log_ratio) {
      if (trials) *trials = trial;
      return std::make_pair(x1, x2);
    }
  }
  if (trials) *trials = trial_cap;
  return std::nullopt;
}

std::pair<double, double> sample_x_pair_ars(const XPairTarget& t,
                                            std::pair<double, double> current,
                                            Rng& rng, bool* accepted) {
  double x1 = clamp_interior(ars_sample_x(t.y[0], t.mu[0], t.c[0], t.kappa[0], rng));
  double x2 = clamp_interior(ars_sample_x(t.y[1], t.mu[1], t.c[1], t.kappa[1], rng));
  // proposal ~ latent_1 x latent_2, target ~ latent_1 x latent_2 x copula:
  // independence MH with the copula-density ratio
  double log_q = log_copula_density(x1, x2, t.rho) -
                 log_copula_density(clamp_interior(current.first),
                                    clamp_interior(current.second), t.rho);
  if (std::log(rng.uniform_pos()) <= log_q) {
    if (accepted) *accepted = true;
    return {x1, x2};
  }
  if (accepted) *accepted = false;
  return current;
}

std::pair<double, double> sample_x_pair(const XPairTarget& t,
                                        std::pair<double, double> current,
                                        int trial_cap, Rng& rng,
                                        MoveCounters* counters) {
  if (counters) ++counters->x_updates;
  if (trial_cap > 0) {
    auto drawn = sample_x_pair_copula(t, trial_cap, rng);
    if (drawn) return *drawn;
  }
  if (counters) ++counters->x_copula_fallbacks;
  return sample_x_pair_ars(t, current, rng);
}

XPairTarget make_x_target(const BivChainState& st, const Dataset& data,
                          std::size_t i) {
  const auto& mu = st.mus[st.alloc.d[i] - 1];
  return XPairTarget{{data.cols[0][i], data.cols[1][i]},
                     {mu[0], mu[1]},
                     st.c,
                     st.kappa,
                     st.rho};
}

bool update_mu_biv(int dim, int j, BivChainState& st, const Dataset& data,
                   const PriorConfig& priors, double h_mu, Rng& rng) {
  const auto& y = data.cols[dim];
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (st.alloc.d[i] == j) members.push_back(i);
  }
  double& mu = st.mus[j - 1][dim];
  if (members.empty()) {
    mu = draw_nonzero_mu(priors.sigma_mu2, rng);
    return false;
  }
  double mu_star = mu + rng.normal(0.0, std::sqrt(h_mu));
  if (mu_star == 0.0) return false;
  double log_q = log_normal_prior(mu_star, priors.sigma_mu2) -
                 log_normal_prior(mu, priors.sigma_mu2);
  for (std::size_t i : members) {
    log_q += log_latent_density(y[i], st.x[i][dim], mu_star, st.c[dim],
                                st.kappa[dim]) -
             log_latent_density(y[i], st.x[i][dim], mu, st.c[dim], st.kappa[dim]);
  }
  if (std::log(rng.uniform_pos()) <= log_q) {
    mu = mu_star;
    return true;
  }
  return false;
}

double gibbs_c_biv(int dim, BivChainState& st, const Dataset& data,
                   const PriorConfig& priors, Rng& rng) {
  const auto& y = data.cols[dim];
  double rate = priors.beta_c;
  for (std::size_t i = 0; i < y.size(); ++i) {
    double u = y[i] - st.kappa[dim];
    if (u == 0.0) throw std::domain_error("gibbs_c_biv: observation equals kappa");
    double mu = st.mus[st.alloc.d[i] - 1][dim];
    double r = (st.x[i][dim] / u - mu) / mu;
    rate += 0.5 * r * r;
  }
  st.c[dim] = rng.gamma(0.5 * static_cast<double>(y.size()) + priors.alpha_c, rate);
  return st.c[dim];
}

bool update_rho(BivChainState& st, double h_rho, Rng& rng) {
  double rho = st.rho;
  double logit = std::log(rho / (1.0 - rho)) + rng.normal(0.0, std::sqrt(h_rho));
  double rho_star = 1.0 / (1.0 + std::exp(-logit));
  if (!(rho_star > 0.0 && rho_star < 1.0)) return false;
  // logit RW: proposal density 1/(rho*(1-rho*)), Jacobian enters as
  // rho*(1-rho*)/(rho(1-rho)); prior U[0,1)
  double log_q = std::log(rho_star * (1.0 - rho_star)) -
                 std::log(rho * (1.0 - rho));
  for (const auto& xi : st.x) {
    log_q += log_copula_density(clamp_interior(xi[0]), clamp_interior(xi[1]),
                                rho_star) -
             log_copula_density(clamp_interior(xi[0]), clamp_interior(xi[1]), rho);
  }
  if (std::log(rng.uniform_pos()) <= log_q) {
    st.rho = rho_star;
    return true;
  }
  return false;
}

namespace {

double biv_obs_loglik(const BivChainState& st, const Dataset& data,
                      std::size_t i, int d, const std::array<double, 2>& kappa,
                      bool latent_conditional) {
  double v = 0.0;
  for (int l = 0; l < 2; ++l) {
    if (latent_conditional) {
      v += log_latent_density(data.cols[l][i], st.x[i][l], st.mus[d - 1][l],
                              st.c[l], kappa[l]);
    } else {
      v += log_kernel_density(data.cols[l][i], st.mus[d - 1][l], st.c[l],
                              kappa[l]);
    }
  }
  return v;
}

}  // namespace

bool update_kappa_biv(int dim, BivChainState& st, const Dataset& data,
                      const PriorConfig& priors, const McmcConfig& cfg,
                      Rng& rng) {
  const auto& ysorted = data.sorted[dim];
  const auto& order = data.order[dim];
  const std::size_t n = data.n();
  SliceSchedule sched{cfg.gamma};
  std::vector<int> dsorted(n);
  for (std::size_t r = 0; r < n; ++r) dsorted[r] = st.alloc.d[order[r]];

  KappaProposal prop =
      propose_kappa_move(ysorted, dsorted, st.kappa[dim], cfg.m, rng);
  if (!prop.feasible) return false;
  if (!prop.reversible || !std::isfinite(prop.log_rev_prop)) return false;
  if (prop.kappa_star == st.kappa[dim]) return false;
  if (std::binary_search(ysorted.begin(), ysorted.end(), prop.kappa_star))
    return false;

  std::array<double, 2> kappa_star = st.kappa;
  kappa_star[dim] = prop.kappa_star;

  double log_q = prop.log_rev_prop - prop.log_fwd_prop +
                 log_normal_prior(prop.kappa_star, priors.sigma_kappa2) -
                 log_normal_prior(st.kappa[dim], priors.sigma_kappa2);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t i = order[r];
    int d_new = dsorted[r];
    if (static_cast<int>(r) >= prop.block_lo && static_cast<int>(r) <= prop.block_hi)
      d_new = prop.new_d;
    const int d_old = dsorted[r];
    log_q += biv_obs_loglik(st, data, i, d_new, kappa_star,
                            cfg.latent_conditional_dk) -
             biv_obs_loglik(st, data, i, d_old, st.kappa,
                            cfg.latent_conditional_dk);
    if (d_new != d_old) {
      if (st.alloc.u[i] >= sched.xi(d_new)) return false;
      log_q += st.sticks.log_w[d_new - 1] - sched.log_xi(d_new) -
               st.sticks.log_w[d_old - 1] + sched.log_xi(d_old);
    }
  }
  if (std::log(rng.uniform_pos()) <= log_q) {
    st.kappa = kappa_star;
    for (int r = prop.block_lo; r <= prop.block_hi; ++r)
      st.alloc.d[order[r]] = prop.new_d;
    if (!cfg.latent_conditional_dk) {
      // moved observations flipped sides; refresh their latents so the
      // conditional stays well supported
      for (int r = prop.block_lo; r <= prop.block_hi; ++r) {
        const std::size_t i = order[r];
        auto t = make_x_target(st, data, i);
        auto pair = sample_x_pair(t, {st.x[i][0], st.x[i][1]}, cfg.trial_cap, rng);
        st.x[i] = {pair.first, pair.second};
      }
    }
    return true;
  }
  return false;
}

void update_allocations_biv(BivChainState& st, const Dataset& data,
                            const McmcConfig& cfg, const SliceSchedule& sched,
                            Rng& rng) {
  std::vector<double> log_mass;
  for (std::size_t i = 0; i < data.n(); ++i) {
    const int Ni = std::min(st.alloc.level[i], st.truncation());
    log_mass.resize(Ni);
    for (int j = 1; j <= Ni; ++j) {
      double lik = 0.0;
      for (int l = 0; l < 2; ++l) {
        if (cfg.latent_conditional_dk) {
          lik += log_latent_density(data.cols[l][i], st.x[i][l],
                                    st.mus[j - 1][l], st.c[l], st.kappa[l]);
        } else {
          lik += log_kernel_density(data.cols[l][i], st.mus[j - 1][l], st.c[l],
                                    st.kappa[l]);
        }
      }
      log_mass[j - 1] = st.sticks.log_w[j - 1] - sched.log_xi(j) + lik;
    }
    int pick = sample_from_log_masses(log_mass, rng);
    if (pick >= 0) st.alloc.d[i] = pick + 1;
  }
}

void sweep_biv(BivChainState& st, const Dataset& data, const PriorConfig& priors,
               const McmcConfig& cfg, Rng& rng, MoveCounters* counters) {
  const std::size_t n = data.n();
  SliceSchedule sched{cfg.gamma};

  for (std::size_t i = 0; i < n; ++i) {
    st.alloc.u[i] = sample_slice(st.alloc.d[i], sched, rng, &st.alloc.level[i]);
  }
  const int N = st.alloc.max_level();
  resize_components_biv(st, N, priors, rng);

  if (cfg.stick_m_update) {
    st.sticks.M = update_m_sticks(st.sticks, N, priors.alpha_M, priors.beta_M, rng);
  } else {
    st.sticks.M = update_m_escobar_west(count_distinct(st.alloc.d),
                                        static_cast<int>(n), st.sticks.M,
                                        priors.alpha_M, priors.beta_M, rng);
  }
  update_sticks(st.sticks, occupancy_counts(st.alloc.d, N), N, rng);

  for (int l = 0; l < 2; ++l) {
    for (int j = 1; j <= N; ++j) {
      bool acc = update_mu_biv(l, j, st, data, priors, cfg.h_mu, rng);
      if (counters) {
        ++counters->mu_total;
        counters->mu_accept += acc;
      }
    }
  }

  gibbs_c_biv(0, st, data, priors, rng);
  gibbs_c_biv(1, st, data, priors, rng);

  for (int l = 0; l < 2; ++l) {
    bool acc = update_kappa_biv(l, st, data, priors, cfg, rng);
    if (counters) {
      ++counters->kappa_total;
      counters->kappa_accept += acc;
    }
  }

  update_allocations_biv(st, data, cfg, sched, rng);

  for (std::size_t i = 0; i < n; ++i) {
    auto t = make_x_target(st, data, i);
    auto pair = sample_x_pair(t, {st.x[i][0], st.x[i][1]}, cfg.trial_cap, rng,
                              counters);
    st.x[i] = {pair.first, pair.second};
  }

  bool rho_acc = update_rho(st, cfg.h_rho, rng);
  if (counters) {
    ++counters->rho_total;
    counters->rho_accept += rho_acc;
  }
}

}  // namespace unimix
