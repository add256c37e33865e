#include "unimix/mcmc_bridge.hpp"

#include <cmath>
#include <stdexcept>

#include "unimix/ars.hpp"
#include "unimix/math.hpp"

namespace unimix {

BridgeChainState init_bridge_state(const Dataset& data, const PriorConfig& priors,
                                   Rng& rng) {
  BridgeChainState st;
  st.base = init_uni_state(data, priors, rng);
  st.x.resize(data.n());
  for (auto& xi : st.x) xi = rng.uniform_pos();
  return st;
}

bool update_mu_latent(int j, BridgeChainState& st, const Dataset& data,
                      const PriorConfig& priors, double h_mu, Rng& rng) {
  const auto& y = data.cols[0];
  UniChainState& b = st.base;
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (b.alloc.d[i] == j) members.push_back(i);
  }
  double& mu = b.mus[j - 1];
  if (members.empty()) {
    do {
      mu = rng.normal(0.0, std::sqrt(priors.sigma_mu2));
    } while (mu == 0.0);
    return false;
  }
  double mu_star = mu + rng.normal(0.0, std::sqrt(h_mu));
  if (mu_star == 0.0) return false;
  double log_q = log_norm_pdf(mu_star, 0.0, std::sqrt(priors.sigma_mu2)) -
                 log_norm_pdf(mu, 0.0, std::sqrt(priors.sigma_mu2));
  for (std::size_t i : members) {
    log_q += log_latent_density(y[i], st.x[i], mu_star, b.c, b.kappa) -
             log_latent_density(y[i], st.x[i], mu, b.c, b.kappa);
  }
  if (std::log(rng.uniform_pos()) <= log_q) {
    mu = mu_star;
    return true;
  }
  return false;
}

double gibbs_c(BridgeChainState& st, const Dataset& data,
               const PriorConfig& priors, Rng& rng) {
  const auto& y = data.cols[0];
  UniChainState& b = st.base;
  double rate = priors.beta_c;
  for (std::size_t i = 0; i < y.size(); ++i) {
    double u = y[i] - b.kappa;
    if (u == 0.0) throw std::domain_error("gibbs_c: observation equals kappa");
    double mu = b.mus[b.alloc.d[i] - 1];
    double r = (st.x[i] / u - mu) / mu;
    rate += 0.5 * r * r;
  }
  b.c = rng.gamma(0.5 * static_cast<double>(y.size()) + priors.alpha_c, rate);
  return b.c;
}

double sample_x(double y, double mu, double c, double kappa, Rng& rng,
                long* trials) {
  const double log_bound =
      log_latent_density(y, latent_maximizer(y, mu, c, kappa), mu, c, kappa);
  for (long t = 1; t <= 10000; ++t) {
    double x = rng.uniform_pos();
    double log_ratio = log_latent_density(y, x, mu, c, kappa) - log_bound;
    if (log_ratio > 1e-9)
      throw std::runtime_error("sample_x: dominating bound violated");
    if (std::log(rng.uniform_pos()) <= log_ratio) {
      if (trials) *trials = t;
      return x;
    }
  }
  throw std::runtime_error("sample_x: rejection trial cap reached");
}

namespace {

// Sweep-internal draw: uniform-proposal rejection, but when kappa sits close
// enough to y that the acceptance rate collapses (it scales with |y - kappa|),
// switch to ARS on the same conditional instead of aborting the chain.
double sample_x_robust(double y, double mu, double c, double kappa, Rng& rng) {
  const double log_bound =
      log_latent_density(y, latent_maximizer(y, mu, c, kappa), mu, c, kappa);
  for (long t = 1; t <= 10000; ++t) {
    double x = rng.uniform_pos();
    if (std::log(rng.uniform_pos()) <=
        log_latent_density(y, x, mu, c, kappa) - log_bound)
      return x;
  }
  return ars_sample_x(y, mu, c, kappa, rng);
}

}  // namespace

double ars_sample_x(double y, double mu, double c, double kappa, Rng& rng) {
  double u = y - kappa;
  if (u == 0.0) throw std::domain_error("ars_sample_x: y == kappa");
  const double a = c / (2.0 * mu * mu * u * u);
  const double b = mu * u;
  auto log_f = [a, b](double x) {
    double v = std::log(x) - a * (x - b) * (x - b);
    double dv = 1.0 / x - 2.0 * a * (x - b);
    return std::pair<double, double>{v, dv};
  };
  double xhat = latent_maximizer(y, mu, c, kappa);
  std::vector<double> init{0.5 * xhat, std::min(0.999999, xhat), 0.5 + 0.5 * xhat};
  Ars ars(log_f, 0.0, 1.0, init);
  return ars.sample(rng);
}

void sweep_bridge(BridgeChainState& st, const Dataset& data,
                  const PriorConfig& priors, const McmcConfig& cfg, Rng& rng,
                  MoveCounters* counters) {
  UniChainState& b = st.base;
  const std::size_t n = data.n();
  SliceSchedule sched{cfg.gamma};

  for (std::size_t i = 0; i < n; ++i) {
    b.alloc.u[i] = sample_slice(b.alloc.d[i], sched, rng, &b.alloc.level[i]);
  }
  const int N = b.alloc.max_level();
  resize_components_uni(b, N, priors, rng);

  if (cfg.stick_m_update) {
    b.sticks.M = update_m_sticks(b.sticks, N, priors.alpha_M, priors.beta_M, rng);
  } else {
    b.sticks.M = update_m_escobar_west(count_distinct(b.alloc.d),
                                       static_cast<int>(n), b.sticks.M,
                                       priors.alpha_M, priors.beta_M, rng);
  }
  update_sticks(b.sticks, occupancy_counts(b.alloc.d, N), N, rng);

  for (int j = 1; j <= N; ++j) {
    bool acc = update_mu_latent(j, st, data, priors, cfg.h_mu, rng);
    if (counters) {
      ++counters->mu_total;
      counters->mu_accept += acc;
    }
  }

  gibbs_c(st, data, priors, rng);

  // (d, kappa) in two stages with the closed-form marginal kernel, then x
  // from its full conditional; together an exact blocked update of (d,kappa,x)
  update_allocations_uni(b, data, sched, rng);
  bool k_acc = apply_kappa_move_uni(b, data, priors, cfg, sched, rng);
  if (counters) {
    ++counters->kappa_total;
    counters->kappa_accept += k_acc;
  }

  const auto& y = data.cols[0];
  for (std::size_t i = 0; i < n; ++i) {
    st.x[i] = sample_x_robust(y[i], b.mus[b.alloc.d[i] - 1], b.c, b.kappa, rng);
    if (counters) ++counters->x_updates;
  }
}

}  // namespace unimix
