#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "support/quadrature.hpp"
#include "support/stats.hpp"
#include "unimix/mcmc_bridge.hpp"
#include "unimix/simulate.hpp"

using namespace unimix;

namespace {

Dataset fixture_data(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  std::vector<double> w{0.8, 0.2}, mus{-5.0, 20.0};
  return to_dataset(simulate_generative_kernel(w, mus, 1.0, 10.0, n, rng));
}

// CDF of the x conditional by quadrature of the latent density
auto latent_cdf(double y, double mu, double c, double kappa) {
  KernelParams p(mu, c, kappa);
  double total = testsup::integrate(
      [&](double x) { return x > 0 ? latent_joint_density(y, x, p) : 0.0; }, 0.0,
      1.0, 1e-13);
  return [=](double v) {
    if (v <= 0.0) return 0.0;
    if (v >= 1.0) return 1.0;
    return testsup::integrate(
               [&](double x) {
                 return x > 0 ? latent_joint_density(y, x, p) : 0.0;
               },
               0.0, v, 1e-12) /
           total;
  };
}

}  // namespace

TEST_CASE("sample_x matches the quadrature-normalized latent") {
  Rng rng(1);
  const double y = 0.3, mu = 2.0, c = 1.0, kappa = 0.0;
  const int n = 20000;
  std::vector<double> draws(n);
  long total_trials = 0;
  for (auto& d : draws) {
    long t = 0;
    d = sample_x(y, mu, c, kappa, rng, &t);
    total_trials += t;
    CHECK(d > 0.0);
    CHECK(d <= 1.0);
  }
  CHECK(testsup::ks_stat(draws, latent_cdf(y, mu, c, kappa)) <
        testsup::ks_crit(n));

  // expected trials = latent(xhat) / integral of latent
  KernelParams p(mu, c, kappa);
  double peak = latent_joint_density(y, latent_maximizer(y, p), p);
  double mass = testsup::integrate(
      [&](double x) { return x > 0 ? latent_joint_density(y, x, p) : 0.0; }, 0.0,
      1.0, 1e-13);
  double expected = peak / mass;
  double se = std::sqrt(expected * (expected - 1.0) / n);  // geometric sd
  CHECK(std::abs(double(total_trials) / n - expected) < 3.0 * se);
}

TEST_CASE("ARS draws agree with plain rejection") {
  Rng rng(2);
  for (auto [y, mu, c] : std::vector<std::array<double, 3>>{
           {0.3, 2.0, 1.0}, {-0.4, -3.0, 2.0}, {1.5, 0.7, 0.5}}) {
    const int n = 10000;
    std::vector<double> a(n), b(n);
    for (int i = 0; i < n; ++i) {
      a[i] = sample_x(y, mu, c, 0.0, rng);
      b[i] = ars_sample_x(y, mu, c, 0.0, rng);
    }
    CHECK(testsup::ks_stat2(a, b) < testsup::ks_crit2(n, n));
  }
}

TEST_CASE("ARS handles near-mode observations where rejection stalls") {
  Rng rng(3);
  // y - kappa = 1e-6: uniform-proposal acceptance collapses, ARS must not
  const double y = 1e-6, mu = 2.0, c = 1.0;
  for (int i = 0; i < 1000; ++i) {
    double x = ars_sample_x(y, mu, c, 0.0, rng);
    CHECK(x > 0.0);
    CHECK(x <= 1.0);
  }
}

TEST_CASE("gibbs_c parameter mapping") {
  // three observations, hand-computed rate
  Dataset d = make_dataset({{1.5, 2.0, 0.5}}, {"y"});
  Rng rng(4);
  PriorConfig priors;
  BridgeChainState st = init_bridge_state(d, priors, rng);
  st.base.kappa = 0.0;
  st.base.mus = {2.0};
  st.base.alloc.d = {1, 1, 1};
  st.x = {0.5, 0.8, 0.2};
  double rate = priors.beta_c;
  for (int i = 0; i < 3; ++i) {
    double r = (st.x[i] / d.cols[0][i] - 2.0) / 2.0;
    rate += 0.5 * r * r;
  }
  const int reps = 20000;
  std::vector<double> draws(reps), direct(reps);
  for (auto& v : draws) v = gibbs_c(st, d, priors, rng);
  Rng rng2(5);
  for (auto& v : direct) v = rng2.gamma(1.5 + priors.alpha_c, rate);
  CHECK(testsup::ks_stat2(draws, direct) < testsup::ks_crit2(reps, reps));
}

TEST_CASE("latent mu update targets the same posterior as the marginal") {
  Dataset d = fixture_data(6, 25);
  PriorConfig priors;
  McmcConfig cfg;

  Rng r1(7);
  UniChainState um = init_uni_state(d, priors, r1);
  std::vector<double> kap_m, c_m;
  for (int t = 0; t < 60000; ++t) {
    sweep_uni(um, d, priors, cfg, r1);
    if (t >= 10000 && t % 5 == 0) {
      kap_m.push_back(um.kappa);
      c_m.push_back(um.c);
    }
  }

  Rng r2(8);
  BridgeChainState ub = init_bridge_state(d, priors, r2);
  std::vector<double> kap_b, c_b;
  for (int t = 0; t < 60000; ++t) {
    sweep_bridge(ub, d, priors, cfg, r2);
    if (t >= 10000 && t % 5 == 0) {
      kap_b.push_back(ub.base.kappa);
      c_b.push_back(ub.base.c);
    }
  }

  // compare posterior means within 3 combined MC SEs; batches must be long
  // relative to kappa's integrated autocorrelation time or the SE lies low
  auto batch_se = [](const std::vector<double>& x) {
    const std::size_t b = 500, nb = x.size() / b;
    std::vector<double> means(nb);
    for (std::size_t k = 0; k < nb; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < b; ++i) s += x[k * b + i];
      means[k] = s / b;
    }
    return testsup::sd_of(means) / std::sqrt(double(nb));
  };
  double dk = std::abs(testsup::mean_of(kap_m) - testsup::mean_of(kap_b));
  double sek = std::hypot(batch_se(kap_m), batch_se(kap_b));
  CHECK(dk < 3.0 * sek + 1e-9);
  double dc = std::abs(testsup::mean_of(c_m) - testsup::mean_of(c_b));
  double sec = std::hypot(batch_se(c_m), batch_se(c_b));
  CHECK(dc < 3.0 * sec + 1e-9);
}

TEST_CASE("bridge sweep determinism and latent bounds") {
  Dataset d = fixture_data(9, 20);
  PriorConfig priors;
  McmcConfig cfg;
  Rng r1(10), r2(10);
  BridgeChainState a = init_bridge_state(d, priors, r1);
  BridgeChainState b = init_bridge_state(d, priors, r2);
  for (int t = 0; t < 100; ++t) {
    sweep_bridge(a, d, priors, cfg, r1);
    sweep_bridge(b, d, priors, cfg, r2);
    for (double x : a.x) {
      CHECK(x > 0.0);
      CHECK(x <= 1.0);
    }
  }
  CHECK(a.base.kappa == b.base.kappa);
  CHECK(a.x == b.x);
}
