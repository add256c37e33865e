#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "support/stats.hpp"
#include "unimix/mcmc_uni.hpp"
#include "unimix/simulate.hpp"

using namespace unimix;

namespace {

Dataset fixture_data(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  std::vector<double> w{0.8, 0.2}, mus{-5.0, 20.0};
  return to_dataset(simulate_generative_kernel(w, mus, 1.0, 10.0, n, rng));
}

}  // namespace

TEST_CASE("init state is consistent") {
  Dataset d = fixture_data(1, 40);
  Rng rng(2);
  UniChainState st = init_uni_state(d, PriorConfig{}, rng);
  CHECK(st.kappa > d.sorted[0].front());
  CHECK(st.kappa < d.sorted[0].back());
  for (double y : d.cols[0]) CHECK(y != st.kappa);
  CHECK(st.c == 1.0);
  SliceSchedule sched;
  for (std::size_t i = 0; i < d.n(); ++i) {
    CHECK(st.alloc.d[i] == 1);
    CHECK(st.alloc.u[i] < sched.xi(st.alloc.d[i]));
  }
  CHECK(st.truncation() >= st.alloc.max_level());
}

TEST_CASE("empty component mu refreshes from the prior") {
  Dataset d = fixture_data(3, 10);
  Rng rng(4);
  PriorConfig priors;
  UniChainState st = init_uni_state(d, priors, rng);
  resize_components_uni(st, 3, priors, rng);
  // component 3 has no members (all d_i = 1)
  std::vector<double> draws(5000);
  for (auto& v : draws) {
    update_mu(3, st, d, priors, 0.25, rng);
    v = st.mus[2];
  }
  double sd = std::sqrt(priors.sigma_mu2);
  double ks = testsup::ks_stat(draws, [sd](double x) {
    return 0.5 * std::erfc(-x / (sd * std::sqrt(2.0)));
  });
  CHECK(ks < testsup::ks_crit(draws.size()));
}

TEST_CASE("update_c with no data reproduces the gamma prior") {
  Dataset d;
  d.cols = {{}};
  d.names = {"y"};
  d.sorted = {{}};
  d.order = {{}};
  d.rank = {{}};
  Rng rng(5);
  PriorConfig priors;  // gamma(0.1, 0.1)
  UniChainState st;
  st.mus = {1.0};
  st.c = 1.0;
  std::vector<double> draws;
  for (int t = 0; t < 200000; ++t) {
    update_c(st, d, priors, 1.0, rng);
    if (t % 40 == 0) draws.push_back(st.c);
  }
  Rng rng2(6);
  std::vector<double> direct(draws.size());
  for (auto& v : direct) v = rng2.gamma(0.1, 0.1);
  CHECK(testsup::ks_stat2(draws, direct) <
        testsup::ks_crit2(draws.size(), direct.size()));
}

TEST_CASE("kappa window enumeration") {
  // S(h) = { s in [-m, m] : 1 <= h + s <= n - 1 }
  for (int n : {2, 5, 12}) {
    for (int m : {1, 3, 6}) {
      for (int h = 0; h <= n; ++h) {
        int count = 0;
        for (int s = -m; s <= m; ++s) {
          if (h + s >= 1 && h + s <= n - 1) ++count;
        }
        CHECK(kappa_window_size(h, n, m) == count);
      }
    }
  }
}

TEST_CASE("kappa proposal block rules and reversibility") {
  std::vector<double> ys{1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
  std::vector<int> ds{1, 1, 1, 2, 2, 2};
  const int n = 6, m = 2;
  Rng rng(7);
  double kappa = 3.5;  // h = 3
  int seen_pos = 0, seen_neg = 0, seen_zero = 0;
  for (int rep = 0; rep < 2000; ++rep) {
    KappaProposal p = propose_kappa_move(ys, ds, kappa, m, rng);
    REQUIRE(p.feasible);
    int h = 3, hs = h + p.s;
    CHECK(p.kappa_star >= ys[hs - 1]);
    CHECK(p.kappa_star <= ys[hs]);
    if (p.s == 0) {
      ++seen_zero;
      CHECK(p.block_hi < p.block_lo);
    } else if (p.s > 0) {
      ++seen_pos;
      CHECK(p.block_lo == h);
      CHECK(p.block_hi == hs - 1);
      CHECK(p.new_d == ds[h - 1]);
      // forward/reverse proposal densities, reconstructed by hand
      double fwd = -std::log(double(kappa_window_size(h, n, m))) -
                   std::log(ys[hs] - ys[hs - 1]);
      double rev = -std::log(double(kappa_window_size(hs, n, m))) -
                   std::log(ys[h] - ys[h - 1]);
      CHECK(p.log_fwd_prop == doctest::Approx(fwd).epsilon(1e-12));
      CHECK(p.log_rev_prop == doctest::Approx(rev).epsilon(1e-12));
      // reverse-rule reconstruction: moved block must have been homogeneous
      bool homog = true;
      for (int r = p.block_lo; r <= p.block_hi; ++r)
        homog = homog && ds[r] == ds[hs];
      CHECK(p.reversible == homog);
    } else {
      ++seen_neg;
      CHECK(p.block_lo == hs);
      CHECK(p.block_hi == h - 1);
      CHECK(p.new_d == ds[h]);
    }
  }
  CHECK(seen_zero > 0);
  CHECK(seen_pos > 0);
  CHECK(seen_neg > 0);
}

TEST_CASE("kappa proposal marks irreversible blocks") {
  // moving two ranks right over a heterogeneous block cannot be undone by the
  // reverse rule, which reassigns the whole block to one cluster
  std::vector<double> ys{1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
  std::vector<int> ds{1, 1, 2, 3, 2, 2};
  Rng rng(8);
  bool saw_irreversible = false;
  for (int rep = 0; rep < 500; ++rep) {
    KappaProposal p = propose_kappa_move(ys, ds, 2.5, 2, rng);  // h = 2
    if (p.s == 2) {
      // block ranks 3..4 (0-based 2..3) had clusters {2, 3}
      CHECK_FALSE(p.reversible);
      saw_irreversible = true;
    }
  }
  CHECK(saw_irreversible);
}

TEST_CASE("sweep is deterministic and preserves slice invariants") {
  Dataset d = fixture_data(9, 30);
  PriorConfig priors;
  McmcConfig cfg;
  Rng r1(10), r2(10);
  UniChainState a = init_uni_state(d, priors, r1);
  UniChainState b = init_uni_state(d, priors, r2);
  SliceSchedule sched{cfg.gamma};
  for (int t = 0; t < 200; ++t) {
    sweep_uni(a, d, priors, cfg, r1);
    sweep_uni(b, d, priors, cfg, r2);
    for (std::size_t i = 0; i < d.n(); ++i) {
      CHECK(a.alloc.u[i] < sched.xi(a.alloc.d[i]));
    }
    CHECK(a.kappa >= d.sorted[0].front());
    CHECK(a.kappa <= d.sorted[0].back());
  }
  CHECK(a.kappa == b.kappa);
  CHECK(a.c == b.c);
  CHECK(a.mus == b.mus);
  CHECK(a.alloc.d == b.alloc.d);
  CHECK(a.sticks.v == b.sticks.v);
}

TEST_CASE("posterior concentrates near the generative mode") {
  Dataset d = fixture_data(11, 120);
  PriorConfig priors;
  McmcConfig cfg;
  Rng rng(12);
  UniChainState st = init_uni_state(d, priors, rng);
  double sum = 0.0;
  int kept = 0;
  for (int t = 0; t < 4000; ++t) {
    sweep_uni(st, d, priors, cfg, rng);
    if (t >= 1000) {
      sum += st.kappa;
      ++kept;
    }
  }
  CHECK(std::abs(sum / kept - 10.0) < 0.5);  // true mode = 10
}
