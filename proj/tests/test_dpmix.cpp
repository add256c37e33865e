#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "support/quadrature.hpp"
#include "support/stats.hpp"
#include "unimix/dpmix.hpp"
#include "unimix/kernel.hpp"

using namespace unimix;

TEST_CASE("slice schedule") {
  SliceSchedule s{0.01};
  CHECK(s.xi(1) == doctest::Approx(0.99004983374916811).epsilon(1e-12));
  CHECK_THROWS_AS(s.xi(0), std::invalid_argument);
  CHECK(s.xi(100) / s.xi(99) == doctest::Approx(std::exp(-0.01)).epsilon(1e-12));
  CHECK(s.level_for(s.xi(7) * 0.999999) == 7);
}

TEST_CASE("sample_slice bounds and mean") {
  SliceSchedule s{0.01};
  Rng rng(4);
  double sum = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    int level = 0;
    double u = sample_slice(5, s, rng, &level);
    CHECK(u > 0.0);
    CHECK(u < s.xi(5));
    CHECK(level >= 5);
    CHECK(s.xi(level) > u);
    CHECK(u >= s.xi(level + 1));
    sum += u;
  }
  double m = s.xi(5) / 2.0;
  CHECK(std::abs(sum / n - m) < 3.0 * s.xi(5) / std::sqrt(12.0 * n));
}

TEST_CASE("stick identity and prior sticks") {
  StickState st;
  st.M = 1.0;
  st.v = {0.5, 0.5, 0.5};
  st.recompute_weights();
  CHECK(st.w[0] == doctest::Approx(0.5));
  CHECK(st.w[1] == doctest::Approx(0.25));
  CHECK(st.w[2] == doctest::Approx(0.125));
  CHECK(st.log_w[2] == doctest::Approx(std::log(0.125)).epsilon(1e-12));
}

TEST_CASE("update_sticks posterior mean") {
  Rng rng(10);
  StickState st;
  st.M = 1.0;
  std::vector<int> counts{9, 0, 0};
  double sum = 0.0;
  const int reps = 10000;
  for (int r = 0; r < reps; ++r) {
    update_sticks(st, counts, 3, rng);
    sum += st.v[0];
  }
  // Beta(10, 1): mean 10/11, sd ~ 0.083
  CHECK(std::abs(sum / reps - 10.0 / 11.0) < 3.0 * 0.083 / std::sqrt(reps));

  std::vector<int> zero{0, 0, 0};
  sum = 0.0;
  for (int r = 0; r < reps; ++r) {
    update_sticks(st, zero, 3, rng);
    sum += st.v[1];
  }
  CHECK(std::abs(sum / reps - 0.5) < 3.0 * 0.29 / std::sqrt(reps));
}

TEST_CASE("two-step M update parameter mapping") {
  // nu = 0.5, k = 3: shape 3.01, rate 0.01 + log 2. Check by matching the
  // long-run mean with nu forced through a fixed seed comparison instead:
  // draw many updates with n huge so nu ~ Beta(M, n) concentrates near 0.
  Rng rng(21);
  double m = 1.0;
  const int reps = 10000, thin = 10;
  std::vector<double> draws;
  for (int r = 0; r < reps * thin; ++r) {
    m = update_m_escobar_west(3, 100, m, 0.01, 0.01, rng);
    CHECK(m > 0.0);
    if (r % thin == 0) draws.push_back(m);
  }
  // self-consistency: an independent direct sampler of the same two-step kernel
  Rng rng2(77);
  double m2 = 1.0;
  std::vector<double> draws2;
  for (int r = 0; r < reps * thin; ++r) {
    double nu;
    do {
      nu = rng2.beta(m2, 100.0);  // underflows to 0 for small m2; redraw
    } while (nu <= 0.0 || nu >= 1.0);
    m2 = rng2.gamma(0.01 + 3, 0.01 - std::log(nu));
    if (r % thin == 0) draws2.push_back(m2);
  }
  CHECK(testsup::ks_stat2(draws, draws2) <
        testsup::ks_crit2(draws.size(), draws2.size()));
}

TEST_CASE("stick-conditional M update is Gamma") {
  Rng rng(31);
  StickState st;
  st.M = 2.0;
  st.v = {0.3, 0.6, 0.1};
  st.recompute_weights();
  double rate = 0.01;
  for (double v : st.v) rate -= std::log1p(-v);
  const int reps = 20000;
  std::vector<double> draws(reps), direct(reps);
  for (int r = 0; r < reps; ++r)
    draws[r] = update_m_sticks(st, 3, 0.01, 0.01, rng);
  Rng rng2(32);
  for (int r = 0; r < reps; ++r) direct[r] = rng2.gamma(0.01 + 3, rate);
  CHECK(testsup::ks_stat2(draws, direct) < testsup::ks_crit2(reps, reps));
}

TEST_CASE("sample_from_log_masses") {
  Rng rng(5);
  std::vector<double> lm{std::log(0.2), std::log(0.3), std::log(0.5)};
  std::vector<int> counts(3, 0);
  const int n = 30000;
  for (int i = 0; i < n; ++i) ++counts[sample_from_log_masses(lm, rng)];
  for (int j = 0; j < 3; ++j) {
    double p = std::exp(lm[j]);
    CHECK(std::abs(double(counts[j]) / n - p) <
          3.0 * std::sqrt(p * (1 - p) / n));
  }
  // single usable mass
  std::vector<double> one{-std::numeric_limits<double>::infinity(), -3.0};
  for (int i = 0; i < 100; ++i) CHECK(sample_from_log_masses(one, rng) == 1);
  std::vector<double> none{-std::numeric_limits<double>::infinity()};
  CHECK(sample_from_log_masses(none, rng) == -1);
  // extreme offsets normalize in log space
  std::vector<double> far{-5000.0, -5000.0 + std::log(3.0)};
  int c1 = 0;
  for (int i = 0; i < n; ++i) c1 += sample_from_log_masses(far, rng) == 1;
  CHECK(std::abs(double(c1) / n - 0.75) < 3.0 * std::sqrt(0.25 * 0.75 / n));
}

TEST_CASE("slice-joint marginalization recovers the mixture") {
  // finite 3-component model: f(y, u, d) = 1(u < xi_d) (w_d/xi_d) f(y | mu_d);
  // summing d and integrating u gives sum_j w_j f(y | mu_j) exactly.
  SliceSchedule s{0.01};
  std::vector<double> w{0.5, 0.3, 0.2}, mus{-2.0, 1.0, 4.0};
  double c = 1.5, kappa = 0.0, y = 0.7;
  double total = 0.0;
  for (int d = 1; d <= 3; ++d) {
    // integral over u of the indicator is xi_d
    total += (w[d - 1] / s.xi(d)) * s.xi(d) *
             kernel_density(y, KernelParams(mus[d - 1], c, kappa));
  }
  CHECK(total ==
        doctest::Approx(mixture_density(y, w, mus, c, kappa)).epsilon(1e-10));
}

TEST_CASE("sample_weight_index extends sticks") {
  Rng rng(8);
  StickState st;
  st.M = 1.0;
  st.v = {0.9};
  st.recompute_weights();
  int seen_past = 0;
  for (int i = 0; i < 2000; ++i) {
    int j = sample_weight_index(st, rng);
    CHECK(j >= 1);
    if (j > 1) ++seen_past;
  }
  CHECK(seen_past > 0);               // leftover mass 0.1 gets hit
  CHECK(st.v.size() >= 2);            // sticks grew on demand
  CHECK(count_distinct({1, 1, 2, 5}) == 3);
  auto occ = occupancy_counts({1, 1, 3}, 4);
  CHECK(occ == std::vector<int>{2, 0, 1, 0});
}
