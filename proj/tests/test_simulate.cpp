#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "support/stats.hpp"
#include "unimix/simulate.hpp"

using namespace unimix;

TEST_CASE("model A moments") {
  Rng rng(1);
  auto y = simulate_model_a(100000, rng);
  CHECK(std::abs(testsup::mean_of(y) - 100.0) < 3.0 * 100.0 / std::sqrt(y.size()));
  CHECK(std::abs(testsup::sd_of(y) - 100.0) < 3.0 * 100.0 / std::sqrt(2.0 * y.size()));
}

TEST_CASE("model B rate vs scale convention") {
  Rng rng(2);
  auto y = simulate_model_b(100000, rng);
  // Gamma(3, rate 10): mean 0.3, sd sqrt(3)/10
  CHECK(std::abs(testsup::mean_of(y) - 0.3) <
        3.0 * std::sqrt(3.0) / 10.0 / std::sqrt(y.size()));
  auto ys = simulate_model_b(100000, rng, false);
  CHECK(std::abs(testsup::mean_of(ys) - 30.0) <
        3.0 * std::sqrt(3.0) * 10.0 / std::sqrt(ys.size()));
}

TEST_CASE("bivariate normal target") {
  Rng rng(3);
  auto y = simulate_biv_normal(100000, rng);
  std::vector<double> a(y.size()), b(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    a[i] = y[i][0];
    b[i] = y[i][1];
  }
  double n = double(y.size());
  CHECK(std::abs(testsup::mean_of(a) - 30.0) < 3.0 * std::sqrt(10.0 / n));
  CHECK(std::abs(testsup::mean_of(b) - 60.0) < 3.0 * std::sqrt(10.0 / n));
  CHECK(std::abs(testsup::sd_of(a) - std::sqrt(10.0)) < 0.05);
  CHECK(std::abs(testsup::pearson_of(a, b) - 0.5) < 3.0 * 0.75 / std::sqrt(n));
}

TEST_CASE("generators are pure in the seed") {
  Rng r1(9), r2(9), r3(10);
  auto a = simulate_model_a(100, r1);
  auto b = simulate_model_a(100, r2);
  auto c = simulate_model_a(100, r3);
  CHECK(a == b);
  CHECK(a != c);
}

TEST_CASE("dependence study: X side tracks rho, Z side stays weak") {
  Rng rng(11);
  std::vector<double> grid{-0.9, 0.0, 0.9};
  auto xside = dependence_study(DependenceSide::X, {10.0, 10.0}, grid, 100, 500, rng);
  CHECK(xside[0].corr_hi < 0.0);   // rho = -0.9 band excludes 0
  CHECK(xside[1].corr_lo < 0.0);   // rho = 0 band contains 0
  CHECK(xside[1].corr_hi > 0.0);
  CHECK(xside[2].corr_lo > 0.0);   // rho = 0.9 band excludes 0
  CHECK(xside[0].corr_med < xside[1].corr_med);
  CHECK(xside[1].corr_med < xside[2].corr_med);

  auto zside = dependence_study(DependenceSide::Z, {10.0, 10.0}, grid, 100, 500, rng);
  for (const auto& row : zside) {
    CHECK(row.corr_lo > -0.3);
    CHECK(row.corr_hi < 0.3);
  }
}

TEST_CASE("corr(Y) sign equals sign(mu1 mu2 rho)") {
  Rng rng(13);
  for (double m1 : {10.0, -10.0}) {
    for (double m2 : {10.0, -10.0}) {
      for (double rho : {-0.9, 0.9}) {
        double corr = 0.0;
        for (int rep = 0; rep < 20; ++rep)
          corr += dependence_rep_corr(DependenceSide::X, {m1, m2}, rho, 1000, rng);
        CHECK(corr * (m1 * m2 * rho) > 0.0);
      }
    }
  }
}

TEST_CASE("to_dataset") {
  Dataset d1 = to_dataset(std::vector<double>{3.0, 1.0});
  CHECK(d1.dim() == 1);
  CHECK(d1.sorted[0][0] == 1.0);
  Dataset d2 = to_dataset(std::vector<std::array<double, 2>>{{1.0, 2.0}, {3.0, 4.0}});
  CHECK(d2.dim() == 2);
  CHECK(d2.names[1] == "y2");
}
