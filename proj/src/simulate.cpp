#include "unimix/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "unimix/kernel.hpp"
#include "unimix/math.hpp"

namespace unimix {

std::vector<double> simulate_model_a(std::size_t n, Rng& rng) {
  std::vector<double> y(n);
  for (auto& v : y) v = rng.normal(100.0, 100.0);
  return y;
}

std::vector<double> simulate_model_b(std::size_t n, Rng& rng,
                                     bool rate_convention) {
  std::vector<double> y(n);
  const double rate = rate_convention ? 10.0 : 0.1;
  for (auto& v : y) v = rng.gamma(3.0, rate);
  return y;
}

std::vector<std::array<double, 2>> simulate_biv_normal(std::size_t n, Rng& rng) {
  const double sd = std::sqrt(10.0);
  const double rho = 0.5;
  std::vector<std::array<double, 2>> y(n);
  for (auto& p : y) {
    double z1 = rng.normal();
    double z2 = rng.normal();
    p[0] = 30.0 + sd * z1;
    p[1] = 60.0 + sd * (rho * z1 + std::sqrt(1.0 - rho * rho) * z2);
  }
  return y;
}

std::vector<double> simulate_generative_kernel(std::span<const double> weights,
                                               std::span<const double> mus,
                                               double c, double kappa,
                                               std::size_t n, Rng& rng) {
  if (weights.size() != mus.size() || weights.empty())
    throw std::invalid_argument("simulate_generative_kernel: bad weights/mus");
  double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<double> y(n);
  for (auto& v : y) {
    double u = rng.uniform() * total;
    std::size_t j = 0;
    for (; j + 1 < weights.size() && u >= weights[j]; ++j) u -= weights[j];
    v = sample_kernel(KernelParams(mus[j], c, kappa), rng);
  }
  return y;
}

namespace {

double nonzero_normal(double mean, double sd, Rng& rng) {
  double z;
  do {
    z = rng.normal(mean, sd);
  } while (z == 0.0);
  return z;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
    sab += (a[i] - ma) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

double sorted_quantile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  double pos = p * (v.size() - 1);
  std::size_t lo = static_cast<std::size_t>(pos);
  std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - lo) * (v[hi] - v[lo]);
}

}  // namespace

double dependence_rep_corr(DependenceSide side, std::array<double, 2> mu,
                           double rho, std::size_t n, Rng& rng) {
  if (!(rho > -1.0 && rho < 1.0))
    throw std::invalid_argument("dependence_rep_corr: |rho| must be < 1");
  std::vector<double> y1(n), y2(n);
  const double t = std::sqrt(1.0 - rho * rho);
  // c = 100 throughout: with Z ~ N(mu, mu^2/c) and small c, Z crosses zero
  // and Y = X/Z has no finite variance, so Pearson correlations of any origin
  // are washed out by outliers and the two couplings cannot be compared.
  const double sd1 = std::abs(mu[0]) / 10.0, sd2 = std::abs(mu[1]) / 10.0;
  for (std::size_t i = 0; i < n; ++i) {
    double g1 = rng.normal();
    double g2 = rho * g1 + t * rng.normal();
    double x1, x2, z1, z2;
    if (side == DependenceSide::X) {
      x1 = std::clamp(norm_cdf(g1), 1e-15, 1.0 - 1e-15);
      x2 = std::clamp(norm_cdf(g2), 1e-15, 1.0 - 1e-15);
      z1 = nonzero_normal(mu[0], sd1, rng);
      z2 = nonzero_normal(mu[1], sd2, rng);
    } else {
      x1 = rng.uniform_pos();
      x2 = rng.uniform_pos();
      z1 = mu[0] + sd1 * g1;
      z2 = mu[1] + sd2 * g2;
      if (z1 == 0.0) z1 = nonzero_normal(mu[0], sd1, rng);
      if (z2 == 0.0) z2 = nonzero_normal(mu[1], sd2, rng);
    }
    y1[i] = x1 / z1;
    y2[i] = x2 / z2;
  }
  return pearson(y1, y2);
}

std::vector<DependenceRow> dependence_study(DependenceSide side,
                                            std::array<double, 2> mu,
                                            std::span<const double> grid,
                                            int reps, std::size_t n, Rng& rng) {
  std::vector<DependenceRow> out;
  out.reserve(grid.size());
  for (double rho : grid) {
    std::vector<double> corrs(reps);
    for (int r = 0; r < reps; ++r)
      corrs[r] = dependence_rep_corr(side, mu, rho, n, rng);
    out.push_back({rho, sorted_quantile(corrs, 0.025),
                   sorted_quantile(corrs, 0.5), sorted_quantile(corrs, 0.975)});
  }
  return out;
}

Dataset to_dataset(const std::vector<double>& y, const std::string& name) {
  return make_dataset({y}, {name});
}

Dataset to_dataset(const std::vector<std::array<double, 2>>& y,
                   const std::string& name1, const std::string& name2) {
  std::vector<double> c1(y.size()), c2(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    c1[i] = y[i][0];
    c2[i] = y[i][1];
  }
  return make_dataset({std::move(c1), std::move(c2)}, {name1, name2});
}

}  // namespace unimix
