#include "unimix/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace unimix {

double mean(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("mean: empty input");
  return std::accumulate(x.begin(), x.end(), 0.0) / x.size();
}

double sample_sd(std::span<const double> x) {
  if (x.size() < 2) throw std::invalid_argument("sample_sd: need >= 2 points");
  double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return std::sqrt(ss / (x.size() - 1));
}

double quantile(std::span<const double> x, double p) {
  if (x.empty()) throw std::invalid_argument("quantile: empty input");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile: bad p");
  std::vector<double> v(x.begin(), x.end());
  std::sort(v.begin(), v.end());
  double pos = p * (v.size() - 1);
  std::size_t lo = static_cast<std::size_t>(pos);
  std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - lo) * (v[hi] - v[lo]);
}

double ess_initial_monotone(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 4) return static_cast<double>(n);
  const double m = mean(x);
  // autocovariance gamma_k (biased, /n)
  auto gamma = [&](std::size_t k) {
    double s = 0.0;
    for (std::size_t i = 0; i + k < n; ++i) s += (x[i] - m) * (x[i + k] - m);
    return s / n;
  };
  const double g0 = gamma(0);
  if (!(g0 > 0.0)) return static_cast<double>(n);  // constant series

  // Gamma_j = gamma_{2j} + gamma_{2j+1}: keep while positive, then enforce
  // monotone non-increase.
  double tau = -1.0;  // tau = -1 + 2 * sum_j Gamma_j / g0, Gamma_0 includes g0
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; 2 * j + 1 < n; ++j) {
    double G = (gamma(2 * j) + gamma(2 * j + 1)) / g0;
    if (G <= 0.0) break;
    G = std::min(G, prev);
    prev = G;
    tau += 2.0 * G;
  }
  tau = std::max(tau, 1.0);
  return std::min(static_cast<double>(n), n / tau);
}

ColumnSummary summarize_column(std::span<const double> x) {
  ColumnSummary s;
  s.mean = mean(x);
  s.sd = x.size() >= 2 ? sample_sd(x) : 0.0;
  s.q025 = quantile(x, 0.025);
  s.median = quantile(x, 0.5);
  s.q975 = quantile(x, 0.975);
  s.ess = ess_initial_monotone(x);
  return s;
}

}  // namespace unimix
