#ifndef UNIMIX_DIAGNOSTICS_HPP
#define UNIMIX_DIAGNOSTICS_HPP

#include <span>
#include <vector>

namespace unimix {

// Effective sample size via the initial-monotone-sequence estimator on the
// lag-pair sums of the autocovariance. Returns n for (near-)white series,
// and caps at n.
double ess_initial_monotone(std::span<const double> x);

double mean(std::span<const double> x);
double sample_sd(std::span<const double> x);

// Linear-interpolation quantile of an unsorted sample, p in [0, 1].
double quantile(std::span<const double> x, double p);

struct ColumnSummary {
  double mean = 0.0;
  double sd = 0.0;
  double q025 = 0.0;
  double median = 0.0;
  double q975 = 0.0;
  double ess = 0.0;
};

ColumnSummary summarize_column(std::span<const double> x);

}  // namespace unimix

#endif
