#ifndef UNIMIX_MATH_HPP
#define UNIMIX_MATH_HPP

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>

namespace unimix {

inline constexpr double kLogTwoPi = 1.8378770664093454836;
inline constexpr double kSqrtTwoPi = 2.5066282746310005024;

inline double norm_pdf(double z) {
  return std::exp(-0.5 * z * z) / kSqrtTwoPi;
}

inline double log_norm_pdf(double z) {
  return -0.5 * (z * z + kLogTwoPi);
}

inline double norm_pdf(double s, double mean, double sd) {
  return norm_pdf((s - mean) / sd) / sd;
}

inline double log_norm_pdf(double s, double mean, double sd) {
  return log_norm_pdf((s - mean) / sd) - std::log(sd);
}

// Abs accuracy ~1e-16 via erfc.
inline double norm_cdf(double z) {
  return 0.5 * std::erfc(-z * M_SQRT1_2);
}

// Standard normal quantile: Acklam's rational approximation polished with one
// Halley step against erfc, abs error < 1e-13 on (0,1).
double norm_quantile(double p);

double log_sum_exp(std::span<const double> log_terms);

}  // namespace unimix

#endif
