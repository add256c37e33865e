#include "unimix/ars.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "unimix/math.hpp"

namespace unimix {

namespace {

// log of integral_{zlo}^{zhi} exp(m*x + q) dx
double log_segment_mass(double m, double q, double zlo, double zhi) {
  double len = zhi - zlo;
  if (!(len > 0.0)) return -std::numeric_limits<double>::infinity();
  double delta = m * len;
  if (std::abs(delta) < 1e-12) {
    return q + m * zlo + std::log(len);
  }
  if (m > 0.0) {
    // exp(q + m*zhi) * (1 - exp(-delta)) / m
    return q + m * zhi + std::log1p(-std::exp(-delta)) - std::log(m);
  }
  return q + m * zlo + std::log1p(-std::exp(delta)) - std::log(-m);
}

}  // namespace

Ars::Ars(LogDensity log_f, double lo, double hi, std::vector<double> init_points)
    : log_f_(std::move(log_f)), lo_(lo), hi_(hi) {
  if (!(hi_ > lo_)) throw std::invalid_argument("Ars: empty interval");
  std::sort(init_points.begin(), init_points.end());
  for (double x : init_points) {
    if (x <= lo_ || x >= hi_) continue;
    if (!points_.empty() && x - points_.back().x < 1e-12) continue;
    auto [h, dh] = log_f_(x);
    if (std::isfinite(h)) points_.push_back({x, h, dh});
  }
  if (points_.empty())
    throw std::invalid_argument("Ars: no finite initial point in the interior");
  rebuild();
}

void Ars::insert_point(double x) {
  if (static_cast<int>(points_.size()) >= max_points_) return;
  auto [h, dh] = log_f_(x);
  if (!std::isfinite(h)) return;
  auto it = std::lower_bound(points_.begin(), points_.end(), x,
                             [](const Point& p, double v) { return p.x < v; });
  if (it != points_.end() && std::abs(it->x - x) < 1e-12) return;
  if (it != points_.begin() && std::abs(std::prev(it)->x - x) < 1e-12) return;
  points_.insert(it, {x, h, dh});
  rebuild();
}

void Ars::rebuild() {
  segments_.clear();
  const std::size_t k = points_.size();
  std::vector<double> z(k + 1);
  z[0] = lo_;
  z[k] = hi_;
  for (std::size_t j = 0; j + 1 < k; ++j) {
    const Point& a = points_[j];
    const Point& b = points_[j + 1];
    double denom = a.dh - b.dh;
    double zj;
    if (std::abs(denom) < 1e-12) {
      zj = 0.5 * (a.x + b.x);
    } else {
      zj = (b.h - a.h - b.x * b.dh + a.x * a.dh) / denom;
      // concavity violations from rounding: fall back to the midpoint
      if (!(zj >= a.x && zj <= b.x)) zj = 0.5 * (a.x + b.x);
    }
    z[j + 1] = zj;
  }
  for (std::size_t j = 0; j < k; ++j) {
    const Point& p = points_[j];
    Segment s;
    s.zlo = z[j];
    s.zhi = z[j + 1];
    s.m = p.dh;
    s.q = p.h - p.dh * p.x;
    s.log_mass = log_segment_mass(s.m, s.q, s.zlo, s.zhi);
    if (std::isfinite(s.log_mass)) segments_.push_back(s);
  }
  if (segments_.empty()) throw std::runtime_error("Ars: degenerate hull");
}

double Ars::hull_at(double x) const {
  for (const Segment& s : segments_) {
    if (x >= s.zlo && x <= s.zhi) return s.m * x + s.q;
  }
  const Segment& s = x < segments_.front().zlo ? segments_.front() : segments_.back();
  return s.m * x + s.q;
}

double Ars::sample_segment(const Segment& s, double u) const {
  double len = s.zhi - s.zlo;
  double delta = s.m * len;
  if (std::abs(delta) < 1e-12) return s.zlo + u * len;
  // invert the exponential-tilt CDF on the piece
  double t = std::log1p(u * std::expm1(delta)) / s.m;
  return std::min(s.zhi, std::max(s.zlo, s.zlo + t));
}

double Ars::sample(Rng& rng) {
  for (int iter = 0; iter < 10000; ++iter) {
    std::vector<double> lm(segments_.size());
    for (std::size_t j = 0; j < segments_.size(); ++j) lm[j] = segments_[j].log_mass;
    double total = log_sum_exp(lm);
    double target = rng.uniform();
    double cum = 0.0;
    std::size_t pick = segments_.size() - 1;
    for (std::size_t j = 0; j < segments_.size(); ++j) {
      cum += std::exp(lm[j] - total);
      if (target <= cum) {
        pick = j;
        break;
      }
    }
    double x = sample_segment(segments_[pick], rng.uniform());
    if (x <= lo_ || x > hi_) continue;
    double hx = hull_at(x);
    auto [fx, dfx] = log_f_(x);
    if (fx > hx + 1e-7)
      throw std::runtime_error("Ars: envelope violation (density not log-concave?)");
    if (std::log(rng.uniform_pos()) <= fx - hx) return x;
    insert_point(x);
  }
  throw std::runtime_error("Ars: trial cap reached");
}

}  // namespace unimix
