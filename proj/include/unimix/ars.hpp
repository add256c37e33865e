#ifndef UNIMIX_ARS_HPP
#define UNIMIX_ARS_HPP

#include <functional>
#include <vector>

#include "unimix/rng.hpp"

namespace unimix {

// Adaptive rejection sampling (tangent upper hull) for a log-concave density
// on a bounded interval. log_f returns {log density, derivative}; the density
// may vanish at the interval edges.
class Ars {
 public:
  using LogDensity = std::function<std::pair<double, double>(double)>;

  Ars(LogDensity log_f, double lo, double hi, std::vector<double> init_points);

  double sample(Rng& rng);

 private:
  struct Point {
    double x;
    double h;   // log f(x)
    double dh;  // d/dx log f(x)
  };
  struct Segment {
    double zlo, zhi;   // hull piece support
    double m, q;       // hull line: m*x + q
    double log_mass;   // log of integral of exp(hull) over the piece
  };

  void insert_point(double x);
  void rebuild();
  double hull_at(double x) const;
  double sample_segment(const Segment& s, double u) const;

  LogDensity log_f_;
  double lo_, hi_;
  std::vector<Point> points_;
  std::vector<Segment> segments_;
  int max_points_ = 64;
};

}  // namespace unimix

#endif
