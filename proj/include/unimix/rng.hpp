#ifndef UNIMIX_RNG_HPP
#define UNIMIX_RNG_HPP

#include <cstdint>
#include <random>

namespace unimix {

// One Rng per chain (or per deterministic substream); never shared.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Deterministic substream derivation: hash (root, stream) with splitmix64.
  static Rng substream(std::uint64_t root, std::uint64_t stream) {
    std::uint64_t z = root + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return Rng(z ^ (z >> 31));
  }

  double uniform() { return unit_(engine_); }

  double uniform(double a, double b) { return a + (b - a) * unit_(engine_); }

  // U(0,1) bounded away from 0 (safe under log()).
  double uniform_pos() {
    double u;
    do {
      u = unit_(engine_);
    } while (u <= 0.0);
    return u;
  }

  double normal(double mean = 0.0, double sd = 1.0) {
    return mean + sd * std::normal_distribution<double>()(engine_);
  }

  double gamma(double shape, double rate) {
    return std::gamma_distribution<double>(shape, 1.0 / rate)(engine_);
  }

  double beta(double a, double b) {
    // Keep the draw inside the open interval: gamma draws with a tiny shape
    // underflow to exactly 0, and a beta draw of exactly 0 or 1 turns
    // downstream log() terms infinite (and can absorb Gibbs chains).
    for (int attempt = 0; attempt < 100; ++attempt) {
      double x = gamma(a, 1.0);
      double y = gamma(b, 1.0);
      double r = x / (x + y);
      if (r > 0.0 && r < 1.0) return r;
    }
    double x = gamma(a, 1.0);
    double y = gamma(b, 1.0);
    double r = x / (x + y);
    if (!(r > 1e-300)) return 1e-300;
    if (!(r < 1.0)) return 1.0 - 1e-16;
    return r;
  }

  // Uniform over {a, ..., b}.
  int uniform_int(int a, int b) {
    return std::uniform_int_distribution<int>(a, b)(engine_);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

}  // namespace unimix

#endif
