#ifndef UNIMIX_FIT_HPP
#define UNIMIX_FIT_HPP

#include <array>
#include <span>
#include <string>
#include <vector>

#include "unimix/config.hpp"
#include "unimix/data.hpp"
#include "unimix/mcmc_biv.hpp"

namespace unimix {

// A retained posterior state, reduced to what prediction needs.
struct UniSnapshot {
  std::vector<double> w;
  std::vector<double> mus;
  double c = 1.0;
  double kappa = 0.0;
  double M = 1.0;
  int n_clusters = 1;
};

struct BivSnapshot {
  std::vector<double> w;
  std::vector<std::array<double, 2>> mus;
  std::array<double, 2> c{1.0, 1.0};
  std::array<double, 2> kappa{0.0, 0.0};
  double rho = 0.5;
  double M = 1.0;
  int n_clusters = 1;
};

struct FitResult {
  FitModel model = FitModel::uni_marginal;
  std::vector<std::string> draw_names;
  std::vector<std::vector<double>> draws;       // one row per retained state
  std::vector<std::string> pred_names;
  std::vector<std::vector<double>> predictive;  // one row per retained state
  std::vector<UniSnapshot> uni_states;
  std::vector<BivSnapshot> biv_states;
  MoveCounters counters;                        // summed over chains
  double wall_seconds = 0.0;
};

FitResult run_fit(const RunConfig& cfg, const Dataset& data);

// Writes draws.csv, predictive.csv, diagnostics.csv, manifest.json and
// states.json under out_dir (created if missing).
void write_artifacts(const FitResult& result, const RunConfig& cfg,
                     const std::string& out_dir);

// Reloads the retained bivariate states written by write_artifacts.
std::vector<BivSnapshot> read_biv_states(const std::string& states_path);

// One future observation from a retained state; sticks/component draws past
// the truncation come from the prior.
double predictive_draw_uni(const UniSnapshot& s, const PriorConfig& priors,
                           Rng& rng);
std::array<double, 2> predictive_draw_biv(const BivSnapshot& s,
                                          const PriorConfig& priors, Rng& rng);

struct ConditionalBand {
  double given;
  double q025;
  double median;
  double q975;
};

// Y2 | Y1 = given, averaged over retained states: component ~ w_j * f(y1 | .),
// x1 from its latent conditional, x2 from the copula conditional, then
// y2 = kappa2 + x2/z2.
std::vector<ConditionalBand> predict_conditional(
    std::span<const BivSnapshot> states, std::span<const double> given,
    int draws_per_state, std::uint64_t seed);

}  // namespace unimix

#endif
