#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "support/stats.hpp"
#include "unimix/diagnostics.hpp"
#include "unimix/fit.hpp"
#include "unimix/simulate.hpp"

using namespace unimix;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string((std::istreambuf_iterator<char>(in)), {});
}

RunConfig small_config(FitModel model, std::uint64_t seed) {
  RunConfig cfg;
  cfg.model = model;
  cfg.chain = {300, 100, 10, seed, 1};
  return cfg;
}

}  // namespace

TEST_CASE("run_fit retains the right number of states") {
  Rng rng(1);
  Dataset d = to_dataset(simulate_model_a(40, rng));
  RunConfig cfg = small_config(FitModel::uni_marginal, 2);
  FitResult r = run_fit(cfg, d);
  CHECK(r.draws.size() == 20);  // (300 - 100) / 10
  CHECK(r.predictive.size() == 20);
  CHECK(r.uni_states.size() == 20);
  CHECK(r.draw_names.size() == r.draws[0].size());
  CHECK(r.counters.mu_total > 0);

  cfg.chain.n_chains = 3;
  FitResult r3 = run_fit(cfg, d);
  CHECK(r3.draws.size() == 60);
  CHECK(r3.draws[0][0] == 0.0);
  CHECK(r3.draws[59][0] == 2.0);
}

TEST_CASE("run_fit validates configuration and data shape") {
  Rng rng(2);
  Dataset d1 = to_dataset(simulate_model_a(10, rng));
  Dataset d2 = to_dataset(simulate_biv_normal(10, rng));
  RunConfig cfg = small_config(FitModel::bivariate, 1);
  CHECK_THROWS_AS(run_fit(cfg, d1), std::invalid_argument);
  cfg.model = FitModel::uni_marginal;
  CHECK_THROWS_AS(run_fit(cfg, d2), std::invalid_argument);
  cfg.chain.burn_in = 400;  // >= iterations
  CHECK_THROWS_AS(run_fit(cfg, d1), std::invalid_argument);
}

TEST_CASE("artifacts are byte-identical across identical runs") {
  Rng rng(3);
  Dataset d = to_dataset(simulate_biv_normal(25, rng));
  RunConfig cfg = small_config(FitModel::bivariate, 7);
  std::string dir_a = "/tmp/unimix_fit_a", dir_b = "/tmp/unimix_fit_b",
              dir_c = "/tmp/unimix_fit_c";
  write_artifacts(run_fit(cfg, d), cfg, dir_a);
  write_artifacts(run_fit(cfg, d), cfg, dir_b);
  for (const char* f : {"draws.csv", "predictive.csv", "states.json"}) {
    CHECK(slurp(dir_a + "/" + f) == slurp(dir_b + "/" + f));
  }
  cfg.chain.seed = 8;
  write_artifacts(run_fit(cfg, d), cfg, dir_c);
  CHECK(slurp(dir_a + "/draws.csv") != slurp(dir_c + "/draws.csv"));

  // states round-trip
  auto states = read_biv_states(dir_a + "/states.json");
  CHECK(states.size() == 20);
  CHECK(states[0].rho >= 0.0);
  CHECK(states[0].mus.size() == states[0].w.size());
}

TEST_CASE("predictive draws from a single-component state follow the kernel") {
  UniSnapshot s;
  s.w = {1.0};
  s.mus = {-5.0};
  s.c = 1.0;
  s.kappa = 10.0;
  Rng rng(4);
  const int n = 20000;
  std::vector<double> pred(n), direct(n);
  PriorConfig priors;
  for (auto& v : pred) v = predictive_draw_uni(s, priors, rng);
  KernelParams p(-5.0, 1.0, 10.0);
  for (auto& v : direct) v = sample_kernel(p, rng);
  CHECK(testsup::ks_stat2(pred, direct) < testsup::ks_crit2(n, n));
}

TEST_CASE("predictive component frequencies follow the weights") {
  UniSnapshot s;
  s.w = {0.8, 0.2};
  s.mus = {-5.0, 20.0};
  s.c = 1.0;
  s.kappa = 10.0;
  Rng rng(5);
  PriorConfig priors;
  const int n = 20000;
  int below = 0;  // mu < 0 puts the draw below kappa
  for (int i = 0; i < n; ++i) below += predictive_draw_uni(s, priors, rng) < 10.0;
  // P(y < kappa) = 0.8 Phi(sqrt(c)) + 0.2 Phi(-sqrt(c)) for (mu<0, mu>0)
  double p = 0.8 * 0.8413447460685429 + 0.2 * (1 - 0.8413447460685429);
  CHECK(std::abs(double(below) / n - p) < 3.0 * std::sqrt(p * (1 - p) / n));
}

TEST_CASE("conditional prediction reduces to the marginal at rho = 0") {
  BivSnapshot s;
  s.w = {1.0};
  s.mus = {{3.0, -5.0}};
  s.c = {1.0, 1.0};
  s.kappa = {0.0, 10.0};
  s.rho = 0.0;
  std::vector<BivSnapshot> states(200, s);
  std::vector<double> given{0.2};
  auto bands = predict_conditional(states, given, 100, 9);
  // marginal of y2: kernel(mu=-5, c=1, kappa=10); median below kappa
  Rng rng(10);
  KernelParams p(-5.0, 1.0, 10.0);
  std::vector<double> direct(20000);
  for (auto& v : direct) v = sample_kernel(p, rng);
  CHECK(std::abs(bands[0].median - quantile(direct, 0.5)) < 0.05);
  CHECK(std::abs(bands[0].q975 - quantile(direct, 0.975)) < 0.2);
  CHECK(bands[0].given == 0.2);
}

TEST_CASE("manifest and diagnostics files exist with content") {
  Rng rng(6);
  Dataset d = to_dataset(simulate_model_a(20, rng));
  RunConfig cfg = small_config(FitModel::uni_bridge, 3);
  cfg.input_path = "synthetic";
  write_artifacts(run_fit(cfg, d), cfg, "/tmp/unimix_fit_m");
  std::string manifest = slurp("/tmp/unimix_fit_m/manifest.json");
  CHECK(manifest.find("\"model\": \"uni_bridge\"") != std::string::npos);
  CHECK(manifest.find("\"seed\": 3") != std::string::npos);
  std::string diag = slurp("/tmp/unimix_fit_m/diagnostics.csv");
  CHECK(diag.find("kappa,") != std::string::npos);
  CHECK(diag.find("ess") != std::string::npos);
}
