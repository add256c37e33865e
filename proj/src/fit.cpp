#include "unimix/fit.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "unimix/diagnostics.hpp"
#include "unimix/kernel.hpp"
#include "unimix/math.hpp"
#include "unimix/mcmc_bridge.hpp"

namespace unimix {

namespace {

using json = nlohmann::json;

double nonzero_normal(double mean, double sd, Rng& rng) {
  double z;
  do {
    z = rng.normal(mean, sd);
  } while (z == 0.0);
  return z;
}

double draw_nonzero_mu(double sigma_mu2, Rng& rng) {
  double mu;
  do {
    mu = rng.normal(0.0, std::sqrt(sigma_mu2));
  } while (mu == 0.0);
  return mu;
}

// Component index from snapshot weights; -1 means "past the truncation":
// the caller draws fresh parameters from the prior.
int pick_component(std::span<const double> w, double M, Rng& rng) {
  double u = rng.uniform();
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (u < w[j]) return static_cast<int>(j);
    u -= w[j];
  }
  // in the leftover stick mass: walk prior sticks until one is hit
  for (int guard = 0; guard < 100000; ++guard) {
    double v = rng.beta(1.0, M);
    if (rng.uniform() < v) break;
  }
  return -1;
}

std::string model_name(FitModel m) {
  switch (m) {
    case FitModel::uni_marginal: return "uni_marginal";
    case FitModel::uni_bridge: return "uni_bridge";
    case FitModel::bivariate: return "bivariate";
  }
  return "unknown";
}

UniSnapshot snapshot_of(const UniChainState& st) {
  UniSnapshot s;
  s.w = st.sticks.w;
  s.w.resize(st.truncation());
  s.mus = st.mus;
  s.c = st.c;
  s.kappa = st.kappa;
  s.M = st.sticks.M;
  s.n_clusters = count_distinct(st.alloc.d);
  return s;
}

BivSnapshot snapshot_of(const BivChainState& st) {
  BivSnapshot s;
  s.w = st.sticks.w;
  s.w.resize(st.truncation());
  s.mus = st.mus;
  s.c = st.c;
  s.kappa = st.kappa;
  s.rho = st.rho;
  s.M = st.sticks.M;
  s.n_clusters = count_distinct(st.alloc.d);
  return s;
}

void accumulate(MoveCounters& total, const MoveCounters& c) {
  total.mu_accept += c.mu_accept;
  total.mu_total += c.mu_total;
  total.c_accept += c.c_accept;
  total.c_total += c.c_total;
  total.kappa_accept += c.kappa_accept;
  total.kappa_total += c.kappa_total;
  total.rho_accept += c.rho_accept;
  total.rho_total += c.rho_total;
  total.x_copula_fallbacks += c.x_copula_fallbacks;
  total.x_updates += c.x_updates;
}

}  // namespace

double predictive_draw_uni(const UniSnapshot& s, const PriorConfig& priors,
                           Rng& rng) {
  int j = pick_component(s.w, s.M, rng);
  double mu = j >= 0 ? s.mus[j] : draw_nonzero_mu(priors.sigma_mu2, rng);
  return sample_kernel(KernelParams(mu, s.c, s.kappa), rng);
}

std::array<double, 2> predictive_draw_biv(const BivSnapshot& s,
                                          const PriorConfig& priors, Rng& rng) {
  int j = pick_component(s.w, s.M, rng);
  std::array<double, 2> mu;
  if (j >= 0) {
    mu = s.mus[j];
  } else {
    mu = {draw_nonzero_mu(priors.sigma_mu2, rng),
          draw_nonzero_mu(priors.sigma_mu2, rng)};
  }
  auto [x1, x2] = sample_copula_pair(s.rho, rng);
  std::array<double, 2> x{x1, x2};
  std::array<double, 2> y;
  for (int l = 0; l < 2; ++l) {
    double z = nonzero_normal(mu[l], std::abs(mu[l]) / std::sqrt(s.c[l]), rng);
    y[l] = s.kappa[l] + x[l] / z;
  }
  return y;
}

FitResult run_fit(const RunConfig& cfg, const Dataset& data) {
  const auto& ch = cfg.chain;
  if (!(ch.iterations > ch.burn_in && ch.burn_in >= 0 && ch.thin >= 1 &&
        ch.n_chains >= 1))
    throw std::invalid_argument("run_fit: bad chain configuration");
  const bool biv = cfg.model == FitModel::bivariate;
  if (biv && data.dim() != 2)
    throw std::invalid_argument("run_fit: bivariate model needs 2 columns");
  if (!biv && data.dim() != 1)
    throw std::invalid_argument("run_fit: univariate model needs 1 column");
  if (data.n() < 2) throw std::invalid_argument("run_fit: need n >= 2");

  FitResult out;
  out.model = cfg.model;
  if (biv) {
    out.draw_names = {"chain", "iter", "kappa1", "kappa2", "c1",
                      "c2",    "M",    "rho",    "n_clusters"};
    out.pred_names = {"chain", "y1", "y2"};
  } else {
    out.draw_names = {"chain", "iter", "kappa", "c", "M", "n_clusters"};
    out.pred_names = {"chain", "y"};
  }

  const auto t0 = std::chrono::steady_clock::now();
  for (int k = 0; k < ch.n_chains; ++k) {
    Rng rng = Rng::substream(ch.seed, static_cast<std::uint64_t>(k));
    MoveCounters counters;
    if (biv) {
      BivChainState st = init_biv_state(data, cfg.priors, rng);
      for (long t = 1; t <= ch.iterations; ++t) {
        sweep_biv(st, data, cfg.priors, cfg.tuning, rng, &counters);
        if (t > ch.burn_in && (t - ch.burn_in) % ch.thin == 0) {
          BivSnapshot s = snapshot_of(st);
          out.draws.push_back({double(k), double(t), s.kappa[0], s.kappa[1],
                               s.c[0], s.c[1], s.M, s.rho,
                               double(s.n_clusters)});
          auto y = predictive_draw_biv(s, cfg.priors, rng);
          out.predictive.push_back({double(k), y[0], y[1]});
          out.biv_states.push_back(std::move(s));
        }
      }
    } else {
      const bool bridge = cfg.model == FitModel::uni_bridge;
      BridgeChainState bst;
      UniChainState ust;
      if (bridge) bst = init_bridge_state(data, cfg.priors, rng);
      else ust = init_uni_state(data, cfg.priors, rng);
      for (long t = 1; t <= ch.iterations; ++t) {
        if (bridge) sweep_bridge(bst, data, cfg.priors, cfg.tuning, rng, &counters);
        else sweep_uni(ust, data, cfg.priors, cfg.tuning, rng, &counters);
        if (t > ch.burn_in && (t - ch.burn_in) % ch.thin == 0) {
          UniSnapshot s = snapshot_of(bridge ? bst.base : ust);
          out.draws.push_back({double(k), double(t), s.kappa, s.c, s.M,
                               double(s.n_clusters)});
          out.predictive.push_back(
              {double(k), predictive_draw_uni(s, cfg.priors, rng)});
          out.uni_states.push_back(std::move(s));
        }
      }
    }
    accumulate(out.counters, counters);
  }
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return out;
}

namespace {

json snapshot_json(const UniSnapshot& s) {
  return json{{"w", s.w},     {"mus", s.mus}, {"c", s.c},
              {"kappa", s.kappa}, {"M", s.M},     {"n_clusters", s.n_clusters}};
}

json snapshot_json(const BivSnapshot& s) {
  return json{{"w", s.w},     {"mus", s.mus}, {"c", s.c},   {"kappa", s.kappa},
              {"rho", s.rho}, {"M", s.M},     {"n_clusters", s.n_clusters}};
}

void write_text(const std::string& path, const std::string& text) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("cannot open " + path);
  std::fwrite(text.data(), 1, text.size(), f);
  std::fclose(f);
}

}  // namespace

void write_artifacts(const FitResult& result, const RunConfig& cfg,
                     const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  auto at = [&](const char* name) { return (fs::path(out_dir) / name).string(); };

  write_csv(at("draws.csv"), result.draw_names, result.draws);
  write_csv(at("predictive.csv"), result.pred_names, result.predictive);

  // diagnostics.csv: one row per recorded parameter
  std::string diag = "param,mean,sd,q025,median,q975,ess\n";
  char buf[256];
  for (std::size_t col = 2; col < result.draw_names.size(); ++col) {
    std::vector<double> x(result.draws.size());
    for (std::size_t r = 0; r < result.draws.size(); ++r)
      x[r] = result.draws[r][col];
    ColumnSummary s = summarize_column(x);
    std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  result.draw_names[col].c_str(), s.mean, s.sd, s.q025,
                  s.median, s.q975, s.ess);
    diag += buf;
  }
  write_text(at("diagnostics.csv"), diag);

  const MoveCounters& c = result.counters;
  auto rate = [](long a, long t) { return t > 0 ? double(a) / double(t) : 0.0; };
  json manifest{
      {"model", model_name(result.model)},
      {"input", cfg.input_path},
      {"columns", json::array()},
      {"priors",
       {{"sigma_mu2", cfg.priors.sigma_mu2},
        {"sigma_kappa2", cfg.priors.sigma_kappa2},
        {"alpha_c", cfg.priors.alpha_c},
        {"beta_c", cfg.priors.beta_c},
        {"alpha_M", cfg.priors.alpha_M},
        {"beta_M", cfg.priors.beta_M}}},
      {"tuning",
       {{"h_mu", cfg.tuning.h_mu},
        {"h_c", cfg.tuning.h_c},
        {"h_rho", cfg.tuning.h_rho},
        {"m", cfg.tuning.m},
        {"trial_cap", cfg.tuning.trial_cap},
        {"gamma", cfg.tuning.gamma},
        {"latent_conditional_dk", cfg.tuning.latent_conditional_dk},
        {"stick_m_update", cfg.tuning.stick_m_update}}},
      {"chain",
       {{"iterations", cfg.chain.iterations},
        {"burn_in", cfg.chain.burn_in},
        {"thin", cfg.chain.thin},
        {"seed", cfg.chain.seed},
        {"n_chains", cfg.chain.n_chains}}},
      {"retained", result.draws.size()},
      {"acceptance",
       {{"mu", rate(c.mu_accept, c.mu_total)},
        {"c", rate(c.c_accept, c.c_total)},
        {"kappa", rate(c.kappa_accept, c.kappa_total)},
        {"rho", rate(c.rho_accept, c.rho_total)},
        {"x_ars_fallback", rate(c.x_copula_fallbacks, c.x_updates)}}},
      {"wall_seconds", result.wall_seconds}};
  if (!cfg.column1.empty()) manifest["columns"].push_back(cfg.column1);
  if (!cfg.column2.empty()) manifest["columns"].push_back(cfg.column2);
  write_text(at("manifest.json"), manifest.dump(2) + "\n");

  json states = json::array();
  if (result.model == FitModel::bivariate) {
    for (const auto& s : result.biv_states) states.push_back(snapshot_json(s));
  } else {
    for (const auto& s : result.uni_states) states.push_back(snapshot_json(s));
  }
  write_text(at("states.json"), states.dump() + "\n");
}

std::vector<BivSnapshot> read_biv_states(const std::string& states_path) {
  std::ifstream in(states_path);
  if (!in) throw std::runtime_error("cannot open " + states_path);
  json j;
  in >> j;
  std::vector<BivSnapshot> out;
  for (const auto& e : j) {
    BivSnapshot s;
    s.w = e.at("w").get<std::vector<double>>();
    for (const auto& m : e.at("mus"))
      s.mus.push_back({m.at(0).get<double>(), m.at(1).get<double>()});
    s.c = {e.at("c").at(0).get<double>(), e.at("c").at(1).get<double>()};
    s.kappa = {e.at("kappa").at(0).get<double>(),
               e.at("kappa").at(1).get<double>()};
    s.rho = e.at("rho").get<double>();
    s.M = e.at("M").get<double>();
    s.n_clusters = e.at("n_clusters").get<int>();
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<ConditionalBand> predict_conditional(
    std::span<const BivSnapshot> states, std::span<const double> given,
    int draws_per_state, std::uint64_t seed) {
  if (states.empty()) throw std::invalid_argument("predict_conditional: no states");
  if (draws_per_state < 1) draws_per_state = 1;
  std::vector<ConditionalBand> bands;
  bands.reserve(given.size());
  std::vector<double> y2;
  std::vector<double> log_mass;
  for (std::size_t g = 0; g < given.size(); ++g) {
    Rng rng = Rng::substream(seed, g);
    const double y1 = given[g];
    y2.clear();
    for (const auto& s : states) {
      if (y1 == s.kappa[0]) continue;  // latent form undefined exactly there
      log_mass.resize(s.mus.size());
      for (std::size_t j = 0; j < s.mus.size(); ++j) {
        log_mass[j] = (s.w[j] > 0.0 ? std::log(s.w[j])
                                    : -std::numeric_limits<double>::infinity()) +
                      log_kernel_density(y1, s.mus[j][0], s.c[0], s.kappa[0]);
      }
      for (int r = 0; r < draws_per_state; ++r) {
        int j = sample_from_log_masses(log_mass, rng);
        if (j < 0) j = pick_component(s.w, s.M, rng);
        if (j < 0) continue;
        double x1 = ars_sample_x(y1, s.mus[j][0], s.c[0], s.kappa[0], rng);
        double x2 = sample_copula_conditional(x1, s.rho, rng);
        double z2 = nonzero_normal(s.mus[j][1],
                                   std::abs(s.mus[j][1]) / std::sqrt(s.c[1]), rng);
        y2.push_back(s.kappa[1] + x2 / z2);
      }
    }
    if (y2.empty())
      throw std::runtime_error("predict_conditional: no draws for given value");
    bands.push_back({y1, quantile(y2, 0.025), quantile(y2, 0.5),
                     quantile(y2, 0.975)});
  }
  return bands;
}

}  // namespace unimix
