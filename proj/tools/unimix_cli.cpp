#include <array>
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "unimix/data.hpp"
#include "unimix/diagnostics.hpp"
#include "unimix/fit.hpp"
#include "unimix/simulate.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Wraps file/CSV problems so main can map them to the data exit code.
template <typename F>
auto load_or_data_error(F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    throw DataError(e.what());
  }
}

void add_run_options(CLI::App* cmd, unimix::RunConfig& cfg,
                     std::string& model_name, std::string& preset) {
  cmd->add_option("--model", model_name,
                  "uni_marginal | uni_bridge | bivariate");
  cmd->add_option("--preset", preset,
                  "chain preset: paper-uni | paper-biv (flags override)");
  cmd->add_option("--sigma-mu2", cfg.priors.sigma_mu2, "prior variance of mu");
  cmd->add_option("--sigma-kappa2", cfg.priors.sigma_kappa2,
                  "prior variance of kappa");
  cmd->add_option("--alpha-c", cfg.priors.alpha_c);
  cmd->add_option("--beta-c", cfg.priors.beta_c);
  cmd->add_option("--alpha-M", cfg.priors.alpha_M);
  cmd->add_option("--beta-M", cfg.priors.beta_M);
  cmd->add_option("--h-mu", cfg.tuning.h_mu, "mu proposal variance");
  cmd->add_option("--h-c", cfg.tuning.h_c, "log-c proposal variance");
  cmd->add_option("--h-rho", cfg.tuning.h_rho, "logit-rho proposal variance");
  cmd->add_option("--kappa-window", cfg.tuning.m, "kappa move window m");
  cmd->add_option("--trial-cap", cfg.tuning.trial_cap,
                  "copula-proposal trials before ARS fallback");
  cmd->add_option("--gamma", cfg.tuning.gamma, "slice bound rate");
  cmd->add_flag("--latent-conditional-dk", cfg.tuning.latent_conditional_dk,
                "use latent-conditional kernels in the bivariate (d,kappa) stage");
  cmd->add_flag("!--escobar-west-m", cfg.tuning.stick_m_update,
                "use the two-step Beta/Gamma M update instead of the stick Gibbs");
  cmd->add_option("--iterations", cfg.chain.iterations);
  cmd->add_option("--burn-in", cfg.chain.burn_in);
  cmd->add_option("--thin", cfg.chain.thin);
  cmd->add_option("--seed", cfg.chain.seed);
  cmd->add_option("--chains", cfg.chain.n_chains);
}

unimix::FitModel parse_model(const std::string& name) {
  if (name == "uni_marginal") return unimix::FitModel::uni_marginal;
  if (name == "uni_bridge") return unimix::FitModel::uni_bridge;
  if (name == "bivariate") return unimix::FitModel::bivariate;
  throw CLI::ValidationError("--model", "unknown model: " + name);
}

int run(int argc, char** argv) {
  CLI::App app{"unimodal mixture models: simulation, MCMC fits, prediction"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value config file (flags override)");

  // simulate
  auto* sim = app.add_subcommand("simulate", "generate a reference dataset");
  std::string sim_kind = "model_a", sim_out = "data.csv";
  std::size_t sim_n = 100;
  std::uint64_t sim_seed = 1;
  bool scale_convention = false;
  std::vector<double> gen_weights{1.0}, gen_mus{5.0};
  double gen_c = 1.0, gen_kappa = 0.0;
  sim->add_option("--kind", sim_kind,
                  "model_a | model_b | biv_normal | generative");
  sim->add_option("--n", sim_n)->check(CLI::PositiveNumber);
  sim->add_option("--seed", sim_seed);
  sim->add_option("--out", sim_out, "output CSV path");
  sim->add_flag("--scale-convention", scale_convention,
                "read ga(3,10) as shape/scale instead of shape/rate");
  sim->add_option("--weights", gen_weights, "generative mixture weights");
  sim->add_option("--mus", gen_mus, "generative component means");
  sim->add_option("--c", gen_c, "generative c");
  sim->add_option("--kappa", gen_kappa, "generative kappa");

  // fit
  auto* fit = app.add_subcommand("fit", "run MCMC and write run artifacts");
  unimix::RunConfig cfg;
  std::string model_name = "uni_marginal", preset;
  fit->add_option("--input", cfg.input_path, "input CSV")->required();
  fit->add_option("--out", cfg.output_dir, "output directory")->required();
  fit->add_option("--column", cfg.column1, "column name (first numeric if unset)");
  fit->add_option("--column2", cfg.column2, "second column (bivariate)");
  add_run_options(fit, cfg, model_name, preset);

  // predict
  auto* pred = app.add_subcommand(
      "predict", "conditional prediction Y2 | Y1 from a bivariate fit");
  std::string pred_states, pred_out = "conditional.csv";
  std::vector<double> pred_given;
  std::string pred_given_file, pred_given_col;
  int draws_per_state = 1;
  std::uint64_t pred_seed = 1;
  pred->add_option("--states", pred_states, "states.json from a bivariate fit")
      ->required();
  pred->add_option("--given", pred_given, "conditioning values of column 1");
  pred->add_option("--given-file", pred_given_file,
                   "CSV of conditioning values");
  pred->add_option("--given-column", pred_given_col,
                   "column to read from --given-file");
  pred->add_option("--draws-per-state", draws_per_state);
  pred->add_option("--seed", pred_seed);
  pred->add_option("--out", pred_out);

  // summarize
  auto* summ = app.add_subcommand("summarize", "report on a draws.csv");
  std::string summ_draws, summ_out;
  summ->add_option("--draws", summ_draws, "draws.csv from a fit")->required();
  summ->add_option("--out", summ_out, "write CSV report here (default stdout)");

  // study-dependence
  auto* dep = app.add_subcommand(
      "study-dependence", "empirical corr(Y1,Y2) bands vs imposed correlation");
  std::string dep_side = "X", dep_out = "dependence.csv";
  double dep_mu1 = 10.0, dep_mu2 = 10.0;
  std::vector<double> dep_grid{-0.9, -0.5, 0.0, 0.5, 0.9};
  int dep_reps = 200;
  std::size_t dep_n = 1000;
  std::uint64_t dep_seed = 1;
  dep->add_option("--side", dep_side, "Z | X");
  dep->add_option("--mu1", dep_mu1);
  dep->add_option("--mu2", dep_mu2);
  dep->add_option("--grid", dep_grid, "imposed correlations, each in (-1,1)");
  dep->add_option("--reps", dep_reps)->check(CLI::PositiveNumber);
  dep->add_option("--n", dep_n)->check(CLI::PositiveNumber);
  dep->add_option("--seed", dep_seed);
  dep->add_option("--out", dep_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (sim->parsed()) {
    unimix::Rng rng(sim_seed);
    unimix::Dataset d;
    if (sim_kind == "model_a") {
      d = unimix::to_dataset(unimix::simulate_model_a(sim_n, rng));
    } else if (sim_kind == "model_b") {
      d = unimix::to_dataset(
          unimix::simulate_model_b(sim_n, rng, !scale_convention));
    } else if (sim_kind == "biv_normal") {
      d = unimix::to_dataset(unimix::simulate_biv_normal(sim_n, rng));
    } else if (sim_kind == "generative") {
      d = unimix::to_dataset(unimix::simulate_generative_kernel(
          gen_weights, gen_mus, gen_c, gen_kappa, sim_n, rng));
    } else {
      throw CLI::ValidationError("--kind", "unknown kind: " + sim_kind);
    }
    std::vector<std::vector<double>> rows(d.n());
    for (std::size_t i = 0; i < d.n(); ++i)
      for (const auto& col : d.cols) rows[i].push_back(col[i]);
    unimix::write_csv(sim_out, d.names, rows);
    return kExitOk;
  }

  if (fit->parsed()) {
    if (!preset.empty()) {
      unimix::ChainConfig parsed = cfg.chain;  // explicit flags win over preset
      if (preset == "paper-uni") cfg.chain = unimix::paper_univariate_chain();
      else if (preset == "paper-biv") cfg.chain = unimix::paper_bivariate_chain();
      else throw CLI::ValidationError("--preset", "unknown preset: " + preset);
      if (!fit->get_option("--iterations")->empty())
        cfg.chain.iterations = parsed.iterations;
      if (!fit->get_option("--burn-in")->empty())
        cfg.chain.burn_in = parsed.burn_in;
      if (!fit->get_option("--thin")->empty()) cfg.chain.thin = parsed.thin;
      if (!fit->get_option("--seed")->empty()) cfg.chain.seed = parsed.seed;
      if (!fit->get_option("--chains")->empty())
        cfg.chain.n_chains = parsed.n_chains;
    }
    cfg.model = parse_model(model_name);
    std::vector<std::string> columns;
    if (!cfg.column1.empty()) columns.push_back(cfg.column1);
    if (!cfg.column2.empty()) columns.push_back(cfg.column2);
    unimix::Dataset data = load_or_data_error(
        [&] { return unimix::ingest(cfg.input_path, columns); });
    if (cfg.model == unimix::FitModel::bivariate && data.dim() == 1)
      throw CLI::ValidationError("--column2", "bivariate fit needs two columns");
    if (cfg.model != unimix::FitModel::bivariate && data.dim() > 1) {
      // univariate fit over a multi-column file: take the first selected column
      data = unimix::make_dataset({data.cols[0]}, {data.names[0]});
    }
    unimix::FitResult result = unimix::run_fit(cfg, data);
    unimix::write_artifacts(result, cfg, cfg.output_dir);
    return kExitOk;
  }

  if (pred->parsed()) {
    auto states = load_or_data_error(
        [&] { return unimix::read_biv_states(pred_states); });
    if (!pred_given_file.empty()) {
      unimix::Dataset d = load_or_data_error([&] {
        std::vector<std::string> cols;
        if (!pred_given_col.empty()) cols.push_back(pred_given_col);
        return unimix::ingest(pred_given_file, cols);
      });
      pred_given.insert(pred_given.end(), d.cols[0].begin(), d.cols[0].end());
    }
    if (pred_given.empty())
      throw CLI::ValidationError("--given", "no conditioning values supplied");
    auto bands = unimix::predict_conditional(states, pred_given,
                                             draws_per_state, pred_seed);
    std::vector<std::vector<double>> rows;
    for (const auto& b : bands)
      rows.push_back({b.given, b.q025, b.median, b.q975});
    unimix::write_csv(pred_out, {"given", "q025", "median", "q975"}, rows);
    return kExitOk;
  }

  if (summ->parsed()) {
    unimix::CsvTable t =
        load_or_data_error([&] { return unimix::read_csv(summ_draws); });
    if (t.rows.empty()) throw DataError(summ_draws + ": no samples");
    std::string report = "param,mean,sd,q025,median,q975,ess\n";
    char buf[256];
    for (std::size_t col = 0; col < t.header.size(); ++col) {
      if (t.header[col] == "chain" || t.header[col] == "iter") continue;
      std::vector<double> x(t.rows.size());
      for (std::size_t r = 0; r < t.rows.size(); ++r) x[r] = t.rows[r][col];
      unimix::ColumnSummary s = unimix::summarize_column(x);
      std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                    t.header[col].c_str(), s.mean, s.sd, s.q025, s.median,
                    s.q975, s.ess);
      report += buf;
    }
    if (summ_out.empty()) {
      std::cout << report;
    } else {
      std::FILE* f = std::fopen(summ_out.c_str(), "wb");
      if (!f) throw DataError("cannot write " + summ_out);
      std::fwrite(report.data(), 1, report.size(), f);
      std::fclose(f);
    }
    return kExitOk;
  }

  if (dep->parsed()) {
    unimix::DependenceSide side;
    if (dep_side == "Z" || dep_side == "z") side = unimix::DependenceSide::Z;
    else if (dep_side == "X" || dep_side == "x") side = unimix::DependenceSide::X;
    else throw CLI::ValidationError("--side", "side must be Z or X");
    unimix::Rng rng(dep_seed);
    auto table = unimix::dependence_study(side, {dep_mu1, dep_mu2}, dep_grid,
                                          dep_reps, dep_n, rng);
    std::vector<std::vector<double>> rows;
    for (const auto& r : table)
      rows.push_back({r.rho, r.corr_lo, r.corr_med, r.corr_hi});
    unimix::write_csv(dep_out, {"rho", "q025", "median", "q975"}, rows);
    return kExitOk;
  }

  return kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const DataError& e) {
    std::cerr << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitNumeric;
  }
}
