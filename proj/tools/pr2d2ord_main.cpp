#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pr2d2ord/diagnostics.hpp"
#include "pr2d2ord/draws_io.hpp"
#include "pr2d2ord/elicitation.hpp"
#include "pr2d2ord/fit.hpp"
#include "pr2d2ord/harness.hpp"
#include "pr2d2ord/ingest.hpp"
#include "pr2d2ord/posterior.hpp"

namespace {

using namespace pr2d2ord;

std::vector<double> parse_comma_doubles(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  return out;
}

std::uint64_t resolve_seed(std::int64_t seed_flag) {
  if (seed_flag >= 0) return static_cast<std::uint64_t>(seed_flag);
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::string format17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

DirichletConc resolve_alpha(const std::string& alpha_csv, int K) {
  if (alpha_csv.empty()) return DirichletConc::uniform(K);
  DirichletConc a;
  a.alpha = parse_comma_doubles(alpha_csv);
  if (static_cast<int>(a.alpha.size()) == 1) {
    a = DirichletConc::uniform(K, a.alpha[0]);
  }
  if (static_cast<int>(a.alpha.size()) != K)
    throw CLI::ValidationError("--alpha must have 1 or K entries");
  a.validate();
  return a;
}

// GIG hyperparameters: explicit (lambda, rho, chi) win; otherwise elicit for
// the requested Beta(a, b) target at this (n, K).
GigParams resolve_gig(double lambda, double rho, double chi, double a, double b, int n,
                      int K, const DirichletConc& alpha, std::uint64_t seed,
                      int elicit_sims, int elicit_starts, std::ostream& log) {
  const bool has_explicit = std::isfinite(lambda) && rho > 0.0 && chi > 0.0;
  if (has_explicit) return GigParams{lambda, rho, chi};
  ElicitationSpec spec;
  spec.n = n;
  spec.K = K;
  spec.alpha = alpha;
  spec.a = a;
  spec.b = b;
  spec.num_sims = elicit_sims;
  spec.num_starts = elicit_starts;
  spec.seed = seed;
  log << "eliciting GIG hyperparameters for Beta(" << a << "," << b << "), n=" << n
      << ", K=" << K << " ...\n";
  const ElicitationResult res = optimize_gig(spec);
  log << "elicited (lambda, rho, chi) = (" << res.params.lambda << ", " << res.params.rho
      << ", " << res.params.chi << "), objective " << res.objective << "\n";
  return res.params;
}

void write_schema(const std::string& path, const IngestResult& ingest,
                  std::uint64_t seed) {
  nlohmann::json j;
  j["response_column"] = ingest.response_column;
  j["covariates"] = ingest.covariate_names;
  j["dropped"] = ingest.dropped_columns;
  j["label_values"] = ingest.label_values;
  j["center"] = ingest.center;
  j["scale"] = ingest.scale;
  j["seed"] = seed;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

IngestResult read_schema(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open schema " + path);
  nlohmann::json j;
  in >> j;
  IngestResult r;
  r.response_column = j.at("response_column").get<std::string>();
  r.covariate_names = j.at("covariates").get<std::vector<std::string>>();
  r.dropped_columns = j.at("dropped").get<std::vector<std::string>>();
  r.label_values = j.at("label_values").get<std::vector<double>>();
  r.center = j.at("center").get<std::vector<double>>();
  r.scale = j.at("scale").get<std::vector<double>>();
  return r;
}

PosteriorDraws load_draws(const std::string& path) {
  std::ifstream probe(path, std::ios::binary);
  char magic[8] = {};
  probe.read(magic, 8);
  probe.close();
  if (std::string(magic, 8) == "PR2D2ORD") return read_draws_binary(path);
  return read_draws_csv(path);
}

int cmd_elicit(int n, int K, double a, double b, const std::string& alpha_csv,
               int num_sims, int num_starts, int max_iters, std::int64_t seed_flag,
               const std::string& out_prefix, int bins) {
  const std::uint64_t seed = resolve_seed(seed_flag);
  ElicitationSpec spec;
  spec.n = n;
  spec.K = K;
  spec.alpha = resolve_alpha(alpha_csv, K);
  spec.a = a;
  spec.b = b;
  spec.num_sims = num_sims;
  spec.num_starts = num_starts;
  spec.max_iters = max_iters;
  spec.seed = seed;
  spec.validate();

  const ElicitationResult res = optimize_gig(spec);

  const std::string result_path = out_prefix + ".elicit.txt";
  {
    std::ofstream out(result_path);
    if (!out) throw std::runtime_error("cannot write " + result_path);
    out << "# GIG hyperparameters matching R2_M ~ Beta(a,b)\n";
    out << "seed " << seed << '\n';
    out << "n " << n << "\nK " << K << "\na " << format17(a) << "\nb " << format17(b)
        << '\n';
    out << "num_sims " << num_sims << "\nnum_starts " << num_starts << '\n';
    out << "lambda " << format17(res.params.lambda) << '\n';
    out << "rho " << format17(res.params.rho) << '\n';
    out << "chi " << format17(res.params.chi) << '\n';
    out << "objective_w2_sq " << format17(res.objective) << '\n';
    out << "objective_w2 " << format17(std::sqrt(res.objective)) << '\n';
    out << "improved_over_initial " << (res.improved_over_initial ? 1 : 0) << '\n';
    for (std::size_t s = 0; s < res.per_start_objectives.size(); ++s) {
      out << "start." << s << ".objective " << format17(res.per_start_objectives[s])
          << '\n';
    }
  }
  // histogram of the induced R2_M law at the fitted parameters
  const GigParams fitted = res.params;
  const R2Samples samples = simulate_r2m(
      spec, [&fitted](Rng& rng) { return sample_gig(fitted, rng); }, 0);
  export_r2m_histogram(samples, bins, out_prefix + ".r2m_hist.txt", a, b);

  std::cout << "elicited lambda=" << format17(res.params.lambda)
            << " rho=" << format17(res.params.rho) << " chi=" << format17(res.params.chi)
            << " objective=" << format17(res.objective) << '\n';
  std::cout << "wrote " << result_path << " and " << out_prefix << ".r2m_hist.txt\n";
  if (!res.improved_over_initial) {
    std::cerr << "warning: no optimizer start improved on its initial point\n";
  }
  return 0;
}

struct FitFlags {
  std::string data_path;
  std::string response;
  int K = 0;  // 0 = infer from the data
  std::string prior = "pr2d2ord";
  double lambda = std::numeric_limits<double>::quiet_NaN();
  double rho = 0.0, chi = 0.0;
  double a = 1.0, b = 10.0;
  std::string alpha_csv;
  double xi0 = 0.5;
  double tau0_sq = 10.0;
  int chains = 4, warmup = 1000, draws = 2000;
  std::int64_t seed_flag = -1;
  bool standardize = true;
  bool no_strict = false;
  int elicit_sims = 10000, elicit_starts = 5;
  std::string out_prefix;
};

std::pair<OrdinalDataset, IngestResult> load_training_data(const FitFlags& f) {
  IngestResult ingest = ingest_csv(f.data_path, f.response, f.standardize);
  for (const auto& col : ingest.dropped_columns) {
    std::cerr << "warning: dropped zero-variance column '" << col << "'\n";
  }
  if (f.K != 0) {
    // declared K: labels must already be 1..K (unobserved categories allowed)
    const int distinct = ingest.data.K;
    bool within_1k = true;
    for (double v : ingest.label_values) {
      if (v < 1 || v > f.K) within_1k = false;
    }
    if (!within_1k)
      throw std::runtime_error(
          "declared --K but label values fall outside 1..K; drop --K to remap");
    if (distinct > f.K) throw std::runtime_error("more distinct labels than declared K");
    // undo the remap: use original values directly
    std::vector<int> y(ingest.data.y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
      y[i] = static_cast<int>(
          ingest.label_values[static_cast<std::size_t>(ingest.data.y[i] - 1)]);
    }
    ingest.data.y = std::move(y);
    ingest.data.K = f.K;
    ingest.label_values.clear();
    for (int k = 1; k <= f.K; ++k) ingest.label_values.push_back(k);
  } else if (ingest.label_values.front() != 1.0 ||
             ingest.label_values.back() != static_cast<double>(ingest.data.K)) {
    std::cerr << "note: responses remapped to 1.." << ingest.data.K << " (from";
    for (double v : ingest.label_values) std::cerr << ' ' << v;
    std::cerr << ")\n";
  }
  ingest.data.validate();
  return {ingest.data, ingest};
}

ModelSpec build_spec(const FitFlags& f, int n, int K, std::uint64_t seed) {
  if (f.prior == "horseshoe") return ModelSpec::horseshoe(K, f.tau0_sq);
  const DirichletConc alpha = resolve_alpha(f.alpha_csv, K);
  if (f.prior == "r2d2") return ModelSpec::r2d2_beta_prime(K, f.a, f.b, alpha, f.xi0);
  if (f.prior != "pr2d2ord") throw CLI::ValidationError("unknown --prior " + f.prior);
  const GigParams gig = resolve_gig(f.lambda, f.rho, f.chi, f.a, f.b, n, K, alpha, seed,
                                    f.elicit_sims, f.elicit_starts, std::cerr);
  return ModelSpec::pr2d2ord(K, gig, alpha, f.xi0);
}

int cmd_fit(const FitFlags& f) {
  const std::uint64_t seed = resolve_seed(f.seed_flag);
  auto [data, ingest] = load_training_data(f);
  const ModelSpec spec = build_spec(f, data.n(), data.K, seed);

  FitConfig cfg;
  cfg.chains = f.chains;
  cfg.warmup = f.warmup;
  cfg.draws = f.draws;
  cfg.seed = seed;
  const PosteriorDraws draws = fit(data, spec, cfg);
  const Diagnostics diag = diagnose(draws);

  write_draws_csv(f.out_prefix + ".draws.csv", draws);
  write_draws_binary(f.out_prefix + ".draws.bin", draws);
  write_summary(f.out_prefix + ".summary.txt", draws, diag);
  write_schema(f.out_prefix + ".schema.json", ingest, seed);

  std::cout << "seed " << seed << '\n';
  std::cout << "max rhat " << format17(diag.max_rhat()) << ", min ess "
            << format17(diag.min_ess()) << ", divergences " << draws.total_divergences()
            << '\n';
  std::cout << "wrote " << f.out_prefix << ".draws.csv/.draws.bin/.summary.txt\n";
  if (draws.divergence_warning) {
    std::cerr << "WARNING: divergence rate above 20%; results are unreliable\n";
  }
  if (!f.no_strict && diag.max_rhat() > 1.05) {
    std::cerr << "error: R-hat above 1.05 (" << diag.max_rhat()
              << "); rerun with more draws or pass --no-strict\n";
    return 3;
  }
  return 0;
}

int cmd_predict(const std::string& draws_path, const std::string& schema_path,
                const std::string& data_path, const std::string& out_path) {
  const PosteriorDraws draws = load_draws(draws_path);
  std::string schema_file = schema_path;
  if (schema_file.empty()) {
    // derive from the draws path: <prefix>.draws.{csv,bin} -> <prefix>.schema.json
    const auto pos = draws_path.find(".draws.");
    if (pos == std::string::npos)
      throw std::runtime_error("cannot derive schema path; pass --schema");
    schema_file = draws_path.substr(0, pos) + ".schema.json";
  }
  const IngestResult schema = read_schema(schema_file);
  const Eigen::MatrixXd x = ingest_matrix_with_schema(data_path, schema);
  const std::vector<int> y_hat = predict(draws, x);

  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << "predicted_label";
  // map rank back to the original label value when available
  const bool have_map = static_cast<int>(schema.label_values.size()) == draws.K;
  if (have_map) out << ",original_value";
  out << '\n';
  for (int yh : y_hat) {
    out << yh;
    if (have_map) out << ',' << schema.label_values[static_cast<std::size_t>(yh - 1)];
    out << '\n';
  }

  // if the new file carries the response column, score the predictions
  try {
    const IngestResult truth = ingest_csv(data_path, schema.response_column, false);
    if (truth.data.n() == static_cast<int>(y_hat.size())) {
      const auto [acc, rmse] = evaluate_prediction(y_hat, truth.data.y);
      std::cout << "accuracy " << format17(acc) << " rmse " << format17(rmse) << '\n';
      out << "# accuracy " << format17(acc) << " rmse " << format17(rmse) << '\n';
    }
  } catch (const std::exception&) {
    // no usable response column in the prediction file; labels only
  }
  std::cout << "wrote " << out_path << '\n';
  return 0;
}

int cmd_simulate(const std::string& grid_path, int n, int p, int K,
                 const std::string& coef, const std::string& cut, int reps,
                 const std::string& priors_csv, const FitFlags& f) {
  const std::uint64_t seed = resolve_seed(f.seed_flag);
  std::vector<SimDesign> grid;
  if (!grid_path.empty()) {
    std::ifstream in(grid_path);
    if (!in) throw std::runtime_error("cannot open grid " + grid_path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty grid file");
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::stringstream ss(line);
      std::string tok;
      std::vector<std::string> cells;
      while (std::getline(ss, tok, ',')) cells.push_back(tok);
      if (cells.size() < 6)
        throw std::runtime_error("grid rows need n,p,K,coef,cut,reps");
      SimDesign d;
      d.n = std::stoi(cells[0]);
      d.p = std::stoi(cells[1]);
      d.K = std::stoi(cells[2]);
      d.coef_scheme = cells[3] == "t3" ? CoefScheme::T3 : CoefScheme::Fixed;
      d.cut_scheme = cells[4] == "low" ? CutScheme::Low : CutScheme::Even;
      d.replications = std::stoi(cells[5]);
      d.seed = seed;
      grid.push_back(d);
    }
  } else {
    SimDesign d;
    d.n = n;
    d.p = p;
    d.K = K;
    d.coef_scheme = coef == "t3" ? CoefScheme::T3 : CoefScheme::Fixed;
    d.cut_scheme = cut == "low" ? CutScheme::Low : CutScheme::Even;
    d.replications = reps;
    d.seed = seed;
    grid.push_back(d);
  }
  if (grid.empty()) throw std::runtime_error("empty simulation grid");

  std::vector<ModelSpec> specs;
  std::stringstream ss(priors_csv);
  std::string prior;
  while (std::getline(ss, prior, ',')) {
    FitFlags pf = f;
    pf.prior = prior;
    specs.push_back(build_spec(pf, grid.front().n, grid.front().K, seed));
  }
  if (specs.empty()) throw std::runtime_error("no priors requested");

  StudyConfig cfg;
  cfg.fit.chains = f.chains;
  cfg.fit.warmup = f.warmup;
  cfg.fit.draws = f.draws;
  cfg.out_prefix = f.out_prefix;
  const auto reports = run_study(grid, specs, cfg);
  std::cout << "seed " << seed << '\n';
  for (const auto& r : reports) {
    std::cout << r.design_label << ' ' << r.prior_label << ": mse=" << r.mse;
    if (r.auc_defined) std::cout << " auc=" << r.auc;
    std::cout << " cov=" << r.coverage << " width=" << r.width << " failed=" << r.failed
              << " runtime=" << r.runtime_seconds << "s\n";
  }
  std::cout << "wrote " << f.out_prefix << ".txt and " << f.out_prefix << ".json\n";
  return 0;
}

int cmd_diagnose(const std::string& draws_path) {
  const PosteriorDraws draws = load_draws(draws_path);
  const Diagnostics diag = diagnose(draws);
  std::cout << "parameter rhat ess\n";
  for (std::size_t i = 0; i < diag.names.size(); ++i) {
    std::cout << diag.names[i] << ' ' << format17(diag.rhat[i]) << ' '
              << format17(diag.ess[i]) << '\n';
  }
  std::cout << "# max rhat " << format17(diag.max_rhat()) << ", min ess "
            << format17(diag.min_ess()) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pR2D2ord: shrinkage-prior Bayesian ordinal probit regression"};
  app.set_config("--config", "", "ini-style config file; command-line flags win");
  app.require_subcommand(1);

  auto* elicit = app.add_subcommand("elicit", "match the prior law of R2_M to Beta(a,b)");
  int e_n = 100, e_K = 0, e_sims = 10000, e_starts = 5, e_iters = 200, e_bins = 30;
  double e_a = 1.0, e_b = 1.0;
  std::string e_alpha, e_out = "elicit_out";
  std::int64_t e_seed = -1;
  elicit->add_option("--n", e_n, "simulated sample size");
  elicit->add_option("--K", e_K, "number of response categories")->required();
  elicit->add_option("--a", e_a, "Beta target shape a");
  elicit->add_option("--b", e_b, "Beta target shape b");
  elicit->add_option("--alpha", e_alpha, "Dirichlet concentrations (comma list or scalar)");
  elicit->add_option("--num-sims", e_sims, "R2_M simulations per objective evaluation");
  elicit->add_option("--num-starts", e_starts, "optimizer restarts");
  elicit->add_option("--max-iters", e_iters, "Nelder-Mead iterations per start");
  elicit->add_option("--seed", e_seed, "RNG seed (default: random, recorded)");
  elicit->add_option("--bins", e_bins, "histogram bins for the R2_M export");
  elicit->add_option("--out", e_out, "output prefix");

  auto* fitcmd = app.add_subcommand("fit", "sample the posterior on a CSV dataset");
  FitFlags ff;
  fitcmd->add_option("--data", ff.data_path, "training CSV with header")->required();
  fitcmd->add_option("--response", ff.response, "response column (default: last)");
  fitcmd->add_option("--K", ff.K, "declared category count (labels must be 1..K)");
  fitcmd->add_option("--prior", ff.prior, "pr2d2ord | horseshoe | r2d2");
  fitcmd->add_option("--lambda", ff.lambda, "GIG lambda (with --rho, --chi)");
  fitcmd->add_option("--rho", ff.rho, "GIG rho");
  fitcmd->add_option("--chi", ff.chi, "GIG chi");
  fitcmd->add_option("--a", ff.a, "target Beta a (pr2d2ord elicitation or r2d2)");
  fitcmd->add_option("--b", ff.b, "target Beta b");
  fitcmd->add_option("--alpha", ff.alpha_csv, "cut-point Dirichlet concentrations");
  fitcmd->add_option("--xi0", ff.xi0, "Dirichlet concentration on phi");
  fitcmd->add_option("--tau0-sq", ff.tau0_sq,
                     "sorted-normal cut-point variance (horseshoe)");
  fitcmd->add_option("--chains", ff.chains, "MCMC chains");
  fitcmd->add_option("--warmup", ff.warmup, "warmup iterations per chain");
  fitcmd->add_option("--draws", ff.draws, "post-warmup draws per chain");
  fitcmd->add_option("--seed", ff.seed_flag, "RNG seed (default: random, recorded)");
  fitcmd->add_option("--elicit-sims", ff.elicit_sims, "simulations if elicitation runs");
  fitcmd->add_option("--elicit-starts", ff.elicit_starts, "starts if elicitation runs");
  fitcmd->add_flag("--standardize,!--no-standardize", ff.standardize,
                   "center/scale covariates (default on)");
  fitcmd->add_flag("--no-strict", ff.no_strict, "do not fail on R-hat > 1.05");
  fitcmd->add_option("--out", ff.out_prefix, "output prefix")->required();

  auto* pred = app.add_subcommand("predict", "predict labels for new data");
  std::string p_draws, p_schema, p_data, p_out = "predictions.csv";
  pred->add_option("--draws", p_draws, "draws file (.bin or .csv)")->required();
  pred->add_option("--schema", p_schema, "schema json from fit (default: derived)");
  pred->add_option("--data", p_data, "new-data CSV")->required();
  pred->add_option("--out", p_out, "output file");

  auto* sim = app.add_subcommand("simulate", "run the simulation-study harness");
  std::string s_grid, s_coef = "fixed", s_cut = "even", s_priors = "pr2d2ord";
  int s_n = 100, s_p = 20, s_K = 3, s_reps = 2;
  FitFlags sf;
  sim->add_option("--grid", s_grid, "grid CSV: n,p,K,coef,cut,reps (header row)");
  sim->add_option("--n", s_n, "observations (single-cell mode)");
  sim->add_option("--p", s_p, "covariates");
  sim->add_option("--K", s_K, "categories");
  sim->add_option("--coef", s_coef, "fixed | t3");
  sim->add_option("--cut", s_cut, "even | low");
  sim->add_option("--reps", s_reps, "Monte Carlo replications");
  sim->add_option("--priors", s_priors, "comma list: pr2d2ord,horseshoe,r2d2");
  sim->add_option("--lambda", sf.lambda, "GIG lambda");
  sim->add_option("--rho", sf.rho, "GIG rho");
  sim->add_option("--chi", sf.chi, "GIG chi");
  sim->add_option("--a", sf.a, "target Beta a");
  sim->add_option("--b", sf.b, "target Beta b");
  sim->add_option("--xi0", sf.xi0, "Dirichlet concentration on phi");
  sim->add_option("--chains", sf.chains, "MCMC chains");
  sim->add_option("--warmup", sf.warmup, "warmup iterations");
  sim->add_option("--draws", sf.draws, "post-warmup draws");
  sim->add_option("--seed", sf.seed_flag, "RNG seed");
  sim->add_option("--out", sf.out_prefix, "report prefix")->required();

  auto* diag = app.add_subcommand("diagnose", "R-hat / ESS for a draws file");
  std::string d_draws;
  diag->add_option("--draws", d_draws, "draws file (.bin or .csv)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (elicit->parsed()) {
      return cmd_elicit(e_n, e_K, e_a, e_b, e_alpha, e_sims, e_starts, e_iters, e_seed,
                        e_out, e_bins);
    }
    if (fitcmd->parsed()) return cmd_fit(ff);
    if (pred->parsed()) return cmd_predict(p_draws, p_schema, p_data, p_out);
    if (sim->parsed()) {
      return cmd_simulate(s_grid, s_n, s_p, s_K, s_coef, s_cut, s_reps, s_priors, sf);
    }
    if (diag->parsed()) return cmd_diagnose(d_draws);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
