#include "pr2d2ord/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "pr2d2ord/math/stats.hpp"
#include "pr2d2ord/ordinal_model.hpp"

namespace pr2d2ord {

void SimDesign::validate() const {
  if (n < 1 || p < 1) throw std::invalid_argument("SimDesign: n, p >= 1");
  if (K < 2) throw std::invalid_argument("SimDesign: K >= 2");
  if (n_nonnull < 0 || n_nonnull > p)
    throw std::invalid_argument("SimDesign: n_nonnull must lie in [0, p]");
  if (!(ar_rho > -1.0) || !(ar_rho < 1.0))
    throw std::invalid_argument("SimDesign: ar_rho in (-1, 1)");
  if (replications < 1) throw std::invalid_argument("SimDesign: replications >= 1");
  if (cut_scheme == CutScheme::Even && n < K)
    throw std::invalid_argument("SimDesign: Even scheme needs n >= K");
}

std::string SimDesign::label() const {
  std::ostringstream ss;
  ss << "n" << n << "_p" << p << "_K" << K << '_'
     << (coef_scheme == CoefScheme::Fixed ? "Fixed" : "t3") << '_'
     << (cut_scheme == CutScheme::Even ? "Even" : "Low");
  return ss.str();
}

Eigen::MatrixXd ar1_covariance(int p, double rho) {
  Eigen::MatrixXd v(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      v(i, j) = std::pow(rho, std::abs(i - j));
    }
  }
  return v;
}

GeneratedData gen_dataset(const SimDesign& design, Rng& rng) {
  design.validate();
  const int n = design.n, p = design.p, K = design.K;
  GeneratedData out;

  // AR(1) rows via the sequential representation (exactly MVN(0, V))
  out.data.X.resize(n, p);
  const double rho = design.ar_rho;
  const double innov = std::sqrt(1.0 - rho * rho);
  for (int i = 0; i < n; ++i) {
    double prev = rng.normal();
    out.data.X(i, 0) = prev;
    for (int j = 1; j < p; ++j) {
      prev = rho * prev + innov * rng.normal();
      out.data.X(i, j) = prev;
    }
  }

  // sparse coefficients at positions drawn without replacement
  out.beta_true = Eigen::VectorXd::Zero(p);
  std::vector<int> idx(static_cast<std::size_t>(p));
  std::iota(idx.begin(), idx.end(), 0);
  for (int j = 0; j < design.n_nonnull; ++j) {
    const std::uint64_t pick = rng.uniform_int(static_cast<std::uint64_t>(p - j));
    std::swap(idx[static_cast<std::size_t>(j)],
              idx[static_cast<std::size_t>(j) + static_cast<std::size_t>(pick)]);
    double value;
    if (design.coef_scheme == CoefScheme::Fixed) {
      value = rng.uniform() < 0.5 ? -1.0 : 1.0;
    } else {
      value = rng.normal() / std::sqrt(rng.chi_square(3.0) / 3.0);  // t_3
    }
    out.beta_true[idx[static_cast<std::size_t>(j)]] = value;
  }

  const Eigen::VectorXd eta = out.data.X * out.beta_true;
  Eigen::VectorXd latent(n);
  for (int i = 0; i < n; ++i) latent[i] = eta[i] + rng.normal();

  out.tau_true.tau.resize(static_cast<std::size_t>(K - 1));
  if (design.cut_scheme == CutScheme::Even) {
    std::vector<double> sorted(latent.data(), latent.data() + n);
    std::sort(sorted.begin(), sorted.end());
    for (int k = 1; k < K; ++k) {
      const int pos = static_cast<int>(static_cast<long>(n) * k / K);
      out.tau_true.tau[static_cast<std::size_t>(k - 1)] =
          sorted[static_cast<std::size_t>(std::min(pos, n - 1))];
    }
  } else {
    out.tau_true.tau[0] = 0.0;
    for (int k = 2; k < K; ++k) {
      out.tau_true.tau[static_cast<std::size_t>(k - 1)] =
          static_cast<double>(k) / K + 1.0;
    }
  }
  out.tau_true.validate();

  out.data.K = K;
  out.data.y.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out.data.y[static_cast<std::size_t>(i)] = bin_latent(out.tau_true, latent[i]);
  }
  out.data.validate();
  return out;
}

double auc_score(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size()) throw std::invalid_argument("auc: size mismatch");
  double wins = 0.0;
  long pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      ++pairs;
      if (scores[i] > scores[j]) {
        wins += 1.0;
      } else if (scores[i] == scores[j]) {
        wins += 0.5;
      }
    }
  }
  if (pairs == 0) throw std::invalid_argument("auc: needs both classes");
  return wins / static_cast<double>(pairs);
}

ReplicateMetrics evaluate(const PosteriorDraws& draws, const Eigen::VectorXd& beta_true) {
  if (static_cast<int>(beta_true.size()) != draws.p)
    throw std::invalid_argument("evaluate: truth length must equal p");
  ReplicateMetrics m;
  const int p = draws.p;
  const Eigen::VectorXd med = draws.pooled_median();
  const Eigen::VectorXd qlo = draws.pooled_quantile(0.025);
  const Eigen::VectorXd qhi = draws.pooled_quantile(0.975);

  std::vector<double> scores;
  std::vector<int> labels;
  int n_nonnull = 0;
  for (int j = 0; j < p; ++j) {
    const double bt = beta_true[j];
    const double bj = med[draws.beta_offset + j];
    m.mse += (bt - bj) * (bt - bj) / p;
    scores.push_back(std::fabs(bj));
    labels.push_back(bt != 0.0 ? 1 : 0);
    n_nonnull += bt != 0.0 ? 1 : 0;
    const double lo = qlo[draws.beta_offset + j];
    const double hi = qhi[draws.beta_offset + j];
    m.coverage += (lo <= bt && bt <= hi) ? 1.0 / p : 0.0;
    const double w = hi - lo;
    if (std::isinf(w)) m.width_infinite = true;
    m.width += w / p;
  }
  if (n_nonnull > 0 && n_nonnull < p) {
    m.auc = auc_score(scores, labels);
  }
  return m;
}

std::pair<double, double> evaluate_prediction(const std::vector<int>& y_hat,
                                              const std::vector<int>& y_test) {
  if (y_hat.size() != y_test.size() || y_hat.empty())
    throw std::invalid_argument("evaluate_prediction: need equal nonzero lengths");
  double acc = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < y_hat.size(); ++i) {
    acc += y_hat[i] == y_test[i] ? 1.0 : 0.0;
    const double d = static_cast<double>(y_hat[i] - y_test[i]);
    sq += d * d;
  }
  const double n = static_cast<double>(y_hat.size());
  return {acc / n, std::sqrt(sq / n)};
}

MetricsReport aggregate_metrics(const std::vector<ReplicateMetrics>& reps,
                                double runtime_seconds) {
  MetricsReport r;
  r.replications = static_cast<int>(reps.size());
  r.runtime_seconds = runtime_seconds;
  if (reps.empty()) return r;
  auto agg = [&](auto getter, double& mean_out, double& se_out) {
    std::vector<double> v;
    for (const auto& rep : reps) v.push_back(getter(rep));
    mean_out = math::mean(v);
    se_out = v.size() > 1 ? std::sqrt(math::variance(v) / static_cast<double>(v.size()))
                          : 0.0;
  };
  agg([](const ReplicateMetrics& m) { return m.mse; }, r.mse, r.mse_se);
  agg([](const ReplicateMetrics& m) { return m.coverage; }, r.coverage, r.coverage_se);
  agg([](const ReplicateMetrics& m) { return m.width; }, r.width, r.width_se);
  std::vector<double> aucs;
  for (const auto& rep : reps) {
    if (rep.auc.has_value()) aucs.push_back(*rep.auc);
    r.width_infinite = r.width_infinite || rep.width_infinite;
  }
  if (!aucs.empty()) {
    r.auc_defined = true;
    r.auc = math::mean(aucs);
    r.auc_se = aucs.size() > 1
                   ? std::sqrt(math::variance(aucs) / static_cast<double>(aucs.size()))
                   : 0.0;
  }
  return r;
}

std::string prior_label(const ModelSpec& spec) {
  switch (spec.prior) {
    case PriorKind::Pr2d2ord:
      return "pr2d2ord";
    case PriorKind::Horseshoe:
      return "horseshoe";
    case PriorKind::R2d2BetaPrime:
      return "r2d2";
  }
  return "unknown";
}

std::vector<MetricsReport> run_study(const std::vector<SimDesign>& grid,
                                     const std::vector<ModelSpec>& specs,
                                     const StudyConfig& config) {
  if (grid.empty()) throw std::invalid_argument("run_study: empty grid");
  if (specs.empty()) throw std::invalid_argument("run_study: no model specs");
  std::vector<MetricsReport> reports;

  for (std::size_t cell = 0; cell < grid.size(); ++cell) {
    const SimDesign& design = grid[cell];
    design.validate();
    for (std::size_t sp = 0; sp < specs.size(); ++sp) {
      ModelSpec spec = specs[sp];
      spec.K = design.K;
      if (spec.cut_prior == CutPrior::DirichletInduced &&
          static_cast<int>(spec.alpha.alpha.size()) != design.K) {
        spec.alpha = DirichletConc::uniform(design.K);
      }
      const auto t0 = std::chrono::steady_clock::now();

      const int R = design.replications;
      std::vector<std::optional<ReplicateMetrics>> results(static_cast<std::size_t>(R));
      std::atomic<int> next{0};
      auto worker = [&]() {
        for (;;) {
          const int r = next.fetch_add(1);
          if (r >= R) return;
          Rng rng = Rng::derive(design.seed,
                                {0x5EED, cell, sp, static_cast<std::uint64_t>(r)});
          try {
            const GeneratedData gen = gen_dataset(design, rng);
            FitConfig fc = config.fit;
            fc.seed = Rng::derive(design.seed, {0xF17, cell, sp,
                                                static_cast<std::uint64_t>(r)})
                          .next_u64();
            fc.parallel_chains = false;  // replicates already run in parallel
            const PosteriorDraws draws = fit(gen.data, spec, fc);
            results[static_cast<std::size_t>(r)] = evaluate(draws, gen.beta_true);
          } catch (const std::exception&) {
            results[static_cast<std::size_t>(r)] = std::nullopt;  // recorded as failed
          }
        }
      };
      const int workers = std::max(1, std::min(config.parallel_replicates, R));
      std::vector<std::thread> pool;
      for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
      for (auto& t : pool) t.join();

      std::vector<ReplicateMetrics> ok;
      int failed = 0;
      for (const auto& res : results) {
        if (res.has_value()) {
          ok.push_back(*res);
        } else {
          ++failed;
        }
      }
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      MetricsReport rep = aggregate_metrics(ok, secs);
      rep.failed = failed;
      rep.design_label = design.label();
      rep.prior_label = prior_label(spec);
      reports.push_back(std::move(rep));
    }
  }

  if (!config.out_prefix.empty()) {
    write_study_report_text(config.out_prefix + ".txt", reports);
    write_study_report_json(config.out_prefix + ".json", reports);
  }
  return reports;
}

void write_study_report_text(const std::string& path,
                             const std::vector<MetricsReport>& reports) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "design prior reps failed mse mse_se auc auc_se cov cov_se width width_se "
         "runtime_s\n";
  out.precision(6);
  for (const auto& r : reports) {
    out << r.design_label << ' ' << r.prior_label << ' ' << r.replications << ' '
        << r.failed << ' ' << r.mse << ' ' << r.mse_se << ' ';
    if (r.auc_defined) {
      out << r.auc << ' ' << r.auc_se << ' ';
    } else {
      out << "NA NA ";
    }
    out << r.coverage << ' ' << r.coverage_se << ' ';
    if (r.width_infinite) {
      out << "inf inf ";
    } else {
      out << r.width << ' ' << r.width_se << ' ';
    }
    out << r.runtime_seconds << '\n';
  }
}

void write_study_report_json(const std::string& path,
                             const std::vector<MetricsReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json j;
    j["design"] = r.design_label;
    j["prior"] = r.prior_label;
    j["replications"] = r.replications;
    j["failed"] = r.failed;
    j["mse"] = r.mse;
    j["mse_se"] = r.mse_se;
    if (r.auc_defined) {
      j["auc"] = r.auc;
      j["auc_se"] = r.auc_se;
    } else {
      j["auc"] = nullptr;
    }
    j["coverage"] = r.coverage;
    j["coverage_se"] = r.coverage_se;
    j["width"] = r.width_infinite ? nlohmann::json() : nlohmann::json(r.width);
    j["width_se"] = r.width_se;
    j["runtime_seconds"] = r.runtime_seconds;
    arr.push_back(std::move(j));
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << arr.dump(2) << '\n';
}

}  // namespace pr2d2ord
