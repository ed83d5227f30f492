#include "pr2d2ord/elicitation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <stdexcept>

#include "pr2d2ord/cutpoint_prior.hpp"
#include "pr2d2ord/math/special.hpp"
#include "pr2d2ord/nelder_mead.hpp"
#include "pr2d2ord/ordinal_model.hpp"

namespace pr2d2ord {

namespace {
constexpr std::uint64_t kTagW = 0x57;
constexpr std::uint64_t kTagData = 0xDA;
constexpr std::uint64_t kTagStart = 0x5A;
constexpr double kLambdaShift = 1e-3;

GigParams params_from_unconstrained(const std::vector<double>& u) {
  GigParams p;
  p.lambda = -0.5 + kLambdaShift + std::exp(u[0]);
  p.rho = std::exp(u[1]);
  p.chi = std::exp(u[2]);
  return p;
}

std::vector<double> unconstrained_from_params(const GigParams& p) {
  if (!(p.lambda > -0.5 + kLambdaShift))
    throw std::domain_error("elicitation start point needs lambda > -1/2 + 1e-3");
  return {std::log(p.lambda + 0.5 - kLambdaShift), std::log(p.rho), std::log(p.chi)};
}

// Optimal hyperparameter table used for warm starts, indexed by (a, b, n, K).
struct TableRow {
  double a, b;
  int n, K;
  GigParams params;
};
const TableRow kWarmStartTable[] = {
    {1, 1, 100, 3, {1.10, 1.41, 0.15}},  {1, 1, 100, 5, {0.67, 3.76, 0.14}},
    {1, 1, 1000, 3, {1.23, 2.64, 0.19}}, {1, 1, 1000, 5, {0.85, 1.80, 0.14}},
    {1, 5, 100, 3, {0.67, 1.19, 0.77}},  {1, 5, 100, 5, {0.51, 1.56, 0.70}},
    {1, 5, 1000, 3, {0.36, 1.50, 0.65}}, {1, 5, 1000, 5, {0.38, 1.39, 0.66}},
    {1, 10, 100, 3, {0.01, 1.00, 1.04}}, {1, 10, 100, 5, {0.05, 1.08, 1.03}},
    {1, 10, 1000, 3, {0.00, 1.00, 1.00}}, {1, 10, 1000, 5, {0.06, 0.97, 0.99}},
};

const TableRow* lookup_warm_start(double a, double b, int n, int K) {
  const TableRow* best = nullptr;
  double best_gap = 0.0;
  for (const TableRow& row : kWarmStartTable) {
    if (std::fabs(row.a - a) > 1e-9 || std::fabs(row.b - b) > 1e-9 || row.K != K) continue;
    const double gap = std::fabs(std::log(static_cast<double>(row.n)) -
                                 std::log(static_cast<double>(n)));
    if (best == nullptr || gap < best_gap) {
      best = &row;
      best_gap = gap;
    }
  }
  return best;
}
}  // namespace

void ElicitationSpec::validate() const {
  if (n < 1) throw std::invalid_argument("ElicitationSpec: n >= 1 required");
  if (K < 2) throw std::invalid_argument("ElicitationSpec: K >= 2 required");
  if (static_cast<int>(alpha.alpha.size()) != K)
    throw std::invalid_argument("ElicitationSpec: alpha must have K entries");
  alpha.validate();
  if (!(a > 0.0) || !(b > 0.0))
    throw std::invalid_argument("ElicitationSpec: a, b must be positive");
  if (num_sims < 100) throw std::invalid_argument("ElicitationSpec: num_sims >= 100");
  if (num_starts < 1) throw std::invalid_argument("ElicitationSpec: num_starts >= 1");
  if (max_iters < 1) throw std::invalid_argument("ElicitationSpec: max_iters >= 1");
}

R2Samples simulate_r2m(const ElicitationSpec& spec, const WSampler& w_sampler,
                       std::uint64_t stream_key) {
  spec.validate();
  R2Samples out;
  out.values.resize(static_cast<std::size_t>(spec.num_sims));
  std::vector<int> y(static_cast<std::size_t>(spec.n));

  for (int i = 0; i < spec.num_sims; ++i) {
    double r2 = 0.0;
    bool done = false;
    for (std::uint64_t attempt = 0; attempt < 100 && !done; ++attempt) {
      Rng rng_w = Rng::derive(spec.seed, {kTagW, stream_key, static_cast<std::uint64_t>(i), attempt});
      Rng rng_d = Rng::derive(spec.seed, {kTagData, stream_key, static_cast<std::uint64_t>(i), attempt});
      const double w = w_sampler(rng_w);
      if (!(w >= 0.0) || !std::isfinite(w))
        throw std::runtime_error("simulate_r2m: W sampler returned an invalid value");
      try {
        const CutPoints tau = sample_tau(spec.alpha, w, rng_d);
        const double sd = std::sqrt(1.0 + w);
        for (int j = 0; j < spec.n; ++j) {
          y[static_cast<std::size_t>(j)] = bin_latent(tau, sd * rng_d.normal());
        }
        r2 = mcfadden_r2(y, tau, w);
        done = true;
      } catch (const std::domain_error&) {
        // null log-likelihood exactly zero: all mass in one unbounded
        // category at machine precision; redraw this replicate
      } catch (const std::runtime_error&) {
        // degenerate cut-point draw; redraw
      }
    }
    if (!done)
      throw std::runtime_error("simulate_r2m: replicate failed after 100 redraws");
    out.values[static_cast<std::size_t>(i)] = std::min(1.0, std::max(0.0, r2));
  }
  return out;
}

std::vector<double> beta_midpoint_quantiles(int m, double a, double b) {
  std::vector<double> q(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    q[static_cast<std::size_t>(i)] = math::beta_quantile((i + 0.5) / m, a, b);
  }
  return q;
}

double wasserstein2_sq_to_quantiles(std::vector<double> samples,
                                    const std::vector<double>& target_quantiles) {
  if (samples.size() != target_quantiles.size())
    throw std::invalid_argument("wasserstein2_sq_to_quantiles: size mismatch");
  if (samples.size() < 2)
    throw std::invalid_argument("wasserstein2_sq_to_quantiles: needs >= 2 samples");
  std::sort(samples.begin(), samples.end());
  double acc = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double d = samples[i] - target_quantiles[i];
    acc += d * d;
  }
  return acc / static_cast<double>(samples.size());
}

double wasserstein2_sq_to_beta(const R2Samples& samples, double a, double b) {
  if (samples.values.empty())
    throw std::invalid_argument("wasserstein2_sq_to_beta: empty samples");
  if (samples.values.size() < 2)
    throw std::invalid_argument("wasserstein2_sq_to_beta: needs >= 2 samples");
  const auto q = beta_midpoint_quantiles(static_cast<int>(samples.values.size()), a, b);
  return wasserstein2_sq_to_quantiles(samples.values, q);
}

namespace {
struct StartOutcome {
  GigParams params;
  double objective;
  bool moved;
};

StartOutcome run_start(const ElicitationSpec& spec, const std::vector<double>& u0,
                       std::uint64_t stream_key, const std::vector<double>& beta_q) {
  auto objective = [&](const std::vector<double>& u) {
    const GigParams p = params_from_unconstrained(u);
    const R2Samples s = simulate_r2m(
        spec, [&p](Rng& rng) { return sample_gig(p, rng); }, stream_key);
    return wasserstein2_sq_to_quantiles(s.values, beta_q);
  };
  const double f0 = objective(u0);
  const NelderMeadResult r = nelder_mead(objective, u0, 0.4, spec.max_iters, 1e-9);
  return {params_from_unconstrained(r.x), r.value, r.value < f0};
}
}  // namespace

double elicitation_objective_at(const ElicitationSpec& spec, const GigParams& params) {
  params.validate();
  const auto beta_q = beta_midpoint_quantiles(spec.num_sims, spec.a, spec.b);
  const R2Samples s = simulate_r2m(
      spec, [&params](Rng& rng) { return sample_gig(params, rng); }, kTagStart);
  return wasserstein2_sq_to_quantiles(s.values, beta_q);
}

ElicitationResult optimize_gig(const ElicitationSpec& spec) {
  spec.validate();
  const auto beta_q = beta_midpoint_quantiles(spec.num_sims, spec.a, spec.b);

  std::vector<std::vector<double>> starts;
  starts.reserve(static_cast<std::size_t>(spec.num_starts));
  const TableRow* warm = lookup_warm_start(spec.a, spec.b, spec.n, spec.K);
  for (int s = 0; s < spec.num_starts; ++s) {
    if (s == 0 && warm != nullptr) {
      GigParams p = warm->params;
      // tabled entries sit on the lambda boundary occasionally; nudge inside
      p.lambda = std::max(p.lambda, -0.5 + 2.0 * kLambdaShift);
      p.rho = std::max(p.rho, 1e-6);
      p.chi = std::max(p.chi, 1e-6);
      starts.push_back(unconstrained_from_params(p));
      continue;
    }
    Rng rng = Rng::derive(spec.seed, {kTagStart, static_cast<std::uint64_t>(s)});
    const double u1 = std::log(0.099) + rng.uniform() * (std::log(3.499) - std::log(0.099));
    const double u2 = std::log(0.1) + rng.uniform() * (std::log(10.0) - std::log(0.1));
    const double u3 = std::log(0.01) + rng.uniform() * (std::log(5.0) - std::log(0.01));
    starts.push_back({u1, u2, u3});
  }

  // starts are independent; run them concurrently and reduce by start index
  std::vector<std::future<StartOutcome>> futures;
  futures.reserve(starts.size());
  for (std::size_t s = 0; s < starts.size(); ++s) {
    futures.push_back(std::async(std::launch::async, [&spec, &beta_q, &starts, s]() {
      return run_start(spec, starts[s], kTagStart + s, beta_q);
    }));
  }

  ElicitationResult result;
  result.starts_tried = spec.num_starts;
  result.improved_over_initial = false;
  bool have_best = false;
  for (std::size_t s = 0; s < futures.size(); ++s) {
    const StartOutcome oc = futures[s].get();
    result.per_start_objectives.push_back(oc.objective);
    result.improved_over_initial = result.improved_over_initial || oc.moved;
    if (!have_best || oc.objective < result.objective) {
      result.objective = oc.objective;
      result.params = oc.params;
      have_best = true;
    }
  }
  return result;
}

void export_r2m_histogram(const R2Samples& samples, int bins, const std::string& path,
                          double a, double b) {
  if (bins < 2) throw std::invalid_argument("export_r2m_histogram: bins >= 2");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_r2m_histogram: cannot open " + path);

  std::vector<long> counts(static_cast<std::size_t>(bins), 0);
  for (double v : samples.values) {
    int idx = static_cast<int>(v * bins);
    idx = std::min(bins - 1, std::max(0, idx));
    ++counts[static_cast<std::size_t>(idx)];
  }
  out << "# R2_M histogram over [0,1] with " << bins << " equal-width bins\n";
  out << "# columns: bin_lo bin_hi count beta_pdf_at_center (target Beta(" << a << ","
      << b << "))\n";
  out.precision(17);
  for (int k = 0; k < bins; ++k) {
    const double lo = static_cast<double>(k) / bins;
    const double hi = static_cast<double>(k + 1) / bins;
    const double center = 0.5 * (lo + hi);
    out << lo << ' ' << hi << ' ' << counts[static_cast<std::size_t>(k)] << ' '
        << math::beta_pdf(center, a, b) << '\n';
  }
  if (!out) throw std::runtime_error("export_r2m_histogram: write failed for " + path);
}

}  // namespace pr2d2ord
