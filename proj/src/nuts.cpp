#include "pr2d2ord/nuts.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace pr2d2ord {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(double a, double b) {
  const double m = std::max(a, b);
  if (m == kNegInf) return kNegInf;
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

struct PhasePoint {
  Eigen::VectorXd theta;
  Eigen::VectorXd r;
  Eigen::VectorXd grad;
  double logp = 0.0;
};

class NutsWorker {
 public:
  NutsWorker(const LogDensityFn& f, int dim, const NutsOptions& opts, Rng& rng)
      : f_(f), opts_(opts), rng_(rng), inv_mass_(Eigen::VectorXd::Ones(dim)) {}

  Eigen::VectorXd inv_mass_;

  double joint(const PhasePoint& q) const {
    return q.logp - 0.5 * q.r.dot(inv_mass_.cwiseProduct(q.r));
  }

  void leapfrog(PhasePoint& q, double eps) {
    q.r += 0.5 * eps * q.grad;
    q.theta += eps * inv_mass_.cwiseProduct(q.r);
    q.logp = f_(q.theta, q.grad);
    q.r += 0.5 * eps * q.grad;
    ++n_leapfrog_;
  }

  Eigen::VectorXd sample_momentum(int dim) {
    Eigen::VectorXd r(dim);
    for (int i = 0; i < dim; ++i) r[i] = rng_.normal() / std::sqrt(inv_mass_[i]);
    return r;
  }

  bool uturn(const PhasePoint& minus, const PhasePoint& plus) const {
    const Eigen::VectorXd span = plus.theta - minus.theta;
    return span.dot(inv_mass_.cwiseProduct(minus.r)) < 0.0 ||
           span.dot(inv_mass_.cwiseProduct(plus.r)) < 0.0;
  }

  struct Tree {
    PhasePoint minus, plus;
    Eigen::VectorXd proposal;
    double log_weight = kNegInf;
    double sum_accept = 0.0;
    long n_states = 0;
    bool diverged = false;
    bool turned = false;
  };

  // one leapfrog leaf
  Tree leaf(PhasePoint q, double eps, int direction, double joint0) {
    leapfrog(q, direction > 0 ? eps : -eps);
    Tree t;
    const double j = std::isfinite(q.logp) ? joint(q) : kNegInf;
    const double dj = j - joint0;
    t.diverged = !(dj > -opts_.divergence_threshold);
    t.log_weight = t.diverged ? kNegInf : dj;
    t.sum_accept = std::isfinite(dj) ? std::min(1.0, std::exp(dj)) : 0.0;
    t.n_states = 1;
    t.proposal = q.theta;
    t.minus = q;
    t.plus = std::move(q);
    return t;
  }

  Tree build(const PhasePoint& from, int depth, double eps, int direction, double joint0) {
    if (depth == 0) return leaf(from, eps, direction, joint0);
    Tree first = build(from, depth - 1, eps, direction, joint0);
    if (first.diverged || first.turned) return first;
    const PhasePoint& edge = (direction > 0) ? first.plus : first.minus;
    Tree second = build(edge, depth - 1, eps, direction, joint0);

    Tree t;
    t.minus = (direction > 0) ? first.minus : second.minus;
    t.plus = (direction > 0) ? second.plus : first.plus;
    t.diverged = second.diverged;
    t.n_states = first.n_states + second.n_states;
    t.sum_accept = first.sum_accept + second.sum_accept;
    t.log_weight = log_sum_exp(first.log_weight, second.log_weight);
    if (t.diverged) return t;
    // multinomial draw between subtrees
    const double u = rng_.uniform();
    t.proposal = (std::log(u) < second.log_weight - t.log_weight) ? second.proposal
                                                                  : first.proposal;
    t.turned = second.turned || uturn(t.minus, t.plus);
    return t;
  }

  // returns acceptance statistic for the transition
  double transition(PhasePoint& q, double eps) {
    q.r = sample_momentum(static_cast<int>(q.theta.size()));
    const double joint0 = joint(q);
    Tree tree;
    tree.minus = q;
    tree.plus = q;
    tree.proposal = q.theta;
    tree.log_weight = 0.0;
    tree.n_states = 1;
    double sum_accept = 0.0;
    long n_states = 0;
    bool accepted_any = false;
    Eigen::VectorXd next_theta = q.theta;

    int depth = 0;
    for (; depth < opts_.max_depth; ++depth) {
      const int direction = rng_.uniform() < 0.5 ? -1 : 1;
      const PhasePoint& edge = (direction > 0) ? tree.plus : tree.minus;
      Tree sub = build(edge, depth, eps, direction, joint0);
      sum_accept += sub.sum_accept;
      n_states += sub.n_states;
      if (sub.diverged) {
        ++divergences_;
        break;
      }
      if (!sub.turned) {
        // progressive biased sampling toward the fresh subtree
        const double lratio = sub.log_weight - tree.log_weight;
        if (lratio > 0.0 || std::log(rng_.uniform_pos()) < lratio) {
          next_theta = sub.proposal;
          accepted_any = true;
        }
      }
      if (direction > 0) {
        tree.plus = sub.plus;
      } else {
        tree.minus = sub.minus;
      }
      tree.log_weight = log_sum_exp(tree.log_weight, sub.log_weight);
      if (sub.turned || uturn(tree.minus, tree.plus)) break;
    }
    if (depth == opts_.max_depth) ++max_depth_hits_;
    if (accepted_any) {
      q.theta = next_theta;
      q.logp = f_(q.theta, q.grad);
    }
    return n_states > 0 ? sum_accept / static_cast<double>(n_states) : 0.0;
  }

  const LogDensityFn& f_;
  const NutsOptions& opts_;
  Rng& rng_;
  long n_leapfrog_ = 0;
  int divergences_ = 0;
  long max_depth_hits_ = 0;
};

// dual averaging state (Hoffman & Gelman 2014)
struct DualAveraging {
  double mu = 0.0, log_eps = 0.0, log_eps_bar = 0.0, h_bar = 0.0;
  double gamma = 0.05, t0 = 10.0, kappa = 0.75;
  long m = 0;

  void restart(double eps) {
    mu = std::log(10.0 * eps);
    log_eps = std::log(eps);
    log_eps_bar = 0.0;
    h_bar = 0.0;
    m = 0;
  }
  double update(double accept, double target) {
    ++m;
    h_bar = (1.0 - 1.0 / (m + t0)) * h_bar + (target - accept) / (m + t0);
    log_eps = mu - std::sqrt(static_cast<double>(m)) / gamma * h_bar;
    const double w = std::pow(static_cast<double>(m), -kappa);
    log_eps_bar = w * log_eps + (1.0 - w) * log_eps_bar;
    return std::exp(log_eps);
  }
  double adapted() const { return std::exp(log_eps_bar); }
};

double find_initial_step(NutsWorker& w, const PhasePoint& q0, Rng& rng) {
  double eps = 1.0;
  PhasePoint q = q0;
  q.r = w.sample_momentum(static_cast<int>(q.theta.size()));
  const double j0 = w.joint(q);
  PhasePoint q1 = q;
  w.leapfrog(q1, eps);
  double dj = std::isfinite(q1.logp) ? w.joint(q1) - j0 : kNegInf;
  const double dir = (dj > std::log(0.5)) ? 1.0 : -1.0;
  for (int it = 0; it < 100; ++it) {
    if (dir * dj <= -dir * std::log(2.0)) break;
    eps *= std::pow(2.0, dir);
    if (eps > 1e7 || eps < 1e-10) break;
    q1 = q;
    w.leapfrog(q1, eps);
    dj = std::isfinite(q1.logp) ? w.joint(q1) - j0 : kNegInf;
  }
  return eps;
}
}  // namespace

Eigen::MatrixXd nuts_sample(const LogDensityFn& logp_grad, const Eigen::VectorXd& init,
                            int warmup, int draws, Rng& rng, const NutsOptions& opts,
                            NutsChainStats& stats) {
  const int dim = static_cast<int>(init.size());
  NutsWorker worker(logp_grad, dim, opts, rng);

  PhasePoint q;
  q.theta = init;
  q.logp = logp_grad(q.theta, q.grad);
  if (!std::isfinite(q.logp))
    throw std::runtime_error("nuts_sample: initial point has non-finite density");

  double eps = find_initial_step(worker, q, rng);
  DualAveraging da;
  da.restart(eps);

  // warmup schedule: fast(75) | growing covariance windows | fast(50)
  const int init_buffer = std::min(75, warmup / 2);
  const int term_buffer = std::min(50, warmup / 4);
  const bool adapt_mass = warmup >= 150;
  int window_end = adapt_mass ? init_buffer + 25 : warmup;
  int window_size = 25;

  Eigen::VectorXd acc_sum = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd acc_sq = Eigen::VectorXd::Zero(dim);
  long acc_n = 0;

  for (int it = 0; it < warmup; ++it) {
    const double accept = worker.transition(q, eps);
    eps = da.update(accept, opts.target_accept);

    if (adapt_mass && it >= init_buffer && it < warmup - term_buffer) {
      acc_sum += q.theta;
      acc_sq += q.theta.cwiseProduct(q.theta);
      ++acc_n;
      if (it + 1 == std::min(window_end, warmup - term_buffer)) {
        if (acc_n >= 10) {
          const double n = static_cast<double>(acc_n);
          Eigen::VectorXd var =
              (acc_sq - acc_sum.cwiseProduct(acc_sum) / n) / (n - 1.0);
          // regularize toward a small diagonal as short windows are noisy
          var = var * (n / (n + 5.0)) +
                Eigen::VectorXd::Constant(dim, 1e-3 * (5.0 / (n + 5.0)));
          worker.inv_mass_ = var.cwiseMax(1e-12);
          eps = find_initial_step(worker, q, rng);
          da.restart(eps);
        }
        acc_sum.setZero();
        acc_sq.setZero();
        acc_n = 0;
        window_size *= 2;
        window_end += window_size;
      }
    }
  }
  if (warmup > 0) eps = da.adapted();

  // reset post-warmup counters
  worker.divergences_ = 0;
  worker.n_leapfrog_ = 0;
  worker.max_depth_hits_ = 0;

  Eigen::MatrixXd out(draws, dim);
  double accept_sum = 0.0;
  for (int it = 0; it < draws; ++it) {
    accept_sum += worker.transition(q, eps);
    out.row(it) = q.theta;
  }

  stats.divergences = worker.divergences_;
  stats.mean_accept = draws > 0 ? accept_sum / draws : 0.0;
  stats.step_size = eps;
  stats.n_leapfrog = worker.n_leapfrog_;
  stats.max_depth_hits =
      draws > 0 ? static_cast<double>(worker.max_depth_hits_) / draws : 0.0;
  return out;
}

}  // namespace pr2d2ord
