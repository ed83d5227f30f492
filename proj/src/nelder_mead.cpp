#include "pr2d2ord/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pr2d2ord {

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& x0, double initial_step,
                             int max_iters, double ftol) {
  const std::size_t d = x0.size();
  if (d == 0) throw std::invalid_argument("nelder_mead: empty start point");

  struct Vertex {
    std::vector<double> x;
    double fx;
  };
  std::vector<Vertex> simplex(d + 1);
  int evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    const double v = f(x);
    return std::isfinite(v) ? v : 1e300;
  };

  simplex[0] = {x0, eval(x0)};
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<double> xi = x0;
    xi[i] += initial_step;
    simplex[i + 1] = {std::move(xi), 0.0};
    simplex[i + 1].fx = eval(simplex[i + 1].x);
  }

  auto by_value = [](const Vertex& a, const Vertex& b) { return a.fx < b.fx; };
  int iter = 0;
  for (; iter < max_iters; ++iter) {
    std::sort(simplex.begin(), simplex.end(), by_value);
    if (simplex.back().fx - simplex.front().fx < ftol) break;

    // centroid of all but the worst
    std::vector<double> centroid(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) centroid[j] += simplex[i].x[j];
    }
    for (double& c : centroid) c /= static_cast<double>(d);

    auto blend = [&](double t) {
      std::vector<double> x(d);
      for (std::size_t j = 0; j < d; ++j)
        x[j] = centroid[j] + t * (simplex.back().x[j] - centroid[j]);
      return x;
    };

    const std::vector<double> xr = blend(-1.0);
    const double fr = eval(xr);
    if (fr < simplex.front().fx) {
      const std::vector<double> xe = blend(-2.0);
      const double fe = eval(xe);
      simplex.back() = (fe < fr) ? Vertex{xe, fe} : Vertex{xr, fr};
      continue;
    }
    if (fr < simplex[d - 1].fx) {
      simplex.back() = {xr, fr};
      continue;
    }
    if (fr < simplex.back().fx) {
      const std::vector<double> xoc = blend(-0.5);
      const double foc = eval(xoc);
      if (foc <= fr) {
        simplex.back() = {xoc, foc};
        continue;
      }
    } else {
      const std::vector<double> xic = blend(0.5);
      const double fic = eval(xic);
      if (fic < simplex.back().fx) {
        simplex.back() = {xic, fic};
        continue;
      }
    }
    // shrink toward the best vertex
    for (std::size_t i = 1; i <= d; ++i) {
      for (std::size_t j = 0; j < d; ++j)
        simplex[i].x[j] = simplex[0].x[j] + 0.5 * (simplex[i].x[j] - simplex[0].x[j]);
      simplex[i].fx = eval(simplex[i].x);
    }
  }

  std::sort(simplex.begin(), simplex.end(), by_value);
  return {simplex.front().x, simplex.front().fx, iter, evals};
}

}  // namespace pr2d2ord
