#include "pr2d2ord/types.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pr2d2ord {

void OrdinalDataset::validate() const {
  if (K < 2) throw std::invalid_argument("OrdinalDataset: K must be >= 2");
  if (X.rows() != static_cast<Eigen::Index>(y.size()))
    throw std::invalid_argument("OrdinalDataset: X rows must match y length");
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] < 1 || y[i] > K)
      throw std::invalid_argument("OrdinalDataset: label out of {1..K} at row " +
                                  std::to_string(i));
  }
  if (!X.allFinite()) throw std::invalid_argument("OrdinalDataset: non-finite covariate");
}

bool CutPoints::strictly_increasing() const {
  for (std::size_t j = 0; j + 1 < tau.size(); ++j) {
    if (!(tau[j] < tau[j + 1])) return false;
  }
  for (double t : tau) {
    if (!std::isfinite(t)) return false;
  }
  return true;
}

void CutPoints::validate() const {
  if (tau.empty()) throw std::invalid_argument("CutPoints: needs at least one cut-point");
  if (!strictly_increasing())
    throw std::invalid_argument("CutPoints: must be finite and strictly increasing");
}

void CategoryProbs::validate() const {
  if (pi.size() < 2) throw std::invalid_argument("CategoryProbs: needs >= 2 entries");
  double sum = 0.0;
  for (double p : pi) {
    if (!(p > 0.0)) throw std::invalid_argument("CategoryProbs: entries must be positive");
    sum += p;
  }
  if (std::fabs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("CategoryProbs: entries must sum to 1");
}

void DirichletConc::validate() const {
  if (alpha.size() < 2) throw std::invalid_argument("DirichletConc: needs >= 2 entries");
  for (double a : alpha) {
    if (!(a > 0.0)) throw std::invalid_argument("DirichletConc: entries must be positive");
  }
}

DirichletConc DirichletConc::uniform(int K, double value) {
  DirichletConc d;
  d.alpha.assign(static_cast<std::size_t>(K), value);
  return d;
}

}  // namespace pr2d2ord
