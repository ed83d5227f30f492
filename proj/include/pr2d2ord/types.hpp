#pragma once

#include <Eigen/Dense>
#include <vector>

namespace pr2d2ord {

/// Covariate matrix, ordinal labels in {1..K}, declared category count.
/// Labels are ranks only; no arithmetic beyond ordering/equality.
struct OrdinalDataset {
  Eigen::MatrixXd X;    // n x p
  std::vector<int> y;   // 1-based category labels
  int K = 2;

  int n() const { return static_cast<int>(y.size()); }
  int p() const { return static_cast<int>(X.cols()); }
  void validate() const;
};

/// Strictly increasing thresholds tau_1 < ... < tau_{K-1}; the sentinels
/// tau_0 = -inf and tau_K = +inf are implicit.
struct CutPoints {
  std::vector<double> tau;

  int num_categories() const { return static_cast<int>(tau.size()) + 1; }
  bool strictly_increasing() const;
  void validate() const;
};

struct LinearPredictor {
  Eigen::VectorXd eta;
};

/// Point on the open K-simplex.
struct CategoryProbs {
  std::vector<double> pi;
  void validate() const;
};

/// Dirichlet concentration parameters, all positive.
struct DirichletConc {
  std::vector<double> alpha;
  void validate() const;
  static DirichletConc uniform(int K, double value = 1.0);
};

}  // namespace pr2d2ord
