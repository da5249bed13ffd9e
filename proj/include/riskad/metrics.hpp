#pragma once

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

namespace riskad {

// Mann-Whitney AUC with ties counted half, computed by sorting. Labels are
// +1 (normal, the positive class of the ranking) and -1 (anomaly); higher
// scores mean more normal. Throws if only one class is present.
double auc(const Eigen::VectorXd& scores, const Eigen::VectorXi& labels);

// (fpr, tpr) points of the ROC curve, one per distinct threshold, for
// external plotting.
std::vector<std::pair<double, double>> roc_points(const Eigen::VectorXd& scores,
                                                  const Eigen::VectorXi& labels);

struct TrialResult {
  std::string dataset;
  std::string method;
  std::string loss;
  double a = 0.0;
  double pi_p_e = 0.0;
  int trial = 0;
  double auc = 0.0;
};

struct Aggregate {
  double mean;
  double se;  // sample standard deviation (n-1) over sqrt(n)
};

Aggregate aggregate(const std::vector<double>& values);
Aggregate aggregate(const std::vector<TrialResult>& results);

}  // namespace riskad
