#pragma once

#include <Eigen/Core>

#include "riskad/estimators.hpp"
#include "riskad/losses.hpp"

namespace riskad {

enum class RegKind { L2, L1 };

struct RegChoice {
  RegKind kind = RegKind::L2;
  double lambda = 0.0;
  // Norm constant of the negative data the lambda bound was computed from:
  // max row 2-norm for L2, max row inf-norm for L1.
  double norm_bound = 0.0;
};

struct NormConstants {
  double c;      // max row 2-norm
  double c_inf;  // max row inf-norm
};

NormConstants data_norm_constants(const Eigen::MatrixXd& negative_features);

// Smallest lambda for R(w) = ||w||_2^2 that keeps the mixed objective
// nonnegative:  ((1-a) b2 + a b1)^2 pi_n c^2 / (4 (1-a) b2 b3).
double lambda_min_l2(double a, const LossSpec& loss, double pi_n, double c);

// L1 counterpart. The published bound and its proof differ when b3 != 1
// (c_inf ((1-a) b2 b3 + a b1) pi_n versus c_inf ((1-a) b2 + a b1) pi_n);
// both are returned as their maximum, which is sufficient in either reading.
double lambda_min_l1(double a, const LossSpec& loss, double pi_n, double c_inf);

double reg_penalty(const RegChoice& reg, const Eigen::VectorXd& w);
Eigen::VectorXd reg_gradient(const RegChoice& reg, const Eigen::VectorXd& w);

class SemiSupSplit;  // data.hpp

// True iff the regularized mixed objective evaluated at model_weights is
// >= -1e-9 on the given split.
bool verify_nonneg_objective(const Eigen::VectorXd& model_weights, const SemiSupSplit& split,
                             const LossSpec& loss, const RiskConfig& cfg, const RegChoice& reg);

}  // namespace riskad
