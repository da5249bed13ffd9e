#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "riskad/data.hpp"
#include "riskad/estimators.hpp"
#include "riskad/regselect.hpp"

namespace riskad {

/**
 * Linear decision function g(x) = <w, [x / divisor; 1]>; the intercept is the
 * last weight and is regularized like the rest. Higher scores mean more
 * normal.
 */
struct LinearModel {
  Eigen::VectorXd w;  // dimension d + 1 (intercept last)
  FeatureScale scale;
  std::string loss_name;
  double a = 0.1;
  double pi_p_e = 0.8;
  RegChoice reg;

  double score(const Eigen::VectorXd& x) const;
  Eigen::VectorXd score(const Eigen::MatrixXd& X) const;
};

// Mixed objective on precomputed feature matrices (scores t = <w, x_i>):
//   a Ru+ + (1-a) pi_p Rp+ + pi_n Rn- - a pi_n Rn+ + lambda R(w)
double objective_shallow(const Eigen::VectorXd& w, const SemiSupSplit& split,
                         const LossSpec& loss, const RiskConfig& cfg, const RegChoice& reg);

Eigen::VectorXd gradient_shallow(const Eigen::VectorXd& w, const SemiSupSplit& split,
                                 const LossSpec& loss, const RiskConfig& cfg,
                                 const RegChoice& reg);

// Supervised baseline: pi_p Rp+ + pi_n Rn- + lambda R(w).
double objective_pn(const Eigen::VectorXd& w, const SemiSupSplit& split, const LossSpec& loss,
                    const RiskConfig& cfg, const RegChoice& reg);
Eigen::VectorXd gradient_pn(const Eigen::VectorXd& w, const SemiSupSplit& split,
                            const LossSpec& loss, const RiskConfig& cfg, const RegChoice& reg);

// PU baseline on (P, U) only; picks the nonconvex or convex estimator by the
// loss's structural condition and rejects losses satisfying neither.
double objective_pu(const Eigen::VectorXd& w, const SemiSupSplit& split, const LossSpec& loss,
                    const RiskConfig& cfg, const RegChoice& reg);
Eigen::VectorXd gradient_pu(const Eigen::VectorXd& w, const SemiSupSplit& split,
                            const LossSpec& loss, const RiskConfig& cfg, const RegChoice& reg);

struct ShallowOptOptions {
  int max_iters = 2000;
  double tol = 1e-6;            // on the gradient 2-norm
  double init_step = 1.0;
  double shrink = 0.5;
  double sufficient_decrease = 1e-4;
  int max_backtracks = 60;
};

enum class ShallowObjective { Rad, Pn, Pu };

struct RegSpec {
  RegKind kind = RegKind::L2;
  bool lambda_auto = true;  // choose lambda by the nonnegativity bound
  double lambda = 0.0;      // used when lambda_auto is false
};

struct ShallowTrainResult {
  LinearModel model;
  std::vector<double> objective_trace;  // value at every accepted iterate
  double grad_norm = 0.0;
  int iterations = 0;
};

// Scales the split (max negative 2-norm for L2, inf-norm for L1), appends the
// intercept feature, picks lambda when requested, and runs full-batch descent
// with backtracking from w = 0.
ShallowTrainResult train_shallow(const SemiSupSplit& split, const LossSpec& loss,
                                 const RiskConfig& cfg, const RegSpec& reg_spec,
                                 const ShallowOptOptions& opt = {},
                                 ShallowObjective objective = ShallowObjective::Rad);

Eigen::MatrixXd augment_intercept(const Eigen::MatrixXd& X);

}  // namespace riskad
