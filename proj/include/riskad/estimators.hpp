#pragma once

#include <Eigen/Core>
#include <string_view>

#include "riskad/losses.hpp"

namespace riskad {

// Decision-function values g(x) grouped by source. Any vector may be empty;
// each estimator checks for the sources it needs.
struct ScoreBatch {
  Eigen::VectorXd p;  // scores of labeled positives
  Eigen::VectorXd n;  // scores of labeled negatives
  Eigen::VectorXd u;  // scores of unlabeled points
};

struct Priors {
  double pi_p;
  double pi_n;
  explicit Priors(double pi_p_in);
};

enum class Estimator {
  PN,
  PuNonconvex,
  PuConvex,
  PuNonNeg,
  NuNonconvex,
  NuConvex,
  RadUnbiased,
  RadNonNeg,
};

Estimator estimator_by_name(std::string_view name);
std::string_view estimator_name(Estimator e);

struct RiskConfig {
  double a;  // convex-combination weight, in (0,1)
  Priors priors;
  Estimator estimator;
  RiskConfig(double a_in, Priors priors_in, Estimator e);
};

// (1/n) * sum_i ell(score_i, y). Empty scores signal a missing data source.
double partial_mean(const Eigen::VectorXd& scores, const LossSpec& loss, int y);

// pi_p * Rp+ + pi_n * Rn-
double risk_pn(const ScoreBatch& b, const LossSpec& loss, const Priors& pr);

// 2 pi_p * Rp+ - pi_p + Ru-. Requires a symmetric loss.
double risk_pu_nonconvex(const ScoreBatch& b, const LossSpec& loss, const Priors& pr);

// -pi_p * mean(g(x_p)) + Ru-. Requires a linear-odd loss.
double risk_pu_convex(const ScoreBatch& b, const LossSpec& loss, const Priors& pr);

// pi_p * Rp+ + max{0, Ru- - pi_p * Rp-}
double risk_pu_nonneg(const ScoreBatch& b, const LossSpec& loss, const Priors& pr);

// 2 pi_n * Rn- - pi_n + Ru+. Requires a symmetric loss.
double risk_nu_nonconvex(const ScoreBatch& b, const LossSpec& loss, const Priors& pr);

// pi_n * mean(g(x_n)) + Ru+. Requires a linear-odd loss.
double risk_nu_convex(const ScoreBatch& b, const LossSpec& loss, const Priors& pr);

// a * Ru+ + (1-a) pi_p * Rp+ + pi_n * Rn- - a pi_n * Rn+. May be negative.
double risk_rad_unbiased(const ScoreBatch& b, const LossSpec& loss, const RiskConfig& cfg);

// pi_n * Rn- + (1-a) pi_p * Rp+ + a * max{0, Ru+ - pi_n * Rn+}. Nonnegative.
double risk_rad_nonneg(const ScoreBatch& b, const LossSpec& loss, const RiskConfig& cfg);

double evaluate_risk(const ScoreBatch& b, const LossSpec& loss, const RiskConfig& cfg);

// Upper bound on the bias of the clipped estimator for a fixed g:
//   a * pi_n * C_ell * exp(-2 pi_p^2 rho^2 / (C_ell^2 (1/n_u + pi_n^2/n_n)))
// where C_ell bounds the loss on the score range and rho is a positive
// lower bound on Rp+(g), both supplied by the caller.
double bias_bound(const RiskConfig& cfg, double loss_sup, double rho, long n_n, long n_u);

}  // namespace riskad
