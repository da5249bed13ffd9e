#include "riskad/regselect.hpp"

#include <cmath>
#include <stdexcept>

#include "riskad/shallow.hpp"

namespace riskad {

namespace {

void require_a(double a) {
  if (!(a > 0.0 && a < 1.0)) {
    throw std::invalid_argument("mixing weight a must lie strictly in (0,1)");
  }
}

}  // namespace

NormConstants data_norm_constants(const Eigen::MatrixXd& negative_features) {
  if (negative_features.rows() == 0) {
    throw std::invalid_argument("data_norm_constants: empty feature matrix");
  }
  NormConstants nc{0.0, 0.0};
  for (Eigen::Index i = 0; i < negative_features.rows(); ++i) {
    nc.c = std::max(nc.c, negative_features.row(i).norm());
    nc.c_inf = std::max(nc.c_inf, negative_features.row(i).cwiseAbs().maxCoeff());
  }
  return nc;
}

double lambda_min_l2(double a, const LossSpec& loss, double pi_n, double c) {
  require_a(a);
  if (c < 0.0) throw std::invalid_argument("c must be nonnegative");
  const double mix = (1.0 - a) * loss.b2 + a * loss.b1;
  return mix * mix * pi_n * c * c / (4.0 * (1.0 - a) * loss.b2 * loss.b3);
}

double lambda_min_l1(double a, const LossSpec& loss, double pi_n, double c_inf) {
  require_a(a);
  if (c_inf < 0.0) throw std::invalid_argument("c_inf must be nonnegative");
  const double stated = c_inf * ((1.0 - a) * loss.b2 * loss.b3 + a * loss.b1) * pi_n;
  const double proven = c_inf * ((1.0 - a) * loss.b2 + a * loss.b1) * pi_n;
  return std::max(stated, proven);
}

double reg_penalty(const RegChoice& reg, const Eigen::VectorXd& w) {
  return reg.kind == RegKind::L2 ? w.squaredNorm() : w.lpNorm<1>();
}

Eigen::VectorXd reg_gradient(const RegChoice& reg, const Eigen::VectorXd& w) {
  if (reg.kind == RegKind::L2) return 2.0 * w;
  // subgradient with sign(0) = 0
  return w.unaryExpr([](double v) { return v > 0.0 ? 1.0 : v < 0.0 ? -1.0 : 0.0; });
}

bool verify_nonneg_objective(const Eigen::VectorXd& model_weights, const SemiSupSplit& split,
                             const LossSpec& loss, const RiskConfig& cfg, const RegChoice& reg) {
  return objective_shallow(model_weights, split, loss, cfg, reg) >= -1e-9;
}

}  // namespace riskad
