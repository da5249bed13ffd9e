#include "riskad/shallow.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace riskad {

namespace {

void require_rows(const Eigen::MatrixXd& X, const char* source) {
  if (X.rows() == 0) {
    throw std::invalid_argument(std::string("missing data source: ") + source + " is empty");
  }
}

ScoreBatch batch_scores(const Eigen::VectorXd& w, const SemiSupSplit& split, bool need_p,
                        bool need_n, bool need_u) {
  ScoreBatch b;
  if (need_p) {
    require_rows(split.P, "P");
    b.p = split.P * w;
  }
  if (need_n) {
    require_rows(split.N, "N");
    b.n = split.N * w;
  }
  if (need_u) {
    require_rows(split.U, "U");
    b.u = split.U * w;
  }
  return b;
}

// Accumulates (1/n) sum_i ell'(x_i . w, y) x_i into g.
void add_loss_gradient(Eigen::VectorXd& g, const Eigen::MatrixXd& X, const Eigen::VectorXd& s,
                       const LossSpec& loss, int y, double weight) {
  const double scale = weight / static_cast<double>(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const double d = grad_loss(loss, s[i], y);
    if (d != 0.0) g.noalias() += (scale * d) * X.row(i).transpose();
  }
}

}  // namespace

double LinearModel::score(const Eigen::VectorXd& x) const {
  if (x.size() + 1 != w.size()) {
    throw std::invalid_argument("score: expected " + std::to_string(w.size() - 1) +
                                " features, got " + std::to_string(x.size()));
  }
  return scale.apply(x).dot(w.head(w.size() - 1)) + w[w.size() - 1];
}

Eigen::VectorXd LinearModel::score(const Eigen::MatrixXd& X) const {
  if (X.cols() + 1 != w.size()) {
    throw std::invalid_argument("score: expected " + std::to_string(w.size() - 1) +
                                " features, got " + std::to_string(X.cols()));
  }
  return (scale.apply(X) * w.head(w.size() - 1)).array() + w[w.size() - 1];
}

double objective_shallow(const Eigen::VectorXd& w, const SemiSupSplit& split,
                         const LossSpec& loss, const RiskConfig& cfg, const RegChoice& reg) {
  const ScoreBatch b = batch_scores(w, split, true, true, true);
  return risk_rad_unbiased(b, loss, cfg) + reg.lambda * reg_penalty(reg, w);
}

Eigen::VectorXd gradient_shallow(const Eigen::VectorXd& w, const SemiSupSplit& split,
                                 const LossSpec& loss, const RiskConfig& cfg,
                                 const RegChoice& reg) {
  const ScoreBatch b = batch_scores(w, split, true, true, true);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(w.size());
  add_loss_gradient(g, split.U, b.u, loss, +1, cfg.a);
  add_loss_gradient(g, split.P, b.p, loss, +1, (1.0 - cfg.a) * cfg.priors.pi_p);
  add_loss_gradient(g, split.N, b.n, loss, -1, cfg.priors.pi_n);
  add_loss_gradient(g, split.N, b.n, loss, +1, -cfg.a * cfg.priors.pi_n);
  g.noalias() += reg.lambda * reg_gradient(reg, w);
  return g;
}

double objective_pn(const Eigen::VectorXd& w, const SemiSupSplit& split, const LossSpec& loss,
                    const RiskConfig& cfg, const RegChoice& reg) {
  const ScoreBatch b = batch_scores(w, split, true, true, false);
  return risk_pn(b, loss, cfg.priors) + reg.lambda * reg_penalty(reg, w);
}

Eigen::VectorXd gradient_pn(const Eigen::VectorXd& w, const SemiSupSplit& split,
                            const LossSpec& loss, const RiskConfig& cfg, const RegChoice& reg) {
  const ScoreBatch b = batch_scores(w, split, true, true, false);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(w.size());
  add_loss_gradient(g, split.P, b.p, loss, +1, cfg.priors.pi_p);
  add_loss_gradient(g, split.N, b.n, loss, -1, cfg.priors.pi_n);
  g.noalias() += reg.lambda * reg_gradient(reg, w);
  return g;
}

double objective_pu(const Eigen::VectorXd& w, const SemiSupSplit& split, const LossSpec& loss,
                    const RiskConfig& cfg, const RegChoice& reg) {
  const ScoreBatch b = batch_scores(w, split, true, false, true);
  const double risk = loss.symmetric  ? risk_pu_nonconvex(b, loss, cfg.priors)
                      : loss.linear_odd ? risk_pu_convex(b, loss, cfg.priors)
                                        : throw std::invalid_argument(
                                              "condition error: PU baseline needs a symmetric "
                                              "or linear-odd loss, got " +
                                              std::string(loss.name));
  return risk + reg.lambda * reg_penalty(reg, w);
}

Eigen::VectorXd gradient_pu(const Eigen::VectorXd& w, const SemiSupSplit& split,
                            const LossSpec& loss, const RiskConfig& cfg, const RegChoice& reg) {
  const ScoreBatch b = batch_scores(w, split, true, false, true);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(w.size());
  if (loss.symmetric) {
    add_loss_gradient(g, split.P, b.p, loss, +1, 2.0 * cfg.priors.pi_p);
    add_loss_gradient(g, split.U, b.u, loss, -1, 1.0);
  } else if (loss.linear_odd) {
    g.noalias() -= (cfg.priors.pi_p / static_cast<double>(split.P.rows())) *
                   split.P.colwise().sum().transpose();
    add_loss_gradient(g, split.U, b.u, loss, -1, 1.0);
  } else {
    throw std::invalid_argument("condition error: PU baseline needs a symmetric or linear-odd "
                                "loss, got " + std::string(loss.name));
  }
  g.noalias() += reg.lambda * reg_gradient(reg, w);
  return g;
}

Eigen::MatrixXd augment_intercept(const Eigen::MatrixXd& X) {
  Eigen::MatrixXd out(X.rows(), X.cols() + 1);
  out.leftCols(X.cols()) = X;
  out.col(X.cols()).setOnes();
  return out;
}

ShallowTrainResult train_shallow(const SemiSupSplit& split, const LossSpec& loss,
                                 const RiskConfig& cfg, const RegSpec& reg_spec,
                                 const ShallowOptOptions& opt, ShallowObjective objective) {
  require_rows(split.P, "P");
  if (objective != ShallowObjective::Pu) require_rows(split.N, "N");
  if (objective != ShallowObjective::Pn) require_rows(split.U, "U");

  SemiSupSplit work = split;
  if (objective == ShallowObjective::Pu) work.N.resize(0, split.P.cols());  // N must not leak in

  const ScaleMode mode =
      reg_spec.kind == RegKind::L2 ? ScaleMode::UnitMaxL2 : ScaleMode::UnitMaxLinf;
  const FeatureScale scale = scale_features(work, mode);
  work.P = augment_intercept(work.P);
  work.N = augment_intercept(work.N);
  work.U = augment_intercept(work.U);

  RegChoice reg;
  reg.kind = reg_spec.kind;
  // norm constants from the same rows the scaling referenced: N when
  // present, otherwise everything the PU objective trains on
  NormConstants nc{0.0, 0.0};
  if (work.N.rows() > 0) {
    nc = data_norm_constants(work.N);
  } else {
    const NormConstants a = data_norm_constants(work.P);
    const NormConstants b = data_norm_constants(work.U);
    nc = {std::max(a.c, b.c), std::max(a.c_inf, b.c_inf)};
  }
  reg.norm_bound = reg_spec.kind == RegKind::L2 ? nc.c : nc.c_inf;
  reg.lambda = reg_spec.lambda_auto
                   ? (reg_spec.kind == RegKind::L2
                          ? lambda_min_l2(cfg.a, loss, cfg.priors.pi_n, nc.c)
                          : lambda_min_l1(cfg.a, loss, cfg.priors.pi_n, nc.c_inf))
                   : reg_spec.lambda;

  std::function<double(const Eigen::VectorXd&)> f;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> df;
  switch (objective) {
    case ShallowObjective::Rad:
      f = [&](const Eigen::VectorXd& w) { return objective_shallow(w, work, loss, cfg, reg); };
      df = [&](const Eigen::VectorXd& w) { return gradient_shallow(w, work, loss, cfg, reg); };
      break;
    case ShallowObjective::Pn:
      f = [&](const Eigen::VectorXd& w) { return objective_pn(w, work, loss, cfg, reg); };
      df = [&](const Eigen::VectorXd& w) { return gradient_pn(w, work, loss, cfg, reg); };
      break;
    case ShallowObjective::Pu:
      f = [&](const Eigen::VectorXd& w) { return objective_pu(w, work, loss, cfg, reg); };
      df = [&](const Eigen::VectorXd& w) { return gradient_pu(w, work, loss, cfg, reg); };
      break;
  }

  ShallowTrainResult result;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(work.P.cols());
  double fw = f(w);
  result.objective_trace.push_back(fw);

  int it = 0;
  double grad_norm = 0.0;
  for (; it < opt.max_iters; ++it) {
    const Eigen::VectorXd g = df(w);
    grad_norm = g.norm();
    if (!std::isfinite(fw) || !std::isfinite(grad_norm)) {
      throw std::runtime_error("shallow training diverged at iteration " + std::to_string(it));
    }
    if (grad_norm <= opt.tol) break;

    double step = opt.init_step;
    bool accepted = false;
    const double gg = grad_norm * grad_norm;
    for (int bt = 0; bt < opt.max_backtracks; ++bt) {
      const Eigen::VectorXd cand = w - step * g;
      const double fc = f(cand);
      if (fc <= fw - opt.sufficient_decrease * step * gg) {
        w = cand;
        fw = fc;
        accepted = true;
        break;
      }
      step *= opt.shrink;
    }
    if (!accepted) break;  // no descent step found; treat as converged
    result.objective_trace.push_back(fw);
  }

  result.model.w = std::move(w);
  result.model.scale = scale;
  result.model.loss_name = std::string(loss.name);
  result.model.a = cfg.a;
  result.model.pi_p_e = cfg.priors.pi_p;
  result.model.reg = reg;
  result.grad_norm = grad_norm;
  result.iterations = it;
  return result;
}

}  // namespace riskad
