#include "riskad/estimators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace riskad {

namespace {

void require_nonempty(const Eigen::VectorXd& scores, const char* source) {
  if (scores.size() == 0) {
    throw std::invalid_argument(std::string("missing data source: ") + source +
                                " scores are empty");
  }
}

void require_symmetric(const LossSpec& loss) {
  if (!loss.symmetric) {
    throw std::invalid_argument("condition error: " + std::string(loss.name) +
                                " does not satisfy the symmetric condition");
  }
}

void require_linear_odd(const LossSpec& loss) {
  if (!loss.linear_odd) {
    throw std::invalid_argument("condition error: " + std::string(loss.name) +
                                " does not satisfy the linear-odd condition");
  }
}

}  // namespace

Priors::Priors(double pi_p_in) : pi_p(pi_p_in), pi_n(1.0 - pi_p_in) {
  if (!(pi_p > 0.0 && pi_p < 1.0)) {
    throw std::invalid_argument("pi_p must lie strictly in (0,1)");
  }
}

RiskConfig::RiskConfig(double a_in, Priors priors_in, Estimator e)
    : a(a_in), priors(priors_in), estimator(e) {
  if (!(a > 0.0 && a < 1.0)) {
    throw std::invalid_argument("mixing weight a must lie strictly in (0,1)");
  }
}

Estimator estimator_by_name(std::string_view name) {
  if (name == "pn") return Estimator::PN;
  if (name == "pu-nonconvex") return Estimator::PuNonconvex;
  if (name == "pu-convex") return Estimator::PuConvex;
  if (name == "pu-nonneg") return Estimator::PuNonNeg;
  if (name == "nu-nonconvex") return Estimator::NuNonconvex;
  if (name == "nu-convex") return Estimator::NuConvex;
  if (name == "rad-unbiased") return Estimator::RadUnbiased;
  if (name == "rad-nonneg") return Estimator::RadNonNeg;
  throw std::invalid_argument("unknown estimator name: " + std::string(name));
}

std::string_view estimator_name(Estimator e) {
  switch (e) {
    case Estimator::PN: return "pn";
    case Estimator::PuNonconvex: return "pu-nonconvex";
    case Estimator::PuConvex: return "pu-convex";
    case Estimator::PuNonNeg: return "pu-nonneg";
    case Estimator::NuNonconvex: return "nu-nonconvex";
    case Estimator::NuConvex: return "nu-convex";
    case Estimator::RadUnbiased: return "rad-unbiased";
    case Estimator::RadNonNeg: return "rad-nonneg";
  }
  throw std::logic_error("unreachable estimator");
}

double partial_mean(const Eigen::VectorXd& scores, const LossSpec& loss, int y) {
  require_nonempty(scores, "requested");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < scores.size(); ++i) sum += eval_loss(loss, scores[i], y);
  return sum / static_cast<double>(scores.size());
}

double risk_pn(const ScoreBatch& b, const LossSpec& loss, const Priors& pr) {
  require_nonempty(b.p, "P");
  require_nonempty(b.n, "N");
  return pr.pi_p * partial_mean(b.p, loss, +1) + pr.pi_n * partial_mean(b.n, loss, -1);
}

double risk_pu_nonconvex(const ScoreBatch& b, const LossSpec& loss, const Priors& pr) {
  require_symmetric(loss);
  require_nonempty(b.p, "P");
  require_nonempty(b.u, "U");
  return 2.0 * pr.pi_p * partial_mean(b.p, loss, +1) - pr.pi_p + partial_mean(b.u, loss, -1);
}

double risk_pu_convex(const ScoreBatch& b, const LossSpec& loss, const Priors& pr) {
  require_linear_odd(loss);
  require_nonempty(b.p, "P");
  require_nonempty(b.u, "U");
  return -pr.pi_p * b.p.mean() + partial_mean(b.u, loss, -1);
}

double risk_pu_nonneg(const ScoreBatch& b, const LossSpec& loss, const Priors& pr) {
  require_nonempty(b.p, "P");
  require_nonempty(b.u, "U");
  const double clipped = partial_mean(b.u, loss, -1) - pr.pi_p * partial_mean(b.p, loss, -1);
  return pr.pi_p * partial_mean(b.p, loss, +1) + std::max(0.0, clipped);
}

double risk_nu_nonconvex(const ScoreBatch& b, const LossSpec& loss, const Priors& pr) {
  require_symmetric(loss);
  require_nonempty(b.n, "N");
  require_nonempty(b.u, "U");
  return 2.0 * pr.pi_n * partial_mean(b.n, loss, -1) - pr.pi_n + partial_mean(b.u, loss, +1);
}

double risk_nu_convex(const ScoreBatch& b, const LossSpec& loss, const Priors& pr) {
  require_linear_odd(loss);
  require_nonempty(b.n, "N");
  require_nonempty(b.u, "U");
  return pr.pi_n * b.n.mean() + partial_mean(b.u, loss, +1);
}

double risk_rad_unbiased(const ScoreBatch& b, const LossSpec& loss, const RiskConfig& cfg) {
  require_nonempty(b.p, "P");
  require_nonempty(b.n, "N");
  require_nonempty(b.u, "U");
  const auto& pr = cfg.priors;
  return cfg.a * partial_mean(b.u, loss, +1) +
         (1.0 - cfg.a) * pr.pi_p * partial_mean(b.p, loss, +1) +
         pr.pi_n * partial_mean(b.n, loss, -1) - cfg.a * pr.pi_n * partial_mean(b.n, loss, +1);
}

double risk_rad_nonneg(const ScoreBatch& b, const LossSpec& loss, const RiskConfig& cfg) {
  require_nonempty(b.p, "P");
  require_nonempty(b.n, "N");
  require_nonempty(b.u, "U");
  const auto& pr = cfg.priors;
  const double bracket =
      partial_mean(b.u, loss, +1) - pr.pi_n * partial_mean(b.n, loss, +1);
  return pr.pi_n * partial_mean(b.n, loss, -1) +
         (1.0 - cfg.a) * pr.pi_p * partial_mean(b.p, loss, +1) +
         cfg.a * std::max(0.0, bracket);
}

double evaluate_risk(const ScoreBatch& b, const LossSpec& loss, const RiskConfig& cfg) {
  switch (cfg.estimator) {
    case Estimator::PN: return risk_pn(b, loss, cfg.priors);
    case Estimator::PuNonconvex: return risk_pu_nonconvex(b, loss, cfg.priors);
    case Estimator::PuConvex: return risk_pu_convex(b, loss, cfg.priors);
    case Estimator::PuNonNeg: return risk_pu_nonneg(b, loss, cfg.priors);
    case Estimator::NuNonconvex: return risk_nu_nonconvex(b, loss, cfg.priors);
    case Estimator::NuConvex: return risk_nu_convex(b, loss, cfg.priors);
    case Estimator::RadUnbiased: return risk_rad_unbiased(b, loss, cfg);
    case Estimator::RadNonNeg: return risk_rad_nonneg(b, loss, cfg);
  }
  throw std::logic_error("unreachable estimator");
}

double bias_bound(const RiskConfig& cfg, double loss_sup, double rho, long n_n, long n_u) {
  if (!(rho > 0.0)) throw std::invalid_argument("bias_bound: rho must be positive");
  if (!(loss_sup > 0.0)) throw std::invalid_argument("bias_bound: C_ell must be positive");
  if (n_n < 1 || n_u < 1) throw std::invalid_argument("bias_bound: n_n and n_u must be >= 1");
  const double pi_p = cfg.priors.pi_p;
  const double pi_n = cfg.priors.pi_n;
  const double denom = loss_sup * loss_sup *
                       (1.0 / static_cast<double>(n_u) +
                        pi_n * pi_n / static_cast<double>(n_n));
  return cfg.a * pi_n * loss_sup * std::exp(-2.0 * pi_p * pi_p * rho * rho / denom);
}

}  // namespace riskad
