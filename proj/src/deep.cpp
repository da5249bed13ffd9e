#include "riskad/deep.hpp"

#include <cmath>
#include <stdexcept>

#include "riskad/rng.hpp"

namespace riskad {

namespace {

void require_batch(const BatchSplit& batch) {
  if (batch.P.rows() == 0 || batch.N.rows() == 0 || batch.U.rows() == 0) {
    throw std::invalid_argument("batch-composition error: every batch needs P, N and U samples");
  }
}

void check_shapes(const MlpModel& m) {
  if (m.layer_dims.size() < 2 || m.layer_dims.back() != 1) {
    throw std::invalid_argument("mlp needs at least [d, 1] dims with scalar output");
  }
  if (m.weights.size() != m.layer_dims.size() - 1 || m.biases.size() != m.weights.size()) {
    throw std::invalid_argument("mlp weight/bias count does not match layer_dims");
  }
  for (std::size_t l = 0; l < m.weights.size(); ++l) {
    if (m.weights[l].rows() != m.layer_dims[l + 1] || m.weights[l].cols() != m.layer_dims[l] ||
        m.biases[l].size() != m.layer_dims[l + 1]) {
      throw std::invalid_argument("mlp layer " + std::to_string(l) + " shape mismatch");
    }
  }
}

Eigen::MatrixXd activate(const Eigen::MatrixXd& z, Activation act) {
  if (act == Activation::ReLU) return z.cwiseMax(0.0);
  return z.array().tanh().matrix();
}

// Derivative expressed through the activation output.
Eigen::MatrixXd activate_grad(const Eigen::MatrixXd& h, Activation act) {
  if (act == Activation::ReLU) {
    return h.unaryExpr([](double v) { return v > 0.0 ? 1.0 : 0.0; });
  }
  return (1.0 - h.array().square()).matrix();
}

// Activations per layer, inputs first, scores last (as 1 x B row).
std::vector<Eigen::MatrixXd> forward_pass(const MlpModel& m, const Eigen::MatrixXd& X) {
  if (X.cols() != m.layer_dims.front()) {
    throw std::invalid_argument("forward: expected " + std::to_string(m.layer_dims.front()) +
                                " features, got " + std::to_string(X.cols()));
  }
  std::vector<Eigen::MatrixXd> acts;
  acts.reserve(m.weights.size() + 1);
  acts.push_back(X.transpose());
  for (std::size_t l = 0; l < m.weights.size(); ++l) {
    Eigen::MatrixXd z = (m.weights[l] * acts.back()).colwise() + m.biases[l];
    acts.push_back(l + 1 < m.weights.size() ? activate(z, m.activation) : std::move(z));
  }
  return acts;
}

double weight_penalty(const MlpModel& m) {
  double s = 0.0;
  for (const auto& W : m.weights) s += W.squaredNorm();
  return s;
}

double loss_mean(const LossSpec& loss, const Eigen::VectorXd& scores, int y) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < scores.size(); ++i) s += eval_loss(loss, scores[i], y);
  return s / static_cast<double>(scores.size());
}

struct DeepTerms {
  Eigen::VectorXd sp, sn, su;
  double rn_minus, rp_plus, ru_plus, rn_plus, bracket;
};

DeepTerms deep_terms(const MlpModel& m, const BatchSplit& batch, const LossSpec& loss) {
  DeepTerms t;
  t.sp = m.forward(batch.P);
  t.sn = m.forward(batch.N);
  t.su = m.forward(batch.U);
  t.rp_plus = loss_mean(loss, t.sp, +1);
  t.rn_minus = loss_mean(loss, t.sn, -1);
  t.rn_plus = loss_mean(loss, t.sn, +1);
  t.ru_plus = loss_mean(loss, t.su, +1);
  return t;
}

}  // namespace

Eigen::VectorXd MlpModel::forward(const Eigen::MatrixXd& X) const {
  check_shapes(*this);
  return forward_pass(*this, X).back().row(0).transpose();
}

double MlpModel::forward(const Eigen::VectorXd& x) const {
  return forward(Eigen::MatrixXd(x.transpose()))[0];
}

MlpModel make_mlp(const std::vector<int>& layer_dims, Activation act, std::uint64_t seed) {
  MlpModel m;
  m.layer_dims = layer_dims;
  m.activation = act;
  if (layer_dims.size() < 2 || layer_dims.back() != 1) {
    throw std::invalid_argument("mlp needs at least [d, 1] dims with scalar output");
  }
  for (int d : layer_dims) {
    if (d < 1) throw std::invalid_argument("layer dims must be positive");
  }
  Rng rng(derive_seed(seed, 0xD33C0DEULL));
  for (std::size_t l = 0; l + 1 < layer_dims.size(); ++l) {
    const int fan_in = layer_dims[l], fan_out = layer_dims[l + 1];
    const double lim = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    Eigen::MatrixXd W(fan_out, fan_in);
    for (Eigen::Index i = 0; i < W.rows(); ++i)
      for (Eigen::Index j = 0; j < W.cols(); ++j) W(i, j) = uniform(rng, -lim, lim);
    m.weights.push_back(std::move(W));
    m.biases.push_back(Eigen::VectorXd::Zero(fan_out));
  }
  return m;
}

double objective_deep(const MlpModel& model, const BatchSplit& batch, const LossSpec& loss,
                      const RiskConfig& cfg, double lambda) {
  require_batch(batch);
  const DeepTerms t = deep_terms(model, batch, loss);
  const double bracket = t.ru_plus - cfg.priors.pi_n * t.rn_plus;
  return cfg.priors.pi_n * t.rn_minus + (1.0 - cfg.a) * cfg.priors.pi_p * t.rp_plus +
         cfg.a * std::max(0.0, bracket) + lambda * weight_penalty(model);
}

MlpGradients backward(const MlpModel& model, const BatchSplit& batch, const LossSpec& loss,
                      const RiskConfig& cfg, double lambda, ClipMode clip_mode) {
  require_batch(batch);
  check_shapes(model);

  const auto np = batch.P.rows(), nn = batch.N.rows(), nu = batch.U.rows();
  Eigen::MatrixXd X(np + nn + nu, batch.P.cols());
  X.topRows(np) = batch.P;
  X.middleRows(np, nn) = batch.N;
  X.bottomRows(nu) = batch.U;

  const auto acts = forward_pass(model, X);
  const Eigen::VectorXd s = acts.back().row(0).transpose();

  double rn_plus = 0.0, ru_plus = 0.0;
  for (Eigen::Index i = 0; i < nn; ++i) rn_plus += eval_loss(loss, s[np + i], +1);
  rn_plus /= static_cast<double>(nn);
  for (Eigen::Index i = 0; i < nu; ++i) ru_plus += eval_loss(loss, s[np + nn + i], +1);
  ru_plus /= static_cast<double>(nu);
  const double bracket = ru_plus - cfg.priors.pi_n * rn_plus;

  // d objective / d score per sample
  Eigen::VectorXd ds = Eigen::VectorXd::Zero(s.size());
  const double pi_p = cfg.priors.pi_p, pi_n = cfg.priors.pi_n;
  if (bracket >= 0.0 || clip_mode == ClipMode::Subgradient) {
    for (Eigen::Index i = 0; i < np; ++i) {
      ds[i] = (1.0 - cfg.a) * pi_p * grad_loss(loss, s[i], +1) / static_cast<double>(np);
    }
    for (Eigen::Index i = 0; i < nn; ++i) {
      ds[np + i] = pi_n * grad_loss(loss, s[np + i], -1) / static_cast<double>(nn);
    }
    if (bracket >= 0.0) {
      for (Eigen::Index i = 0; i < nn; ++i) {
        ds[np + i] -= cfg.a * pi_n * grad_loss(loss, s[np + i], +1) / static_cast<double>(nn);
      }
      for (Eigen::Index i = 0; i < nu; ++i) {
        ds[np + nn + i] = cfg.a * grad_loss(loss, s[np + nn + i], +1) / static_cast<double>(nu);
      }
    }
  } else {
    // follow -(Ru+ - pi_n Rn+) to walk the bracket back toward zero
    for (Eigen::Index i = 0; i < nn; ++i) {
      ds[np + i] = pi_n * grad_loss(loss, s[np + i], +1) / static_cast<double>(nn);
    }
    for (Eigen::Index i = 0; i < nu; ++i) {
      ds[np + nn + i] = -grad_loss(loss, s[np + nn + i], +1) / static_cast<double>(nu);
    }
  }

  MlpGradients g;
  g.weights.resize(model.weights.size());
  g.biases.resize(model.biases.size());
  Eigen::MatrixXd delta = ds.transpose();  // 1 x B
  for (std::size_t l = model.weights.size(); l-- > 0;) {
    g.weights[l] = delta * acts[l].transpose() + 2.0 * lambda * model.weights[l];
    g.biases[l] = delta.rowwise().sum();
    if (l > 0) {
      delta = (model.weights[l].transpose() * delta).cwiseProduct(
          activate_grad(acts[l], model.activation));
    }
  }
  return g;
}

DeepTrainResult train_deep(const SemiSupSplit& split, const LossSpec& loss,
                           const RiskConfig& cfg, const DeepTrainConfig& train) {
  if (split.P.rows() == 0 || split.N.rows() == 0 || split.U.rows() == 0) {
    throw std::invalid_argument("train_deep: split must contain P, N and U samples");
  }
  if (train.batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (!(train.beta1 > 0.0 && train.beta1 < 1.0 && train.beta2 > 0.0 && train.beta2 < 1.0)) {
    throw std::invalid_argument("moment decays must lie in (0,1)");
  }

  std::vector<int> dims;
  dims.push_back(static_cast<int>(split.P.cols()));
  dims.insert(dims.end(), train.hidden.begin(), train.hidden.end());
  dims.push_back(1);

  DeepTrainResult result;
  result.model = make_mlp(dims, train.activation, train.seed);
  MlpModel& model = result.model;

  const auto np = static_cast<std::size_t>(split.P.rows());
  const auto nn = static_cast<std::size_t>(split.N.rows());
  const auto nu = static_cast<std::size_t>(split.U.rows());
  const double n = static_cast<double>(np + nn + nu);
  const auto num_batches =
      static_cast<std::size_t>(std::ceil(n / static_cast<double>(train.batch_size)));
  const auto per_batch = [&](std::size_t ns) {
    return static_cast<std::size_t>(
        std::ceil(static_cast<double>(train.batch_size) * static_cast<double>(ns) / n));
  };
  const std::size_t bp = per_batch(np), bn = per_batch(nn), bu = per_batch(nu);

  Rng rng(derive_seed(train.seed, 0xBA7C4E5ULL));

  // cycling shuffled index streams, one per source
  struct Stream {
    const Eigen::MatrixXd* X;
    std::vector<std::size_t> order;
    std::size_t pos = 0;
    Eigen::MatrixXd draw(std::size_t k, Rng& g) {
      Eigen::MatrixXd out(static_cast<Eigen::Index>(k), X->cols());
      for (std::size_t i = 0; i < k; ++i) {
        if (pos == order.size()) {
          shuffle_indices(order, g);
          pos = 0;
        }
        out.row(static_cast<Eigen::Index>(i)) = X->row(static_cast<Eigen::Index>(order[pos++]));
      }
      return out;
    }
  };
  auto make_stream = [](const Eigen::MatrixXd& X) {
    Stream s;
    s.X = &X;
    s.order.resize(static_cast<std::size_t>(X.rows()));
    for (std::size_t i = 0; i < s.order.size(); ++i) s.order[i] = i;
    s.pos = s.order.size();  // forces a shuffle before the first draw
    return s;
  };
  Stream sp = make_stream(split.P), sn = make_stream(split.N), su = make_stream(split.U);

  MlpGradients m1, m2;
  for (const auto& W : model.weights) {
    m1.weights.push_back(Eigen::MatrixXd::Zero(W.rows(), W.cols()));
    m2.weights.push_back(Eigen::MatrixXd::Zero(W.rows(), W.cols()));
  }
  for (const auto& b : model.biases) {
    m1.biases.push_back(Eigen::VectorXd::Zero(b.size()));
    m2.biases.push_back(Eigen::VectorXd::Zero(b.size()));
  }

  const BatchSplit full{split.P, split.N, split.U};
  long step = 0;
  for (int epoch = 0; epoch < train.epochs; ++epoch) {
    for (std::size_t batch = 0; batch < num_batches; ++batch) {
      BatchSplit mb{sp.draw(bp, rng), sn.draw(bn, rng), su.draw(bu, rng)};
      const MlpGradients g =
          backward(model, mb, loss, cfg, train.weight_decay, train.clip_mode);
      ++step;
      const double c1 = 1.0 - std::pow(train.beta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(train.beta2, static_cast<double>(step));
      for (std::size_t l = 0; l < model.weights.size(); ++l) {
        m1.weights[l] = train.beta1 * m1.weights[l] + (1.0 - train.beta1) * g.weights[l];
        m2.weights[l] =
            train.beta2 * m2.weights[l] + (1.0 - train.beta2) * g.weights[l].cwiseAbs2();
        model.weights[l].array() -=
            train.learning_rate * (m1.weights[l].array() / c1) /
            ((m2.weights[l].array() / c2).sqrt() + train.epsilon_stability);
        m1.biases[l] = train.beta1 * m1.biases[l] + (1.0 - train.beta1) * g.biases[l];
        m2.biases[l] = train.beta2 * m2.biases[l] + (1.0 - train.beta2) * g.biases[l].cwiseAbs2();
        model.biases[l].array() -=
            train.learning_rate * (m1.biases[l].array() / c1) /
            ((m2.biases[l].array() / c2).sqrt() + train.epsilon_stability);
      }
    }
    const double obj = objective_deep(model, full, loss, cfg, train.weight_decay);
    if (!std::isfinite(obj)) {
      throw std::runtime_error("deep training diverged at epoch " + std::to_string(epoch));
    }
    result.epoch_objectives.push_back(obj);
  }
  return result;
}

}  // namespace riskad
