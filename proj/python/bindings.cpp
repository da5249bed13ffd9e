#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "riskad/deep.hpp"
#include "riskad/estimators.hpp"
#include "riskad/experiment.hpp"
#include "riskad/losses.hpp"
#include "riskad/metrics.hpp"
#include "riskad/model_io.hpp"
#include "riskad/regselect.hpp"
#include "riskad/shallow.hpp"

namespace py = pybind11;
using namespace riskad;

namespace {

RiskConfig make_config(double a, double pi_p, const std::string& estimator) {
  return RiskConfig(a, Priors(pi_p), estimator_by_name(estimator));
}

ScoreBatch make_batch(const Eigen::VectorXd& p, const Eigen::VectorXd& n,
                      const Eigen::VectorXd& u) {
  return ScoreBatch{p, n, u};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "risk-estimator based semi-supervised anomaly detection";

  // ---- losses ----
  py::class_<LossSpec>(m, "LossSpec")
      .def_readonly("b1", &LossSpec::b1)
      .def_readonly("b2", &LossSpec::b2)
      .def_readonly("b3", &LossSpec::b3)
      .def_readonly("bounded", &LossSpec::bounded)
      .def_readonly("lipschitz", &LossSpec::lipschitz)
      .def_readonly("symmetric", &LossSpec::symmetric)
      .def_readonly("linear_odd", &LossSpec::linear_odd)
      .def_property_readonly("name", [](const LossSpec& l) { return std::string(l.name); });
  m.def("loss_by_name", &loss_by_name, py::return_value_policy::reference);
  m.def("loss_names", [] {
    std::vector<std::string> names;
    for (const auto& l : all_losses()) names.emplace_back(l.name);
    return names;
  });
  m.def("eval_loss", [](const std::string& name, double t, int y) {
    return eval_loss(loss_by_name(name), t, y);
  });
  m.def("grad_loss", [](const std::string& name, double t, int y) {
    return grad_loss(loss_by_name(name), t, y);
  });
  m.def("check_condition_constants", [](const std::string& name, const std::vector<double>& grid) {
    return check_condition_constants(loss_by_name(name), grid);
  });
  m.def("check_structural", [](const std::string& name, const std::vector<double>& grid) {
    const auto r = check_structural(loss_by_name(name), grid);
    return std::make_pair(r.symmetric_ok, r.linear_odd_ok);
  });
  m.def("condition_grid", &condition_grid, py::arg("lo") = -10.0, py::arg("hi") = 10.0,
        py::arg("step") = 0.01);

  // ---- estimators ----
  m.def("partial_mean", [](const Eigen::VectorXd& scores, const std::string& loss, int y) {
    return partial_mean(scores, loss_by_name(loss), y);
  });
  m.def("risk", [](const std::string& estimator, const Eigen::VectorXd& p,
                   const Eigen::VectorXd& n, const Eigen::VectorXd& u, const std::string& loss,
                   double a, double pi_p) {
    return evaluate_risk(make_batch(p, n, u), loss_by_name(loss), make_config(a, pi_p, estimator));
  }, py::arg("estimator"), py::arg("p"), py::arg("n"), py::arg("u"), py::arg("loss"),
     py::arg("a") = 0.1, py::arg("pi_p") = 0.8);
  m.def("bias_bound", [](double a, double pi_p, double loss_sup, double rho, long n_n, long n_u) {
    return bias_bound(make_config(a, pi_p, "rad-nonneg"), loss_sup, rho, n_n, n_u);
  });

  // ---- regularization selection ----
  m.def("data_norm_constants", [](const Eigen::MatrixXd& negatives) {
    const auto nc = data_norm_constants(negatives);
    return std::make_pair(nc.c, nc.c_inf);
  });
  m.def("lambda_min_l2", [](double a, const std::string& loss, double pi_n, double c) {
    return lambda_min_l2(a, loss_by_name(loss), pi_n, c);
  });
  m.def("lambda_min_l1", [](double a, const std::string& loss, double pi_n, double c_inf) {
    return lambda_min_l1(a, loss_by_name(loss), pi_n, c_inf);
  });

  // ---- data ----
  py::class_<LabeledDataset>(m, "LabeledDataset")
      .def(py::init<>())
      .def_readwrite("X", &LabeledDataset::X)
      .def_readwrite("y", &LabeledDataset::y)
      .def_readwrite("name", &LabeledDataset::name);
  py::class_<SemiSupSplit>(m, "SemiSupSplit")
      .def_readonly("P", &SemiSupSplit::P)
      .def_readonly("N", &SemiSupSplit::N)
      .def_readonly("U", &SemiSupSplit::U)
      .def_readonly("test_X", &SemiSupSplit::test_X)
      .def_readonly("test_y", &SemiSupSplit::test_y)
      .def_readonly("true_pi_n", &SemiSupSplit::true_pi_n)
      .def("oracle_u_labels", &SemiSupSplit::oracle_u_labels,
           py::return_value_policy::reference_internal);
  m.def("load_csv", [](const std::filesystem::path& path, const std::string& encoding) {
    CsvSchema schema;
    schema.encoding = encoding == "pm" ? LabelEncoding::PlusMinus
                      : encoding == "class-ids" ? LabelEncoding::ClassIds
                                                : LabelEncoding::ZeroOne;
    return load_csv(path, schema);
  }, py::arg("path"), py::arg("encoding") = "zero-one");
  m.def("save_csv", [](const LabeledDataset& ds, const std::filesystem::path& path) {
    save_csv(ds, path);
  });
  m.def("synth_gaussian", &synth_gaussian, py::arg("n"), py::arg("d"), py::arg("pi_n"),
        py::arg("mean_sep"), py::arg("seed") = 0);
  m.def("gaussian_bayes_auc", &gaussian_bayes_auc);
  m.def("make_ad_setup", &make_ad_setup, py::arg("dataset"), py::arg("positive_class"),
        py::arg("target_pi_n"), py::arg("seed") = 0);
  m.def("make_trial_split",
        [](const LabeledDataset& ds, int trial, double train_ratio, double labeled_fraction,
           std::uint64_t seed) {
          SplitProtocol protocol;
          protocol.train_ratio = train_ratio;
          protocol.labeled_fraction = labeled_fraction;
          protocol.seed = seed;
          return make_trial_split(ds, protocol, trial);
        },
        py::arg("dataset"), py::arg("trial") = 0, py::arg("train_ratio") = 0.7,
        py::arg("labeled_fraction") = 0.05, py::arg("seed") = 0);

  // ---- metrics ----
  m.def("auc", &auc);
  m.def("aggregate", [](const std::vector<double>& values) {
    const auto agg = aggregate(values);
    return std::make_pair(agg.mean, agg.se);
  });

  // ---- shallow ----
  py::class_<LinearModel>(m, "LinearModel")
      .def_readonly("w", &LinearModel::w)
      .def_readonly("loss_name", &LinearModel::loss_name)
      .def_readonly("a", &LinearModel::a)
      .def_readonly("pi_p_e", &LinearModel::pi_p_e)
      .def_property_readonly("lambda_", [](const LinearModel& m) { return m.reg.lambda; })
      .def("score", [](const LinearModel& m, const Eigen::MatrixXd& X) { return m.score(X); });
  m.def("train_shallow",
        [](const SemiSupSplit& split, const std::string& loss, double a, double pi_p,
           const std::string& reg, const std::string& lambda, const std::string& objective,
           int max_iters, double tol) {
          RegSpec spec;
          spec.kind = reg == "l1" ? RegKind::L1 : RegKind::L2;
          if (lambda == "auto") spec.lambda_auto = true;
          else {
            spec.lambda_auto = false;
            spec.lambda = std::stod(lambda);
          }
          ShallowOptOptions opt;
          opt.max_iters = max_iters;
          opt.tol = tol;
          const ShallowObjective obj = objective == "pu" ? ShallowObjective::Pu
                                       : objective == "pn" ? ShallowObjective::Pn
                                                           : ShallowObjective::Rad;
          const auto result = train_shallow(split, loss_by_name(loss),
                                            make_config(a, pi_p, "rad-unbiased"), spec, opt, obj);
          return result.model;
        },
        py::arg("split"), py::arg("loss") = "modified-huber", py::arg("a") = 0.1,
        py::arg("pi_p") = 0.8, py::arg("reg") = "l2", py::arg("lambda") = "auto",
        py::arg("objective") = "rad", py::arg("max_iters") = 2000, py::arg("tol") = 1e-6);

  // ---- deep ----
  py::class_<MlpModel>(m, "MlpModel")
      .def_readonly("layer_dims", &MlpModel::layer_dims)
      .def("score", [](const MlpModel& m, const Eigen::MatrixXd& X) { return m.forward(X); });
  m.def("train_deep",
        [](const SemiSupSplit& split, const std::string& loss, double a, double pi_p,
           const std::vector<int>& hidden, int epochs, int batch_size, double learning_rate,
           double weight_decay, const std::string& clip, std::uint64_t seed) {
          DeepTrainConfig train;
          train.hidden = hidden;
          train.epochs = epochs;
          train.batch_size = batch_size;
          train.learning_rate = learning_rate;
          train.weight_decay = weight_decay;
          train.seed = seed;
          train.clip_mode =
              clip == "reverse" ? ClipMode::ReverseOnNegative : ClipMode::Subgradient;
          auto result =
              train_deep(split, loss_by_name(loss), make_config(a, pi_p, "rad-nonneg"), train);
          return std::make_pair(std::move(result.model), result.epoch_objectives);
        },
        py::arg("split"), py::arg("loss") = "logistic", py::arg("a") = 0.1,
        py::arg("pi_p") = 0.8, py::arg("hidden") = std::vector<int>{64, 32},
        py::arg("epochs") = 50, py::arg("batch_size") = 128, py::arg("learning_rate") = 1e-3,
        py::arg("weight_decay") = 1e-4, py::arg("clip") = "sub", py::arg("seed") = 0);

  // ---- model io ----
  m.def("save_linear_model",
        [](const LinearModel& model, const std::filesystem::path& p) { save_model(model, p); });
  m.def("save_mlp_model",
        [](const MlpModel& model, const std::filesystem::path& p) { save_model(model, p); });
  m.def("load_linear_model", &load_linear_model);
  m.def("load_mlp_model", &load_mlp_model);
}
