#include "riskad/model_io.hpp"

#include <fstream>
#include <json.hpp>

namespace riskad {

namespace {

using nlohmann::json;

json to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Eigen::VectorXd vector_from(const json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

json scale_to_json(const FeatureScale& s) {
  const char* mode = s.mode == ScaleMode::UnitMaxL2    ? "unit_max_l2"
                     : s.mode == ScaleMode::UnitMaxLinf ? "unit_max_linf"
                                                        : "none";
  return {{"mode", mode}, {"divisor", s.divisor}, {"degenerate", s.degenerate}};
}

FeatureScale scale_from_json(const json& j) {
  FeatureScale s;
  const auto mode = j.at("mode").get<std::string>();
  s.mode = mode == "unit_max_l2"    ? ScaleMode::UnitMaxL2
           : mode == "unit_max_linf" ? ScaleMode::UnitMaxLinf
                                     : ScaleMode::None;
  s.divisor = j.at("divisor").get<double>();
  s.degenerate = j.at("degenerate").get<bool>();
  return s;
}

json read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return json::parse(in);
}

void write_file(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace

void save_model(const LinearModel& model, const std::filesystem::path& path) {
  json j{{"type", "linear"},
         {"weights", to_json(model.w)},
         {"scale", scale_to_json(model.scale)},
         {"loss", model.loss_name},
         {"a", model.a},
         {"pi_p_e", model.pi_p_e},
         {"reg", {{"kind", model.reg.kind == RegKind::L2 ? "l2" : "l1"},
                  {"lambda", model.reg.lambda},
                  {"norm_bound", model.reg.norm_bound}}}};
  write_file(j, path);
}

void save_model(const MlpModel& model, const std::filesystem::path& path) {
  json layers = json::array();
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < model.weights[l].rows(); ++i) {
      rows.push_back(to_json(model.weights[l].row(i).transpose()));
    }
    layers.push_back({{"weights", rows}, {"bias", to_json(model.biases[l])}});
  }
  json j{{"type", "mlp"},
         {"layer_dims", model.layer_dims},
         {"activation", model.activation == Activation::ReLU ? "relu" : "tanh"},
         {"layers", layers}};
  write_file(j, path);
}

LinearModel load_linear_model(const std::filesystem::path& path) {
  const json j = read_file(path);
  if (j.at("type") != "linear") throw std::runtime_error(path.string() + ": not a linear model");
  LinearModel m;
  m.w = vector_from(j.at("weights"));
  m.scale = scale_from_json(j.at("scale"));
  m.loss_name = j.at("loss").get<std::string>();
  m.a = j.at("a").get<double>();
  m.pi_p_e = j.at("pi_p_e").get<double>();
  m.reg.kind = j.at("reg").at("kind") == "l2" ? RegKind::L2 : RegKind::L1;
  m.reg.lambda = j.at("reg").at("lambda").get<double>();
  m.reg.norm_bound = j.at("reg").at("norm_bound").get<double>();
  return m;
}

MlpModel load_mlp_model(const std::filesystem::path& path) {
  const json j = read_file(path);
  if (j.at("type") != "mlp") throw std::runtime_error(path.string() + ": not an mlp model");
  MlpModel m;
  m.layer_dims = j.at("layer_dims").get<std::vector<int>>();
  m.activation = j.at("activation") == "relu" ? Activation::ReLU : Activation::Tanh;
  for (const auto& layer : j.at("layers")) {
    const auto& rows = layer.at("weights");
    Eigen::MatrixXd W(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      W.row(static_cast<Eigen::Index>(i)) = vector_from(rows[i]).transpose();
    }
    m.weights.push_back(std::move(W));
    m.biases.push_back(vector_from(layer.at("bias")));
  }
  return m;
}

std::string model_type(const std::filesystem::path& path) {
  return read_file(path).at("type").get<std::string>();
}

}  // namespace riskad
