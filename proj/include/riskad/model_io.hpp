#pragma once

#include <filesystem>

#include "riskad/deep.hpp"
#include "riskad/shallow.hpp"

namespace riskad {

void save_model(const LinearModel& model, const std::filesystem::path& path);
void save_model(const MlpModel& model, const std::filesystem::path& path);

LinearModel load_linear_model(const std::filesystem::path& path);
MlpModel load_mlp_model(const std::filesystem::path& path);

// "linear" or "mlp"
std::string model_type(const std::filesystem::path& path);

}  // namespace riskad
