#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "densemimo/pathloss.hpp"
#include "densemimo/simulator.hpp"

namespace densemimo {

/// Parses {"breakpoints_m": [...], "alphas": [...], "upsilon1": x} with an optional
/// "upsilons" array that must satisfy continuity. Throws ModelError on malformed input or
/// a violated invariant.
[[nodiscard]] PathLossModel path_loss_model_from_json(std::string_view text);
[[nodiscard]] PathLossModel load_path_loss_model(const std::filesystem::path& path);
[[nodiscard]] std::string to_json(const PathLossModel& model);

/// Missing keys keep their defaults. Throws ConfigError on unknown keys or bad values.
[[nodiscard]] SimConfig sim_config_from_json(std::string_view text);
[[nodiscard]] std::string to_json(const SimConfig& config);

[[nodiscard]] std::string to_json(const TrialStats& stats);
[[nodiscard]] std::string to_json(const UatfStats& stats);

}  // namespace densemimo
