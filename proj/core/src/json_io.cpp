#include "densemimo/json_io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "densemimo/errors.hpp"

namespace densemimo {
namespace {

using nlohmann::json;

json estimate_json(const Estimate& e) {
  return {{"mean", e.mean}, {"std_error", e.std_error}, {"ci99_half_width", e.ci_half_width}};
}

json uatf_json(const UatfStats& s) {
  return {{"scheme", std::string(to_string(s.scheme))},
          {"noise", estimate_json(s.noise)},
          {"intra_cell", estimate_json(s.intra_cell)},
          {"inter_cell", estimate_json(s.inter_cell)},
          {"pilot_contamination", estimate_json(s.pilot_contamination)},
          {"sinr", estimate_json(s.sinr)},
          {"signal", s.signal},
          {"geometries", s.geometries},
          {"samples", s.samples},
          {"discarded_draws", s.discarded_draws}};
}

std::vector<double> number_array(const json& j, const char* key) {
  if (!j.contains(key)) throw ModelError(std::string("model JSON lacks \"") + key + "\"");
  const json& a = j.at(key);
  if (!a.is_array()) throw ModelError(std::string("\"") + key + "\" must be an array");
  std::vector<double> out;
  for (const json& x : a) {
    if (!x.is_number()) throw ModelError(std::string("\"") + key + "\" must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace

PathLossModel path_loss_model_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ModelError(std::string("model JSON does not parse: ") + e.what());
  }
  if (!j.is_object()) throw ModelError("model JSON must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key != "breakpoints_m" && key != "alphas" && key != "upsilon1" && key != "upsilons") {
      throw ModelError("unknown model key \"" + key + "\"");
    }
  }
  const auto breakpoints = number_array(j, "breakpoints_m");
  const auto alphas = number_array(j, "alphas");
  if (j.contains("upsilons")) {
    return PathLossModel::create_with_upsilons(breakpoints, alphas, number_array(j, "upsilons"));
  }
  if (!j.contains("upsilon1") || !j.at("upsilon1").is_number()) throw ModelError("model JSON lacks numeric \"upsilon1\"");
  return PathLossModel::create(breakpoints, alphas, j.at("upsilon1").get<double>());
}

PathLossModel load_path_loss_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open model file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return path_loss_model_from_json(text.str());
}

std::string to_json(const PathLossModel& model) {
  const auto b = model.breakpoints();
  const auto a = model.alphas();
  const auto u = model.upsilons();
  json j{{"breakpoints_m", std::vector<double>(b.begin(), b.end())},
         {"alphas", std::vector<double>(a.begin(), a.end())},
         {"upsilon1", u.front()},
         {"upsilons", std::vector<double>(u.begin(), u.end())}};
  return j.dump();
}

SimConfig sim_config_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config JSON does not parse: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config JSON must be an object");
  SimConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "window_radius_m") {
        c.window_radius_m = value.get<double>();
      } else if (key == "guard_radius_m") {
        c.guard_radius_m = value.get<double>();
      } else if (key == "target_bs_count") {
        c.target_bs_count = value.get<double>();
      } else if (key == "trials") {
        c.trials = value.get<std::uint64_t>();
      } else if (key == "master_seed") {
        c.master_seed = value.get<std::uint64_t>();
      } else if (key == "ue_per_cell") {
        c.ue_per_cell = value.get<int>();
      } else if (key == "pilot_mode") {
        c.pilot_mode = parse_pilot_mode(value.get<std::string>());
      } else if (key == "typical") {
        c.typical = parse_typical_selection(value.get<std::string>());
      } else if (key == "fading_samples") {
        c.fading_samples = value.get<int>();
      } else if (key == "aggregate_colliders") {
        c.aggregate_colliders = value.get<bool>();
      } else if (key == "perfect_csi") {
        c.perfect_csi = value.get<bool>();
      } else if (key == "threads") {
        c.threads = value.get<std::size_t>();
      } else if (key == "max_proposals") {
        c.max_proposals = value.get<std::uint64_t>();
      } else {
        throw ConfigError("unknown config key \"" + key + "\"");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  c.validate();
  return c;
}

std::string to_json(const SimConfig& c) {
  json j{{"window_radius_m", c.window_radius_m},
         {"guard_radius_m", c.guard_radius_m},
         {"target_bs_count", c.target_bs_count},
         {"trials", c.trials},
         {"master_seed", c.master_seed},
         {"ue_per_cell", c.ue_per_cell},
         {"pilot_mode", std::string(to_string(c.pilot_mode))},
         {"typical", std::string(to_string(c.typical))},
         {"fading_samples", c.fading_samples},
         {"aggregate_colliders", c.aggregate_colliders},
         {"perfect_csi", c.perfect_csi},
         {"threads", c.threads},
         {"max_proposals", c.max_proposals}};
  return j.dump();
}

std::string to_json(const TrialStats& s) {
  json j{{"mu1", estimate_json(s.mu1)},
         {"mu2", estimate_json(s.mu2)},
         {"n_effective", s.n_effective},
         {"realizations", s.realizations},
         {"discarded", s.discarded},
         {"count_resamples", s.count_resamples},
         {"ue_resamples", s.ue_resamples}};
  j["nmse"] = s.nmse ? estimate_json(*s.nmse) : json(nullptr);
  json terms = json::array();
  for (const auto& u : s.sinr_terms) terms.push_back(uatf_json(u));
  j["sinr_terms"] = terms;
  return j.dump();
}

std::string to_json(const UatfStats& s) { return uatf_json(s).dump(); }

}  // namespace densemimo
