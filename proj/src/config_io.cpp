// SPDX-License-Identifier: Apache-2.0
#include "shrinkcomb/config_io.hpp"

#include <json.hpp>
#include <stdexcept>

#include "shrinkcomb/csv.hpp"

namespace shrinkcomb {

namespace {

using nlohmann::json;

Position parse_position(const json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw std::invalid_argument("config: position must be a [x, y] pair");
  }
  return Position{j[0].get<double>(), j[1].get<double>()};
}

void parse_scenario(const json& j, ScenarioConfig& cfg) {
  if (j.contains("num_aps")) cfg.num_aps = j["num_aps"].get<int>();
  if (j.contains("antennas_per_ap")) cfg.antennas_per_ap = j["antennas_per_ap"].get<int>();
  if (j.contains("num_ues")) cfg.num_ues = j["num_ues"].get<int>();
  if (j.contains("ap_positions")) {
    cfg.ap_positions.clear();
    for (const auto& p : j["ap_positions"]) cfg.ap_positions.push_back(parse_position(p));
  }
  if (j.contains("ue_placement")) {
    const json& up = j["ue_placement"];
    if (up.is_array()) {
      cfg.ue_positions.clear();
      for (const auto& p : up) cfg.ue_positions.push_back(parse_position(p));
    } else if (up.is_object() && up.contains("positions")) {
      cfg.ue_positions.clear();
      for (const auto& p : up["positions"]) cfg.ue_positions.push_back(parse_position(p));
    } else if (up.is_object() && up.contains("region")) {
      const json& r = up["region"];
      if (r.contains("x_range")) {
        cfg.placement_region.x_min = r["x_range"][0].get<double>();
        cfg.placement_region.x_max = r["x_range"][1].get<double>();
      }
      if (r.contains("y_range")) {
        cfg.placement_region.y_min = r["y_range"][0].get<double>();
        cfg.placement_region.y_max = r["y_range"][1].get<double>();
      }
      if (r.contains("min_ap_distance_m")) {
        cfg.placement_region.min_ap_distance_m = r["min_ap_distance_m"].get<double>();
      }
      cfg.ue_positions.clear();
    } else {
      throw std::invalid_argument("config: ue_placement must be a coordinate list or {region: ...}");
    }
  }
  if (j.contains("ue_tx_power_dbm")) {
    const json& p = j["ue_tx_power_dbm"];
    cfg.ue_tx_power_dbm.clear();
    if (p.is_array()) {
      for (const auto& v : p) cfg.ue_tx_power_dbm.push_back(v.get<double>());
    } else {
      cfg.ue_tx_power_dbm.push_back(p.get<double>());
    }
  }
  if (j.contains("noise_power_dbm")) cfg.noise_power_dbm = j["noise_power_dbm"].get<double>();
  if (j.contains("pilot_len")) cfg.pilot_len = j["pilot_len"].get<int>();
  if (j.contains("data_len")) cfg.data_len = j["data_len"].get<int>();
  if (j.contains("interferers")) {
    cfg.interferers.clear();
    for (const auto& ij : j["interferers"]) {
      InterfererSpec spec;
      if (ij.contains("position") && !ij["position"].is_string()) {
        spec.position = parse_position(ij["position"]);
      }
      if (ij.contains("power_offset_db")) {
        spec.power_offset_db = ij["power_offset_db"].get<double>();
      }
      cfg.interferers.push_back(spec);
    }
  }
  if (j.contains("interferer_gaussian")) {
    cfg.interferer_gaussian = j["interferer_gaussian"].get<bool>();
  }
  if (j.contains("constellation_order")) {
    cfg.constellation_order = j["constellation_order"].get<int>();
  }
  if (j.contains("master_seed")) cfg.master_seed = j["master_seed"].get<std::uint64_t>();
}

}  // namespace

RunConfig load_run_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  RunConfig run;
  if (j.contains("scenario")) parse_scenario(j["scenario"], run.scenario);
  if (j.contains("sweep")) {
    const json& s = j["sweep"];
    run.sweep.kind = sweep_kind_from_name(s.at("kind").get<std::string>());
    run.sweep.values.clear();
    for (const auto& v : s.at("values")) run.sweep.values.push_back(v.get<double>());
  }
  if (j.contains("trials")) run.trials = j["trials"].get<int>();
  if (j.contains("methods")) {
    run.methods.clear();
    for (const auto& m : j["methods"]) {
      run.methods.push_back(method_from_name(m.get<std::string>()));
    }
  }
  if (j.contains("fit")) {
    const json& f = j["fit"];
    if (f.contains("max_iters")) run.fit.max_iters = f["max_iters"].get<int>();
    if (f.contains("tol_alpha")) run.fit.tol_alpha = f["tol_alpha"].get<double>();
    if (f.contains("step_scale")) run.fit.step_scale = f["step_scale"].get<double>();
    if (f.contains("max_halvings")) run.fit.max_halvings = f["max_halvings"].get<int>();
    if (f.contains("gradient_subset")) run.fit.gradient_subset = f["gradient_subset"].get<int>();
  }
  if (j.contains("genie")) {
    const json& g = j["genie"];
    if (g.contains("grid_step")) run.genie.grid_step = g["grid_step"].get<double>();
    if (g.contains("objective")) {
      const std::string obj = g["objective"].get<std::string>();
      if (obj == "mse") {
        run.genie.objective = GenieObjective::mse;
      } else if (obj == "ser") {
        run.genie.objective = GenieObjective::ser;
      } else {
        throw std::invalid_argument("config: genie objective must be mse or ser");
      }
    }
  }
  if (j.contains("perfect_csi_combiner")) {
    const std::string kind = j["perfect_csi_combiner"].get<std::string>();
    if (kind == "mmse") {
      run.csi_kind = CsiCombinerKind::mmse;
    } else if (kind == "rzf") {
      run.csi_kind = CsiCombinerKind::rzf;
    } else {
      throw std::invalid_argument("config: perfect_csi_combiner must be mmse or rzf");
    }
  }
  if (j.contains("max_resample_attempts")) {
    run.max_resample_attempts = j["max_resample_attempts"].get<int>();
  }
  run.scenario.validate();
  return run;
}

RunConfig load_run_config_file(const std::string& path) {
  return load_run_config(read_file(path));
}

}  // namespace shrinkcomb
