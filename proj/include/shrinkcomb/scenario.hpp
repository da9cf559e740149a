// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

namespace shrinkcomb {

struct Position {
  double x = 0.0;
  double y = 0.0;
};

// Rectangular drop region with a keep-out radius around every AP.
struct PlacementRegion {
  double x_min = 0.0;
  double x_max = 100.0;
  double y_min = -50.0;
  double y_max = 50.0;
  double min_ap_distance_m = 10.0;
};

struct InterfererSpec {
  std::optional<Position> position;  // fixed spot; empty = sampled per trial
  double power_offset_db = -5.0;     // relative to the UE transmit power
};

struct ScenarioConfig {
  int num_aps = 2;
  int antennas_per_ap = 4;
  int num_ues = 6;
  std::vector<Position> ap_positions = {{0.0, 0.0}, {100.0, 0.0}};
  std::vector<Position> ue_positions;  // empty = sampled per trial
  PlacementRegion placement_region;
  std::vector<double> ue_tx_power_dbm = {18.0};  // size 1 = shared, else per UE
  double noise_power_dbm = -95.0;
  int pilot_len = 8;
  int data_len = 1000;
  std::vector<InterfererSpec> interferers;
  bool interferer_gaussian = false;  // Gaussian symbols instead of constellation
  int constellation_order = 4;
  std::uint64_t master_seed = 1;

  int total_antennas() const { return num_aps * antennas_per_ap; }
  // Per-UE transmit power in dBm (expands a shared value).
  double ue_power_dbm(int k) const {
    return ue_tx_power_dbm.size() == 1 ? ue_tx_power_dbm[0]
                                       : ue_tx_power_dbm[static_cast<size_t>(k)];
  }
  // Reference power for interferer offsets: the shared UE power, or the mean
  // of the per-UE dBm values.
  double interferer_reference_dbm() const;
  void validate() const;  // throws std::invalid_argument on violations
};

struct ChannelRealization {
  Eigen::MatrixXcd h;              // BM x K, column k is the aggregated h_k
  Eigen::MatrixXcd interferer_h;   // BM x J
  Eigen::MatrixXd link_gain_db;    // B x K path gains
  Eigen::MatrixXcd psi;            // BM x BM impairment covariance
  std::vector<Position> ue_positions;
  std::vector<Position> interferer_positions;
  std::vector<double> interferer_power_mw;
};

double dbm_to_linear(double dbm);                 // dBm -> mW
double path_loss_db(double distance_m);           // -30.5 - 36.7 log10(r)
double distance(const Position& a, const Position& b);

// Linear per-UE transmit powers as a diagonal-able vector (mW).
Eigen::VectorXd ue_power_vector(const ScenarioConfig& cfg);

// Draws a full channel realization, including per-trial UE/interferer drops
// when the config leaves positions unspecified. Deterministic in
// (cfg, trial_seed).
ChannelRealization draw_channels(const ScenarioConfig& cfg,
                                 std::uint64_t trial_seed);

}  // namespace shrinkcomb
