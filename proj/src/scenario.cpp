// SPDX-License-Identifier: Apache-2.0
#include "shrinkcomb/scenario.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "shrinkcomb/rng.hpp"

namespace shrinkcomb {

double dbm_to_linear(double dbm) {
  if (!std::isfinite(dbm)) {
    throw std::invalid_argument("dbm_to_linear: non-finite input");
  }
  return std::pow(10.0, dbm / 10.0);
}

double path_loss_db(double distance_m) {
  if (!(distance_m > 0.0)) {
    throw std::invalid_argument("path_loss_db: distance must be positive, got " +
                                std::to_string(distance_m));
  }
  return -30.5 - 36.7 * std::log10(distance_m);
}

double distance(const Position& a, const Position& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

double ScenarioConfig::interferer_reference_dbm() const {
  double sum = 0.0;
  for (double p : ue_tx_power_dbm) sum += p;
  return sum / static_cast<double>(ue_tx_power_dbm.size());
}

void ScenarioConfig::validate() const {
  if (num_aps < 1) throw std::invalid_argument("config: num_aps must be >= 1");
  if (antennas_per_ap < 1) {
    throw std::invalid_argument("config: antennas_per_ap must be >= 1");
  }
  if (num_ues < 1) throw std::invalid_argument("config: num_ues must be >= 1");
  if (static_cast<int>(ap_positions.size()) != num_aps) {
    throw std::invalid_argument("config: ap_positions must list num_aps entries");
  }
  if (!ue_positions.empty() &&
      static_cast<int>(ue_positions.size()) != num_ues) {
    throw std::invalid_argument("config: ue_positions must be empty or list num_ues entries");
  }
  if (pilot_len < num_ues) {
    throw std::invalid_argument("config: pilot_len must be >= num_ues for orthogonal pilots");
  }
  if (data_len < 1) throw std::invalid_argument("config: data_len must be >= 1");
  if (ue_tx_power_dbm.empty() ||
      (ue_tx_power_dbm.size() != 1 &&
       static_cast<int>(ue_tx_power_dbm.size()) != num_ues)) {
    throw std::invalid_argument("config: ue_tx_power_dbm must hold one shared or per-UE value");
  }
  for (double p : ue_tx_power_dbm) {
    if (!std::isfinite(p)) throw std::invalid_argument("config: UE power must be finite");
  }
  if (!std::isfinite(noise_power_dbm)) {
    throw std::invalid_argument("config: noise power must be finite");
  }
  for (const auto& intf : interferers) {
    if (!std::isfinite(intf.power_offset_db)) {
      throw std::invalid_argument("config: interferer power offset must be finite");
    }
  }
  if (constellation_order < 2) {
    throw std::invalid_argument("config: constellation order must be >= 2");
  }
  if (placement_region.x_max <= placement_region.x_min ||
      placement_region.y_max <= placement_region.y_min) {
    throw std::invalid_argument("config: placement region is empty");
  }
}

Eigen::VectorXd ue_power_vector(const ScenarioConfig& cfg) {
  Eigen::VectorXd rho(cfg.num_ues);
  for (int k = 0; k < cfg.num_ues; ++k) {
    rho(k) = dbm_to_linear(cfg.ue_power_dbm(k));
  }
  return rho;
}

namespace {

// Uniform draw from the region, rejecting points inside any AP keep-out disc.
Position draw_position(Rng& rng, const ScenarioConfig& cfg) {
  const PlacementRegion& r = cfg.placement_region;
  for (;;) {
    Position p{r.x_min + (r.x_max - r.x_min) * rng.uniform01(),
               r.y_min + (r.y_max - r.y_min) * rng.uniform01()};
    bool ok = true;
    for (const auto& ap : cfg.ap_positions) {
      if (distance(p, ap) < r.min_ap_distance_m) {
        ok = false;
        break;
      }
    }
    if (ok) return p;
  }
}

// Aggregated channel column: per-AP blocks of M i.i.d. CN(0, zeta_b) entries.
Eigen::VectorXcd draw_channel_column(Rng& rng, const ScenarioConfig& cfg,
                                     const Position& pos,
                                     Eigen::VectorXd* gains_db_out) {
  const int m = cfg.antennas_per_ap;
  Eigen::VectorXcd h(cfg.total_antennas());
  for (int b = 0; b < cfg.num_aps; ++b) {
    const double zeta_db = path_loss_db(distance(cfg.ap_positions[static_cast<size_t>(b)], pos));
    if (gains_db_out) (*gains_db_out)(b) = zeta_db;
    const double amp = std::sqrt(dbm_to_linear(zeta_db));
    for (int a = 0; a < m; ++a) {
      h(b * m + a) = amp * rng.complex_normal();
    }
  }
  return h;
}

}  // namespace

ChannelRealization draw_channels(const ScenarioConfig& cfg,
                                 std::uint64_t trial_seed) {
  cfg.validate();
  const int bm = cfg.total_antennas();
  const int num_intf = static_cast<int>(cfg.interferers.size());

  ChannelRealization chan;
  chan.h.resize(bm, cfg.num_ues);
  chan.interferer_h.resize(bm, num_intf);
  chan.link_gain_db.resize(cfg.num_aps, cfg.num_ues);
  chan.ue_positions.resize(static_cast<size_t>(cfg.num_ues));
  chan.interferer_positions.resize(static_cast<size_t>(num_intf));
  chan.interferer_power_mw.resize(static_cast<size_t>(num_intf));

  {
    Rng pos_rng(trial_seed, StreamPurpose::ue_positions);
    for (int k = 0; k < cfg.num_ues; ++k) {
      chan.ue_positions[static_cast<size_t>(k)] =
          cfg.ue_positions.empty() ? draw_position(pos_rng, cfg)
                                   : cfg.ue_positions[static_cast<size_t>(k)];
    }
  }
  {
    Rng pos_rng(trial_seed, StreamPurpose::interferer_positions);
    for (int j = 0; j < num_intf; ++j) {
      const auto& spec = cfg.interferers[static_cast<size_t>(j)];
      chan.interferer_positions[static_cast<size_t>(j)] =
          spec.position ? *spec.position : draw_position(pos_rng, cfg);
      chan.interferer_power_mw[static_cast<size_t>(j)] =
          dbm_to_linear(cfg.interferer_reference_dbm() + spec.power_offset_db);
    }
  }

  {
    Rng ch_rng(trial_seed, StreamPurpose::ue_channels);
    Eigen::VectorXd gains(cfg.num_aps);
    for (int k = 0; k < cfg.num_ues; ++k) {
      chan.h.col(k) = draw_channel_column(ch_rng, cfg, chan.ue_positions[static_cast<size_t>(k)], &gains);
      chan.link_gain_db.col(k) = gains;
    }
  }
  {
    Rng ch_rng(trial_seed, StreamPurpose::interferer_channels);
    for (int j = 0; j < num_intf; ++j) {
      chan.interferer_h.col(j) = draw_channel_column(
          ch_rng, cfg, chan.interferer_positions[static_cast<size_t>(j)], nullptr);
    }
  }

  // Lower triangle plus mirrored conjugates keeps psi exactly Hermitian.
  const double sigma2 = dbm_to_linear(cfg.noise_power_dbm);
  chan.psi = Eigen::MatrixXcd::Zero(bm, bm);
  for (int j = 0; j < num_intf; ++j) {
    const Eigen::VectorXcd g = chan.interferer_h.col(j);
    const double rho_j = chan.interferer_power_mw[static_cast<size_t>(j)];
    for (int r = 0; r < bm; ++r) {
      for (int c = 0; c <= r; ++c) {
        chan.psi(r, c) += rho_j * (g(r) * std::conj(g(c)));
      }
    }
  }
  for (int r = 0; r < bm; ++r) {
    chan.psi(r, r) = std::complex<double>(chan.psi(r, r).real() + sigma2, 0.0);
    for (int c = 0; c < r; ++c) {
      chan.psi(c, r) = std::conj(chan.psi(r, c));
    }
  }
  return chan;
}

}  // namespace shrinkcomb
