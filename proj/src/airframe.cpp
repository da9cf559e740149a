// SPDX-License-Identifier: Apache-2.0
#include "shrinkcomb/airframe.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include "shrinkcomb/rng.hpp"

namespace shrinkcomb {

namespace {

int isqrt_exact(int n) {
  int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  return r * r == n ? r : 0;
}

int gray_code(int i) { return i ^ (i >> 1); }

}  // namespace

Constellation make_constellation(int order) {
  const int side = isqrt_exact(order);
  if (side < 2 || (side & (side - 1)) != 0) {
    throw std::invalid_argument("make_constellation: order must be a square power of two, got " +
                                std::to_string(order));
  }
  // Odd-integer grid {±1, ±3, ...} per axis, scaled to unit mean energy:
  // E[a^2 + b^2] over the grid is 2 (side^2 - 1) / 3.
  const double scale = std::sqrt(3.0 / (2.0 * (static_cast<double>(order) - 1.0)));
  const int bits_per_axis = [&] {
    int b = 0;
    for (int v = side; v > 1; v >>= 1) ++b;
    return b;
  }();

  Constellation c;
  c.order = order;
  c.points.reserve(static_cast<size_t>(order));
  c.gray_labels.reserve(static_cast<size_t>(order));
  for (int i = 0; i < side; ++i) {
    for (int q = 0; q < side; ++q) {
      const double re = scale * static_cast<double>(2 * i - side + 1);
      const double im = scale * static_cast<double>(2 * q - side + 1);
      c.points.emplace_back(re, im);
      c.gray_labels.push_back((gray_code(i) << bits_per_axis) | gray_code(q));
    }
  }
  return c;
}

PilotMatrix make_pilots(int pilot_len, int num_ues) {
  if (pilot_len < num_ues) {
    throw std::invalid_argument("make_pilots: pilot_len must be >= num_ues");
  }
  if (num_ues < 1) throw std::invalid_argument("make_pilots: num_ues must be >= 1");
  // First K columns of the tau_p-point DFT matrix: unit-modulus entries give
  // column norm sqrt(tau_p), distinct tones give mutual orthogonality.
  PilotMatrix pm;
  pm.p.resize(pilot_len, num_ues);
  constexpr double two_pi = 6.283185307179586476925286766559;
  const double step = -two_pi / static_cast<double>(pilot_len);
  for (int k = 0; k < num_ues; ++k) {
    for (int t = 0; t < pilot_len; ++t) {
      pm.p(t, k) = std::polar(1.0, step * static_cast<double>(t) * static_cast<double>(k));
    }
  }
  return pm;
}

Eigen::MatrixXcd draw_data_symbols(const ScenarioConfig& cfg,
                                   std::uint64_t trial_seed) {
  cfg.validate();
  const Constellation c = make_constellation(cfg.constellation_order);
  Rng rng(trial_seed, StreamPurpose::data_symbols);
  Eigen::MatrixXcd d(cfg.data_len, cfg.num_ues);
  for (int k = 0; k < cfg.num_ues; ++k) {
    for (int t = 0; t < cfg.data_len; ++t) {
      d(t, k) = c.points[rng.uniform_index(static_cast<std::uint64_t>(c.order))];
    }
  }
  return d;
}

SignalBlock synthesize(Phase phase, const ScenarioConfig& cfg,
                       const ChannelRealization& chan,
                       const Eigen::MatrixXcd& symbols,
                       std::uint64_t trial_seed) {
  cfg.validate();
  const int expected_len = phase == Phase::pilot ? cfg.pilot_len : cfg.data_len;
  if (symbols.rows() != expected_len || symbols.cols() != cfg.num_ues) {
    throw std::invalid_argument("synthesize: symbol matrix must be T x K for the phase");
  }
  const int bm = cfg.total_antennas();
  if (chan.h.rows() != bm || chan.h.cols() != cfg.num_ues) {
    throw std::invalid_argument("synthesize: channel does not match config");
  }
  const int tau = expected_len;
  const int num_intf = static_cast<int>(chan.interferer_h.cols());

  SignalBlock block;
  block.phase = phase;
  block.truth_symbols = symbols;
  Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(bm, tau);

  const Eigen::VectorXd rho = ue_power_vector(cfg);
  for (int k = 0; k < cfg.num_ues; ++k) {
    y.noalias() += std::sqrt(rho(k)) * chan.h.col(k) * symbols.col(k).adjoint();
  }

  // Interferers keep transmitting random symbols in both phases.
  {
    Rng sym_rng(trial_seed, phase == Phase::pilot
                                ? StreamPurpose::pilot_interferer_symbols
                                : StreamPurpose::data_interferer_symbols);
    const Constellation c = make_constellation(cfg.constellation_order);
    for (int j = 0; j < num_intf; ++j) {
      const double amp = std::sqrt(chan.interferer_power_mw[static_cast<size_t>(j)]);
      Eigen::VectorXcd s(tau);
      for (int t = 0; t < tau; ++t) {
        s(t) = cfg.interferer_gaussian
                   ? sym_rng.complex_normal()
                   : c.points[sym_rng.uniform_index(static_cast<std::uint64_t>(c.order))];
      }
      y.noalias() += amp * chan.interferer_h.col(j) * s.adjoint();
    }
  }

  // AWGN, sigma * unit draws so that power rescaling rescales the same draw.
  {
    Rng noise_rng(trial_seed, phase == Phase::pilot ? StreamPurpose::pilot_noise
                                                    : StreamPurpose::data_noise);
    const double sigma = std::sqrt(dbm_to_linear(cfg.noise_power_dbm));
    for (int t = 0; t < tau; ++t) {
      for (int a = 0; a < bm; ++a) {
        y(a, t) += sigma * noise_rng.complex_normal();
      }
    }
  }

  block.received = std::move(y);
  return block;
}

void dump_block_binary(const SignalBlock& block, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("dump_block_binary: cannot open " + path);
  auto put = [&](double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
    out.write(bytes, 8);
  };
  for (Eigen::Index r = 0; r < block.received.rows(); ++r) {
    for (Eigen::Index t = 0; t < block.received.cols(); ++t) {
      put(block.received(r, t).real());
      put(block.received(r, t).imag());
    }
  }
  if (!out) throw std::runtime_error("dump_block_binary: write failed: " + path);
}

}  // namespace shrinkcomb
