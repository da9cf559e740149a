// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "shrinkcomb/scenario.hpp"

namespace shrinkcomb {

// Unit-average-energy symbol set with Gray labels.
struct Constellation {
  int order = 4;
  std::vector<std::complex<double>> points;
  std::vector<int> gray_labels;
};

// Square M-QAM (order 4 gives QPSK) scaled so mean(|point|^2) = 1.
Constellation make_constellation(int order);

struct PilotMatrix {
  Eigen::MatrixXcd p;  // tau_p x K, mutually orthogonal columns of norm sqrt(tau_p)
};

// Columns of a tau_p-point DFT matrix; requires tau_p >= K.
PilotMatrix make_pilots(int pilot_len, int num_ues);

enum class Phase { pilot, data };

struct SignalBlock {
  Eigen::MatrixXcd received;       // BM x T
  Eigen::MatrixXcd truth_symbols;  // T x K (pilot phase stores P)
  Phase phase = Phase::data;
};

// i.i.d. uniform constellation draws, tau_d x K. Deterministic per seed.
Eigen::MatrixXcd draw_data_symbols(const ScenarioConfig& cfg,
                                   std::uint64_t trial_seed);

// Received block Y = sum_k sqrt(rho_k) h_k s_k^H + Z, where Z carries the
// interferer streams and AWGN. Symbols enter conjugated (via s^H), so the
// block is BM x T for a T x K symbol matrix.
SignalBlock synthesize(Phase phase, const ScenarioConfig& cfg,
                       const ChannelRealization& chan,
                       const Eigen::MatrixXcd& symbols,
                       std::uint64_t trial_seed);

// Debug dump of the received matrix: row-major, interleaved re/im doubles,
// little-endian.
void dump_block_binary(const SignalBlock& block, const std::string& path);

}  // namespace shrinkcomb
