// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <string>

#include "shrinkcomb/regcov.hpp"

namespace shrinkcomb {

struct CombinerSet {
  Eigen::MatrixXcd w;  // BM x K, column k combines UE k
  std::string method;
  double alpha = 0.0;
  bool has_alpha = false;
};

// Direct-estimate combiner W = (1/tau_p) R(alpha)^{-1} Yp P, through the
// cached eigenbasis. alpha = 0 is the plain LS solution.
CombinerSet direct_estimate(const ShrinkagePrep& prep,
                            const SignalBlock& pilot_block,
                            const PilotMatrix& pilots, double alpha);

enum class CsiCombinerKind { mmse, rzf };

// Ideal-CSI baseline. mmse: w_k = sqrt(rho_k) (H Omega H^H + Psi)^{-1} h_k.
// rzf ignores the interference part of Psi and regularizes by noise only.
CombinerSet perfect_csi_combiner(const ChannelRealization& chan,
                                 const Eigen::VectorXd& ue_power_mw,
                                 double noise_power_mw,
                                 CsiCombinerKind kind = CsiCombinerKind::mmse);

// Soft estimates (Yd)^H w_k; matrix form returns tau_d x K for all UEs.
Eigen::VectorXcd soft_estimate(const Eigen::MatrixXcd& data_received,
                               const Eigen::VectorXcd& w_k);
Eigen::MatrixXcd soft_estimate_all(const Eigen::MatrixXcd& data_received,
                                   const CombinerSet& combiner);

}  // namespace shrinkcomb
