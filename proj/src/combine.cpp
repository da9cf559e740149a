// SPDX-License-Identifier: Apache-2.0
#include "shrinkcomb/combine.hpp"

#include <cmath>

namespace shrinkcomb {

CombinerSet direct_estimate(const ShrinkagePrep& prep,
                            const SignalBlock& pilot_block,
                            const PilotMatrix& pilots, double alpha) {
  const Eigen::MatrixXcd& yp = pilot_block.received;
  if (pilots.p.rows() != yp.cols()) {
    throw std::invalid_argument("direct_estimate: pilot length mismatch");
  }
  const double tau_p = static_cast<double>(yp.cols());
  CombinerSet out;
  out.w = apply_r_inverse(prep, alpha, yp * pilots.p) / tau_p;
  out.method = "direct_estimate";
  out.alpha = alpha;
  out.has_alpha = true;
  return out;
}

CombinerSet perfect_csi_combiner(const ChannelRealization& chan,
                                 const Eigen::VectorXd& ue_power_mw,
                                 double noise_power_mw, CsiCombinerKind kind) {
  const int bm = static_cast<int>(chan.h.rows());
  const Eigen::MatrixXcd signal_cov =
      chan.h * ue_power_mw.asDiagonal() * chan.h.adjoint();
  Eigen::MatrixXcd cov;
  if (kind == CsiCombinerKind::mmse) {
    cov = signal_cov + chan.psi;
  } else {
    cov = signal_cov + noise_power_mw * Eigen::MatrixXcd::Identity(bm, bm);
  }
  Eigen::LLT<Eigen::MatrixXcd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw SingularCovarianceError("perfect_csi_combiner: covariance not positive definite");
  }
  CombinerSet out;
  out.w = llt.solve(chan.h) *
          ue_power_mw.cwiseSqrt().asDiagonal();
  out.method = kind == CsiCombinerKind::mmse ? "perfect_csi_mmse" : "perfect_csi_rzf";
  return out;
}

Eigen::VectorXcd soft_estimate(const Eigen::MatrixXcd& data_received,
                               const Eigen::VectorXcd& w_k) {
  if (data_received.rows() != w_k.size()) {
    throw std::invalid_argument("soft_estimate: combiner length mismatch");
  }
  return data_received.adjoint() * w_k;
}

Eigen::MatrixXcd soft_estimate_all(const Eigen::MatrixXcd& data_received,
                                   const CombinerSet& combiner) {
  if (data_received.rows() != combiner.w.rows()) {
    throw std::invalid_argument("soft_estimate_all: combiner height mismatch");
  }
  return data_received.adjoint() * combiner.w;
}

}  // namespace shrinkcomb
