// SPDX-License-Identifier: Apache-2.0
#include "shrinkcomb/regcov.hpp"

#include <algorithm>
#include <cmath>

namespace shrinkcomb {

namespace {

// Below this ||S||_F^2 the sample covariance is isotropic and shrinkage is a
// no-op; the closed forms would divide by ~0.
double degenerate_s_floor(const ShrinkagePrep& prep) {
  const double bm = static_cast<double>(prep.q.rows());
  return 1e-12 * prep.trace_over_dim * prep.trace_over_dim * bm;
}

}  // namespace

ShrinkagePrep build_prep(const SignalBlock& pilot_block) {
  if (pilot_block.phase != Phase::pilot) {
    throw std::invalid_argument("build_prep: expected a pilot-phase block");
  }
  const Eigen::MatrixXcd& yp = pilot_block.received;
  if (!yp.allFinite()) {
    throw std::invalid_argument("build_prep: non-finite pilot samples");
  }
  const int bm = static_cast<int>(yp.rows());
  const double tau_p = static_cast<double>(yp.cols());

  ShrinkagePrep prep;
  prep.pilot_len = static_cast<int>(yp.cols());
  prep.q.noalias() = (yp * yp.adjoint()) / tau_p;
  prep.trace_over_dim = prep.q.trace().real() / static_cast<double>(bm);
  prep.s = prep.trace_over_dim * Eigen::MatrixXcd::Identity(bm, bm) - prep.q;
  prep.s_energy = prep.s.squaredNorm();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(prep.q);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("build_prep: eigendecomposition failed");
  }
  prep.eigvecs = es.eigenvectors();
  prep.eigvals = es.eigenvalues();
  return prep;
}

Eigen::MatrixXcd r_of_alpha(const ShrinkagePrep& prep, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("r_of_alpha: alpha must lie in [0, 1]");
  }
  // Convex-combination form keeps both endpoints exact.
  const Eigen::Index bm = prep.q.rows();
  return (1.0 - alpha) * prep.q +
         (alpha * prep.trace_over_dim) * Eigen::MatrixXcd::Identity(bm, bm);
}

Eigen::MatrixXcd apply_r_inverse(const ShrinkagePrep& prep, double alpha,
                                 const Eigen::MatrixXcd& x) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("apply_r_inverse: alpha must lie in [0, 1]");
  }
  if (x.rows() != prep.q.rows()) {
    throw std::invalid_argument("apply_r_inverse: row count mismatch");
  }
  const Eigen::VectorXd d = prep.shrunk_eigvals(alpha);
  const double scale = std::max(prep.eigvals.cwiseAbs().maxCoeff(), prep.trace_over_dim);
  if (d.minCoeff() <= 1e-12 * scale) {
    throw SingularCovarianceError("apply_r_inverse: R(alpha) numerically singular at alpha=" +
                                  std::to_string(alpha));
  }
  const Eigen::MatrixXcd projected = prep.eigvecs.adjoint() * x;
  return prep.eigvecs * d.cwiseInverse().asDiagonal() * projected;
}

AlphaEstimate alpha_against_target(const ShrinkagePrep& prep,
                                   const Eigen::MatrixXcd& target) {
  AlphaEstimate est;
  if (prep.s_energy <= degenerate_s_floor(prep)) {
    est.degenerate = true;
    return est;
  }
  // Vertex of the quadratic || (Q - C) + alpha S ||_F^2.
  est.unclamped =
      ((target - prep.q).cwiseProduct(prep.s.conjugate())).sum().real() / prep.s_energy;
  est.alpha = std::clamp(est.unclamped, 0.0, 1.0);
  est.clamped = est.alpha != est.unclamped;
  return est;
}

AlphaEstimate alpha_oracle(const ShrinkagePrep& prep,
                           const ChannelRealization& chan,
                           const Eigen::VectorXd& ue_power_mw) {
  const Eigen::MatrixXcd actual =
      chan.h * ue_power_mw.asDiagonal() * chan.h.adjoint() + chan.psi;
  return alpha_against_target(prep, actual);
}

AlphaEstimate alpha_from_data(const ShrinkagePrep& prep,
                              const SignalBlock& data_block) {
  if (data_block.phase != Phase::data) {
    throw std::invalid_argument("alpha_from_data: expected a data-phase block");
  }
  const Eigen::MatrixXcd& yd = data_block.received;
  const Eigen::MatrixXcd sample =
      (yd * yd.adjoint()) / static_cast<double>(yd.cols());
  return alpha_against_target(prep, sample);
}

}  // namespace shrinkcomb
