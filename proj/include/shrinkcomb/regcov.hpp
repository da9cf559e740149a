// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "shrinkcomb/airframe.hpp"
#include "shrinkcomb/scenario.hpp"

namespace shrinkcomb {

// R(0) = Q is rank deficient; callers may floor alpha and retry.
class SingularCovarianceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sample covariance of the received pilot block together with the shrinkage
// direction and a cached eigendecomposition. The shrinkage family is
//   R(alpha) = (1-alpha) Q + alpha (tr(Q)/(BM)) I = Q + alpha S,
// which keeps the eigenvectors of Q for every alpha, so R(alpha)^{-1} only
// needs the diagonal of updated eigenvalues.
struct ShrinkagePrep {
  Eigen::MatrixXcd q;         // (1/tau_p) Yp Yp^H
  Eigen::MatrixXcd s;         // trace_over_dim * I - Q
  Eigen::MatrixXcd eigvecs;   // unitary U
  Eigen::VectorXd eigvals;    // ascending eigenvalues of Q
  double trace_over_dim = 0;  // tr(Q) / (BM)
  double s_energy = 0;        // tr(S S^H) = ||S||_F^2
  int pilot_len = 0;

  // Eigenvalues of R(alpha).
  Eigen::VectorXd shrunk_eigvals(double alpha) const {
    return (1.0 - alpha) * eigvals.array() + alpha * trace_over_dim;
  }
};

ShrinkagePrep build_prep(const SignalBlock& pilot_block);

// R(alpha); requires alpha in [0, 1].
Eigen::MatrixXcd r_of_alpha(const ShrinkagePrep& prep, double alpha);

// R(alpha)^{-1} X through the cached eigenbasis. Throws
// SingularCovarianceError when the shrunk spectrum is numerically singular.
Eigen::MatrixXcd apply_r_inverse(const ShrinkagePrep& prep, double alpha,
                                 const Eigen::MatrixXcd& x);

struct AlphaEstimate {
  double alpha = 0.0;      // clamped to [0, 1]
  double unclamped = 0.0;  // raw quadratic minimizer
  bool clamped = false;
  bool degenerate = false;  // S below the energy floor, alpha forced to 0
};

// Minimizer of || R(alpha) - C ||_F^2 for a Hermitian target C:
//   alpha = Re tr((C - Q) S) / tr(S S^H), then clamped to [0, 1].
AlphaEstimate alpha_against_target(const ShrinkagePrep& prep,
                                   const Eigen::MatrixXcd& target);

// Oracle coefficient: target is the true covariance H Omega H^H + Psi.
AlphaEstimate alpha_oracle(const ShrinkagePrep& prep,
                           const ChannelRealization& chan,
                           const Eigen::VectorXd& ue_power_mw);

// Data-based coefficient: target is (1/tau_d) Yd Yd^H.
AlphaEstimate alpha_from_data(const ShrinkagePrep& prep,
                              const SignalBlock& data_block);

}  // namespace shrinkcomb
