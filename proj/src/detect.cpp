// SPDX-License-Identifier: Apache-2.0
#include "shrinkcomb/detect.hpp"

namespace shrinkcomb {

namespace {

std::complex<double> nearest_point(std::complex<double> soft,
                                   const Constellation& c) {
  size_t best = 0;
  double best_dist = std::norm(soft - c.points[0]);
  for (size_t i = 1; i < c.points.size(); ++i) {
    const double dist = std::norm(soft - c.points[i]);
    if (dist < best_dist) {  // strict: ties keep the lowest index
      best_dist = dist;
      best = i;
    }
  }
  return c.points[best];
}

}  // namespace

Eigen::VectorXcd hard_decide(const Eigen::VectorXcd& soft,
                             const Constellation& c) {
  Eigen::VectorXcd hard(soft.size());
  for (Eigen::Index t = 0; t < soft.size(); ++t) {
    hard(t) = nearest_point(soft(t), c);
  }
  return hard;
}

Eigen::MatrixXcd hard_decide_all(const Eigen::MatrixXcd& soft,
                                 const Constellation& c) {
  Eigen::MatrixXcd hard(soft.rows(), soft.cols());
  for (Eigen::Index k = 0; k < soft.cols(); ++k) {
    for (Eigen::Index t = 0; t < soft.rows(); ++t) {
      hard(t, k) = nearest_point(soft(t, k), c);
    }
  }
  return hard;
}

double sample_mse(const Eigen::MatrixXcd& data_received,
                  const Eigen::MatrixXcd& w, const Eigen::MatrixXcd& hard) {
  if (hard.rows() != data_received.cols() || hard.cols() != w.cols()) {
    throw std::invalid_argument("sample_mse: shape mismatch");
  }
  const double k = static_cast<double>(w.cols());
  const double tau_d = static_cast<double>(data_received.cols());
  return (data_received.adjoint() * w - hard).squaredNorm() / (k * tau_d);
}

double sample_mse_trace(const ShrinkagePrep& prep,
                        const SignalBlock& pilot_block,
                        const PilotMatrix& pilots, double alpha,
                        const Eigen::MatrixXcd& data_received,
                        const Eigen::MatrixXcd& hard) {
  const Eigen::MatrixXcd& yp = pilot_block.received;
  const double tau_p = static_cast<double>(yp.cols());
  const double tau_d = static_cast<double>(data_received.cols());
  const double k = static_cast<double>(pilots.p.cols());

  // A = R^{-1} Yp P through the eigenbasis; the three trace terms are the
  // expansion of || Yd^H W - Dbar ||_F^2 with W = A / tau_p.
  const Eigen::MatrixXcd a = apply_r_inverse(prep, alpha, yp * pilots.p);
  const Eigen::MatrixXcd yd_a = data_received.adjoint() * a;  // tau_d x K
  const double quad = (yd_a.adjoint() * yd_a).trace().real() / (tau_p * tau_p);
  const double cross = (yd_a.cwiseProduct(hard.conjugate())).sum().real() / tau_p;
  const double energy = hard.squaredNorm();
  return (quad - 2.0 * cross + energy) / (k * tau_d);
}

DetectionResult detect_block(const Eigen::MatrixXcd& data_received,
                             const Eigen::MatrixXcd& w, const Constellation& c,
                             const Eigen::MatrixXcd* truth) {
  DetectionResult result;
  result.soft = data_received.adjoint() * w;
  result.hard = hard_decide_all(result.soft, c);
  result.sample_mse = sample_mse(data_received, w, result.hard);
  if (truth) {
    result.errors_per_ue = ser(result.hard, *truth).errors_per_ue;
  }
  return result;
}

SerCount ser(const Eigen::MatrixXcd& hard, const Eigen::MatrixXcd& truth) {
  if (hard.rows() != truth.rows() || hard.cols() != truth.cols()) {
    throw std::invalid_argument("ser: shape mismatch");
  }
  SerCount count;
  count.errors_per_ue.assign(static_cast<size_t>(hard.cols()), 0);
  for (Eigen::Index k = 0; k < hard.cols(); ++k) {
    for (Eigen::Index t = 0; t < hard.rows(); ++t) {
      if (hard(t, k) != truth(t, k)) {
        ++count.errors_per_ue[static_cast<size_t>(k)];
      }
    }
    count.errors += count.errors_per_ue[static_cast<size_t>(k)];
  }
  count.total = static_cast<long>(hard.size());
  return count;
}

}  // namespace shrinkcomb
