// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "shrinkcomb/airframe.hpp"
#include "shrinkcomb/regcov.hpp"

namespace shrinkcomb {

struct DetectionResult {
  Eigen::MatrixXcd soft;            // tau_d x K
  Eigen::MatrixXcd hard;            // tau_d x K, constellation points
  std::vector<long> errors_per_ue;  // vs a truth matrix, when provided
  double sample_mse = 0.0;
};

// Full detection pass for one combiner: soft estimates, hard decisions,
// sample MSE, and error counts against `truth` when given.
DetectionResult detect_block(const Eigen::MatrixXcd& data_received,
                             const Eigen::MatrixXcd& w, const Constellation& c,
                             const Eigen::MatrixXcd* truth = nullptr);

// Nearest constellation point per entry; ties go to the lowest point index.
// The sequence-level minimum-distance rule factors per symbol because the
// candidate set is a product set.
Eigen::VectorXcd hard_decide(const Eigen::VectorXcd& soft,
                             const Constellation& c);
Eigen::MatrixXcd hard_decide_all(const Eigen::MatrixXcd& soft,
                                 const Constellation& c);

// Average sample MSE across UEs: (1/(K tau_d)) sum_k ||Yd^H w_k - dbar_k||^2.
double sample_mse(const Eigen::MatrixXcd& data_received,
                  const Eigen::MatrixXcd& w, const Eigen::MatrixXcd& hard);

// Same objective evaluated through the expanded trace form with the cached
// eigenbasis; agrees with the residual form to machine-level accuracy.
double sample_mse_trace(const ShrinkagePrep& prep,
                        const SignalBlock& pilot_block,
                        const PilotMatrix& pilots, double alpha,
                        const Eigen::MatrixXcd& data_received,
                        const Eigen::MatrixXcd& hard);

struct SerCount {
  long errors = 0;
  long total = 0;
  std::vector<long> errors_per_ue;
  double ser() const { return total == 0 ? 0.0 : static_cast<double>(errors) / static_cast<double>(total); }
};

// Exact symbol error counts, pooled and per UE. Shapes must match.
SerCount ser(const Eigen::MatrixXcd& hard, const Eigen::MatrixXcd& truth);

}  // namespace shrinkcomb
