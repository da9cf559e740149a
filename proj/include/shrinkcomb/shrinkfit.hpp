// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "shrinkcomb/combine.hpp"
#include "shrinkcomb/detect.hpp"

namespace shrinkcomb {

struct FitOptions {
  int max_iters = 50;
  double tol_alpha = 1e-4;
  // Backtracking line search: start from step_scale / |gradient|, halve until
  // the sample MSE decreases at fixed hard decisions.
  double step_scale = 0.1;
  int max_halvings = 20;
  // > 0 enables the stochastic variant: the gradient is computed on this many
  // data columns, resampled each iteration from subset_seed.
  int gradient_subset = 0;
  std::uint64_t subset_seed = 0;
};

struct FitState {
  std::vector<double> alpha_trajectory;     // starts at alpha = 0
  std::vector<double> mse_trajectory;       // objective at each trajectory point
  std::vector<double> beta_used;            // accepted step per iteration
  std::vector<double> line_search_start;    // objective before each line search
  int iterations = 0;
  bool converged = false;
  int clamp_events = 0;
};

// d eps / d alpha at fixed hard decisions, via the cached eigenbasis:
//   -(2/(K tau_d)) Re tr( W^H S R^{-1} Yd (Yd^H W - Dbar) ),
// with W = (1/tau_p) R^{-1} Yp P. Verified against central finite
// differences of the sample MSE.
double mse_gradient(const ShrinkagePrep& prep, const SignalBlock& pilot_block,
                    const PilotMatrix& pilots,
                    const Eigen::MatrixXcd& data_received,
                    const Eigen::MatrixXcd& hard, double alpha);

struct FitResult {
  double alpha = 0.0;
  FitState state;
};

// Iterative tuning of the shrinkage coefficient: per iteration recompute the
// combiner, soft estimates and hard decisions, then take a backtracked
// gradient step on the sample MSE. Stops when alpha moves less than
// tol_alpha or max_iters is reached.
FitResult fit_iterative(const ShrinkagePrep& prep,
                        const SignalBlock& pilot_block,
                        const PilotMatrix& pilots,
                        const SignalBlock& data_block, const Constellation& c,
                        const FitOptions& opts = {});

enum class GenieObjective { mse, ser };

struct GenieOptions {
  double grid_step = 0.01;
  GenieObjective objective = GenieObjective::mse;
  int constellation_order = 4;  // used by the ser objective only
};

// Exhaustive line search over alpha with the true transmitted symbols in
// place of the hard decisions. Grid points with singular R are skipped.
double fit_exhaustive_genie(const ShrinkagePrep& prep,
                            const SignalBlock& pilot_block,
                            const PilotMatrix& pilots,
                            const SignalBlock& data_block,
                            const Eigen::MatrixXcd& true_symbols,
                            const GenieOptions& opts = {});

}  // namespace shrinkcomb
