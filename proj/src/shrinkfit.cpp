// SPDX-License-Identifier: Apache-2.0
#include "shrinkcomb/shrinkfit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "shrinkcomb/rng.hpp"

namespace shrinkcomb {

namespace {

// Core of the analytic derivative at fixed hard decisions:
//   -(2/(K tau_d)) Re tr( W^H S R^{-1} Yd (Yd^H W - Dbar) ).
// Yd and Dbar may be a column subset for the stochastic variant; the
// normalization then uses the subset length.
double gradient_impl(const ShrinkagePrep& prep, const Eigen::MatrixXcd& w,
                     const Eigen::MatrixXcd& yd, const Eigen::MatrixXcd& hard,
                     double alpha) {
  const double k = static_cast<double>(w.cols());
  const double tau = static_cast<double>(yd.cols());
  const Eigen::MatrixXcd residual = yd.adjoint() * w - hard;   // tau x K
  const Eigen::MatrixXcd g = apply_r_inverse(prep, alpha, yd * residual);
  const Eigen::MatrixXcd sw = prep.s * w;
  return -2.0 / (k * tau) * (sw.conjugate().cwiseProduct(g)).sum().real();
}

}  // namespace

double mse_gradient(const ShrinkagePrep& prep, const SignalBlock& pilot_block,
                    const PilotMatrix& pilots,
                    const Eigen::MatrixXcd& data_received,
                    const Eigen::MatrixXcd& hard, double alpha) {
  if (hard.rows() != data_received.cols() || hard.cols() != pilots.p.cols()) {
    throw std::invalid_argument("mse_gradient: hard-decision shape mismatch");
  }
  const CombinerSet w = direct_estimate(prep, pilot_block, pilots, alpha);
  const double g = gradient_impl(prep, w.w, data_received, hard, alpha);
  if (!std::isfinite(g)) {
    throw std::runtime_error("mse_gradient: non-finite derivative");
  }
  return g;
}

FitResult fit_iterative(const ShrinkagePrep& prep,
                        const SignalBlock& pilot_block,
                        const PilotMatrix& pilots,
                        const SignalBlock& data_block, const Constellation& c,
                        const FitOptions& opts) {
  const Eigen::MatrixXcd& yd = data_block.received;
  const Eigen::Index tau_d = yd.cols();

  FitResult result;
  FitState& state = result.state;
  double alpha = 0.0;

  for (int iter = 1; iter <= opts.max_iters; ++iter) {
    const CombinerSet w = direct_estimate(prep, pilot_block, pilots, alpha);
    const Eigen::MatrixXcd soft = soft_estimate_all(yd, w);
    const Eigen::MatrixXcd hard = hard_decide_all(soft, c);
    const double mse_start = sample_mse(yd, w.w, hard);

    if (iter == 1) {
      state.alpha_trajectory.push_back(alpha);
      state.mse_trajectory.push_back(mse_start);
    }

    double grad;
    if (opts.gradient_subset > 0 && opts.gradient_subset < tau_d) {
      // Stochastic variant: derivative from a fresh column subset.
      Rng rng(derive_resample_seed(opts.subset_seed, static_cast<std::uint64_t>(iter)),
              StreamPurpose::gradient_subset);
      std::vector<Eigen::Index> idx(static_cast<size_t>(tau_d));
      std::iota(idx.begin(), idx.end(), Eigen::Index{0});
      const int m = opts.gradient_subset;
      for (int i = 0; i < m; ++i) {
        const auto j = static_cast<Eigen::Index>(
            rng.uniform_index(static_cast<std::uint64_t>(tau_d - i)));
        std::swap(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(i) + static_cast<size_t>(j)]);
      }
      Eigen::MatrixXcd yd_sub(yd.rows(), m);
      Eigen::MatrixXcd hard_sub(m, hard.cols());
      for (int i = 0; i < m; ++i) {
        yd_sub.col(i) = yd.col(idx[static_cast<size_t>(i)]);
        hard_sub.row(i) = hard.row(idx[static_cast<size_t>(i)]);
      }
      grad = gradient_impl(prep, w.w, yd_sub, hard_sub, alpha);
    } else {
      grad = gradient_impl(prep, w.w, yd, hard, alpha);
    }
    if (!std::isfinite(grad)) {
      state.iterations = iter;
      throw std::runtime_error("fit_iterative: non-finite derivative at alpha=" +
                               std::to_string(alpha));
    }

    // Backtracking step at fixed hard decisions.
    double beta = opts.step_scale / (std::abs(grad) + 1e-12);
    double next_alpha = alpha;
    double next_mse = mse_start;
    double accepted_beta = 0.0;
    bool clamped = false;
    if (grad != 0.0) {
      for (int h = 0; h <= opts.max_halvings; ++h, beta *= 0.5) {
        const double raw = alpha - beta * grad;
        const double cand = std::clamp(raw, 0.0, 1.0);
        if (cand == alpha) continue;
        double cand_mse;
        try {
          const CombinerSet wc = direct_estimate(prep, pilot_block, pilots, cand);
          cand_mse = sample_mse(yd, wc.w, hard);
        } catch (const SingularCovarianceError&) {
          continue;  // candidate fell on a singular point, shorten the step
        }
        if (cand_mse < mse_start) {
          next_alpha = cand;
          next_mse = cand_mse;
          accepted_beta = beta;
          clamped = cand != raw;
          break;
        }
      }
    }

    state.iterations = iter;
    if (clamped) ++state.clamp_events;
    state.alpha_trajectory.push_back(next_alpha);
    state.mse_trajectory.push_back(next_mse);
    state.beta_used.push_back(accepted_beta);
    state.line_search_start.push_back(mse_start);

    const double delta = std::abs(next_alpha - alpha);
    alpha = next_alpha;
    if (delta < opts.tol_alpha) {
      state.converged = true;
      break;
    }
  }

  result.alpha = alpha;
  return result;
}

double fit_exhaustive_genie(const ShrinkagePrep& prep,
                            const SignalBlock& pilot_block,
                            const PilotMatrix& pilots,
                            const SignalBlock& data_block,
                            const Eigen::MatrixXcd& true_symbols,
                            const GenieOptions& opts) {
  if (!(opts.grid_step > 0.0 && opts.grid_step <= 1.0)) {
    throw std::invalid_argument("fit_exhaustive_genie: grid step must be in (0, 1]");
  }
  const Eigen::MatrixXcd& yd = data_block.received;
  const auto n = static_cast<long>(std::lround(1.0 / opts.grid_step));

  double best_alpha = 0.0;
  double best_obj = std::numeric_limits<double>::infinity();
  for (long i = 0; i <= n; ++i) {
    const double alpha = static_cast<double>(i) / static_cast<double>(n);
    double obj;
    try {
      const CombinerSet w = direct_estimate(prep, pilot_block, pilots, alpha);
      if (opts.objective == GenieObjective::mse) {
        obj = sample_mse(yd, w.w, true_symbols);
      } else {
        const Constellation c = make_constellation(opts.constellation_order);
        const Eigen::MatrixXcd soft = soft_estimate_all(yd, w);
        obj = static_cast<double>(ser(hard_decide_all(soft, c), true_symbols).errors);
      }
    } catch (const SingularCovarianceError&) {
      continue;
    }
    if (obj < best_obj) {
      best_obj = obj;
      best_alpha = alpha;
    }
  }
  if (!std::isfinite(best_obj)) {
    throw SingularCovarianceError("fit_exhaustive_genie: every grid point singular");
  }
  return best_alpha;
}

}  // namespace shrinkcomb
