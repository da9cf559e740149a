// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_helpers.hpp"

using namespace shrinkcomb;
using cd = std::complex<double>;

namespace {

Eigen::MatrixXcd decisions_at(const test::TrialData& d, const Constellation& c,
                              double alpha) {
  const CombinerSet w = direct_estimate(d.prep, d.pilot_block, d.pilots, alpha);
  return hard_decide_all(soft_estimate_all(d.data_block.received, w), c);
}

double mse_at(const test::TrialData& d, double alpha, const Eigen::MatrixXcd& hard) {
  const CombinerSet w = direct_estimate(d.prep, d.pilot_block, d.pilots, alpha);
  return sample_mse(d.data_block.received, w.w, hard);
}

}  // namespace

TEST_CASE("analytic derivative matches central finite differences") {
  const ScenarioConfig cfg = test::default_scenario(71);
  const Constellation c = make_constellation(4);
  const double h = 1e-6;
  for (std::uint64_t t = 0; t < 20; ++t) {
    const test::TrialData d = test::make_trial(cfg, t);

    // Gradient scale over the alpha range anchors the relative error when a
    // sample point sits near a stationary point.
    double scale = 0.0;
    std::vector<std::pair<double, double>> samples;
    for (int i = 1; i <= 19; ++i) {
      const double alpha = 0.05 * i;
      const Eigen::MatrixXcd hard = decisions_at(d, c, alpha);
      const double fd = test::fd_gradient(d, hard, alpha, h);
      const double g =
          mse_gradient(d.prep, d.pilot_block, d.pilots, d.data_block.received, hard, alpha);
      samples.emplace_back(g, fd);
      scale = std::max({scale, std::abs(fd), std::abs(g)});
    }
    REQUIRE(scale > 0.0);
    for (const auto& [g, fd] : samples) {
      const double rel = std::abs(g - fd) / std::max({std::abs(g), std::abs(fd), 1e-3 * scale});
      CHECK(rel <= 1e-4);
    }
  }
}

TEST_CASE("isotropic sample covariance zeroes the derivative") {
  const SignalBlock pilot = test::isotropic_pilot_block(8, 1.3);
  const ShrinkagePrep prep = test::exact_isotropic_prep(8, 1.3, 8);
  PilotMatrix pm = make_pilots(8, 4);
  Rng rng(5, StreamPurpose::data_noise);
  Eigen::MatrixXcd yd(8, 100);
  for (Eigen::Index i = 0; i < yd.size(); ++i) yd(i) = rng.complex_normal();
  const Constellation c = make_constellation(4);
  const CombinerSet w = direct_estimate(prep, pilot, pm, 0.0);
  const Eigen::MatrixXcd hard = hard_decide_all(soft_estimate_all(yd, w), c);
  for (double alpha : {0.0, 0.3, 0.7, 1.0}) {
    CHECK(mse_gradient(prep, pilot, pm, yd, hard, alpha) == 0.0);
  }
}

TEST_CASE("gradient vanishes at an interior grid minimum") {
  const ScenarioConfig cfg = test::default_scenario(72);
  const Constellation c = make_constellation(4);
  const double step = 1e-3;
  int interior_cases = 0;
  for (std::uint64_t t = 0; t < 8; ++t) {
    ScenarioConfig low = cfg;
    low.ue_tx_power_dbm = {6.0};  // moderate SNR keeps the optimum interior
    const test::TrialData d = test::make_trial(low, t);
    const Eigen::MatrixXcd hard = decisions_at(d, c, 0.0);

    double best_alpha = 0.0, best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 1000; ++i) {
      const double alpha = step * i;
      const double eps = mse_at(d, alpha, hard);
      if (eps < best) {
        best = eps;
        best_alpha = alpha;
      }
    }
    const double g =
        mse_gradient(d.prep, d.pilot_block, d.pilots, d.data_block.received, hard, best_alpha);
    if (best_alpha > step && best_alpha < 1.0 - step) {
      ++interior_cases;
      // Secants to the neighboring grid points bound the derivative size.
      const double bound =
          (std::abs(mse_at(d, best_alpha + step, hard) - best) +
           std::abs(mse_at(d, best_alpha - step, hard) - best)) /
          step;
      CHECK(std::abs(g) <= bound + 1e-15);
    } else if (best_alpha <= step) {
      CHECK(g >= -1e-9);  // objective increasing away from the left edge
    } else {
      CHECK(g <= 1e-9);
    }
  }
  CHECK(interior_cases > 0);
}

TEST_CASE("iterative fit terminates immediately on a flat objective") {
  const SignalBlock pilot = test::isotropic_pilot_block(8, 0.9);
  const ShrinkagePrep prep = test::exact_isotropic_prep(8, 0.9, 8);
  const PilotMatrix pm = make_pilots(8, 4);
  Rng rng(6, StreamPurpose::data_noise);
  SignalBlock data;
  data.phase = Phase::data;
  data.received.resize(8, 60);
  for (Eigen::Index i = 0; i < data.received.size(); ++i) {
    data.received(i) = rng.complex_normal();
  }
  data.truth_symbols = Eigen::MatrixXcd::Zero(60, 4);

  const FitResult fit = fit_iterative(prep, pilot, pm, data, make_constellation(4));
  CHECK(fit.alpha == 0.0);
  CHECK(fit.state.iterations == 1);
  CHECK(fit.state.converged);
  CHECK(fit.state.alpha_trajectory.size() == 2);  // initial point + one update
}

TEST_CASE("iterative fit approaches the redecided grid optimum") {
  const ScenarioConfig cfg = test::default_scenario(73);
  const Constellation c = make_constellation(4);
  for (std::uint64_t t = 0; t < 5; ++t) {
    const test::TrialData d = test::make_trial(cfg, t);
    const FitResult fit =
        fit_iterative(d.prep, d.pilot_block, d.pilots, d.data_block, c);

    // Oracle: dense alpha grid with hard decisions recomputed per point.
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 500; ++i) {
      const double alpha = static_cast<double>(i) / 500.0;
      const double eps = mse_at(d, alpha, decisions_at(d, c, alpha));
      best = std::min(best, eps);
    }
    const double at_fit = mse_at(d, fit.alpha, decisions_at(d, c, fit.alpha));
    CHECK(at_fit <= 1.05 * best);
  }
}

TEST_CASE("line search never increases the objective within an iteration") {
  const ScenarioConfig cfg = test::default_scenario(74);
  const Constellation c = make_constellation(4);
  for (std::uint64_t t = 0; t < 5; ++t) {
    const test::TrialData d = test::make_trial(cfg, t);
    const FitResult fit =
        fit_iterative(d.prep, d.pilot_block, d.pilots, d.data_block, c);
    const FitState& st = fit.state;
    REQUIRE(st.alpha_trajectory.size() == st.mse_trajectory.size());
    REQUIRE(st.line_search_start.size() == static_cast<size_t>(st.iterations));
    for (int i = 0; i < st.iterations; ++i) {
      CHECK(st.mse_trajectory[static_cast<size_t>(i) + 1] <=
            st.line_search_start[static_cast<size_t>(i)] + 1e-15);
      CHECK(st.alpha_trajectory[static_cast<size_t>(i) + 1] >= 0.0);
      CHECK(st.alpha_trajectory[static_cast<size_t>(i) + 1] <= 1.0);
    }
  }
}

TEST_CASE("fit trajectories are deterministic") {
  const ScenarioConfig cfg = test::default_scenario(75);
  const Constellation c = make_constellation(4);
  const test::TrialData d = test::make_trial(cfg, 0);
  const FitResult a = fit_iterative(d.prep, d.pilot_block, d.pilots, d.data_block, c);
  const FitResult b = fit_iterative(d.prep, d.pilot_block, d.pilots, d.data_block, c);
  CHECK(a.alpha == b.alpha);
  CHECK(a.state.alpha_trajectory == b.state.alpha_trajectory);
  CHECK(a.state.mse_trajectory == b.state.mse_trajectory);
}

TEST_CASE("per-iteration combiners match dense inversion along the trajectory") {
  const ScenarioConfig cfg = test::default_scenario(76);
  const Constellation c = make_constellation(4);
  const test::TrialData d = test::make_trial(cfg, 1);
  const FitResult fit = fit_iterative(d.prep, d.pilot_block, d.pilots, d.data_block, c);
  const Eigen::MatrixXcd rhs =
      d.pilot_block.received * d.pilots.p / static_cast<double>(cfg.pilot_len);
  for (double alpha : fit.state.alpha_trajectory) {
    const CombinerSet fast = direct_estimate(d.prep, d.pilot_block, d.pilots, alpha);
    const Eigen::MatrixXcd dense = r_of_alpha(d.prep, alpha).partialPivLu().solve(rhs);
    CHECK((fast.w - dense).norm() / dense.norm() <= 1e-9);
  }
}

TEST_CASE("stochastic-subset gradient still improves the objective") {
  ScenarioConfig cfg = test::default_scenario(77);
  cfg.ue_tx_power_dbm = {14.0};
  const Constellation c = make_constellation(4);
  const test::TrialData d = test::make_trial(cfg, 2);

  FitOptions opts;
  opts.gradient_subset = 100;
  opts.subset_seed = 42;
  const FitResult fit =
      fit_iterative(d.prep, d.pilot_block, d.pilots, d.data_block, c, opts);
  CHECK(fit.alpha >= 0.0);
  CHECK(fit.alpha <= 1.0);

  const double at_zero = mse_at(d, 0.0, decisions_at(d, c, 0.0));
  const double at_fit = mse_at(d, fit.alpha, decisions_at(d, c, fit.alpha));
  CHECK(at_fit <= at_zero + 1e-12);

  // Same subset seed reproduces the trajectory.
  const FitResult again =
      fit_iterative(d.prep, d.pilot_block, d.pilots, d.data_block, c, opts);
  CHECK(again.state.alpha_trajectory == fit.state.alpha_trajectory);
}

TEST_CASE("exhaustive genie on a fabricated 3-point grid") {
  // Hand-built instance whose genie objective strictly decreases in alpha:
  // Q = diag(0.5, 2), so R(alpha) = diag(0.5 + 0.75a, 2 - 0.75a), and with
  // y = [1, 0] the soft output is 1/(1 + 1.5a), matched to 0.4 at alpha = 1.
  SignalBlock yp;
  yp.phase = Phase::pilot;
  yp.received.resize(2, 2);
  yp.received << cd{1, 0}, cd{0, 0}, cd{0, 0}, cd{2, 0};
  yp.truth_symbols = Eigen::MatrixXcd::Zero(2, 1);
  PilotMatrix pm;
  pm.p = Eigen::MatrixXcd::Ones(2, 1);
  SignalBlock yd;
  yd.phase = Phase::data;
  yd.received = Eigen::MatrixXcd::Zero(2, 1);
  yd.received(0, 0) = cd{1, 0};
  yd.truth_symbols = Eigen::MatrixXcd::Constant(1, 1, cd{0.4, 0.0});

  const ShrinkagePrep prep = build_prep(yp);
  GenieOptions opts;
  opts.grid_step = 0.5;
  const double alpha =
      fit_exhaustive_genie(prep, yp, pm, yd, yd.truth_symbols, opts);
  CHECK(alpha == 1.0);
}

TEST_CASE("genie grid refinement is stable") {
  const ScenarioConfig cfg = test::default_scenario(78);
  for (std::uint64_t t = 0; t < 5; ++t) {
    const test::TrialData d = test::make_trial(cfg, t);
    GenieOptions coarse, fine;
    coarse.grid_step = 0.01;
    fine.grid_step = 0.001;
    const double a =
        fit_exhaustive_genie(d.prep, d.pilot_block, d.pilots, d.data_block, d.data_symbols, coarse);
    const double b =
        fit_exhaustive_genie(d.prep, d.pilot_block, d.pilots, d.data_block, d.data_symbols, fine);
    CHECK(std::abs(a - b) <= 0.01 + 1e-12);
  }
}

TEST_CASE("genie grid point dominates the iterative alpha snapped to its grid") {
  ScenarioConfig cfg = test::default_scenario(79);
  cfg.ue_tx_power_dbm = {6.0};  // imperfect decisions separate the objectives
  const Constellation c = make_constellation(4);
  const double step = 0.01;
  for (std::uint64_t t = 0; t < 5; ++t) {
    const test::TrialData d = test::make_trial(cfg, t);
    const double genie_alpha = fit_exhaustive_genie(d.prep, d.pilot_block, d.pilots,
                                                    d.data_block, d.data_symbols, {});
    const FitResult fit = fit_iterative(d.prep, d.pilot_block, d.pilots, d.data_block, c);
    // The grid argmin dominates every grid point; the iterative alpha enters
    // the comparison through its nearest grid point.
    const double snapped = std::clamp(std::round(fit.alpha / step) * step, 0.0, 1.0);
    const double genie_at_genie = sample_mse(
        d.data_block.received,
        direct_estimate(d.prep, d.pilot_block, d.pilots, genie_alpha).w, d.data_symbols);
    const double genie_at_snapped = sample_mse(
        d.data_block.received,
        direct_estimate(d.prep, d.pilot_block, d.pilots, snapped).w, d.data_symbols);
    CHECK(genie_at_genie <= genie_at_snapped * (1.0 + 1e-9));
  }
}

TEST_CASE("ser-objective genie returns a valid coefficient") {
  const ScenarioConfig cfg = test::default_scenario(80);
  const test::TrialData d = test::make_trial(cfg, 0);
  GenieOptions opts;
  opts.objective = GenieObjective::ser;
  const double alpha =
      fit_exhaustive_genie(d.prep, d.pilot_block, d.pilots, d.data_block, d.data_symbols, opts);
  CHECK(alpha >= 0.0);
  CHECK(alpha <= 1.0);
}
