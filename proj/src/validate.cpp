// SPDX-License-Identifier: Apache-2.0
#include "shrinkcomb/validate.hpp"

#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>

#include "shrinkcomb/csv.hpp"
#include "shrinkcomb/harness.hpp"
#include "shrinkcomb/rng.hpp"

namespace shrinkcomb {

namespace {

ScenarioConfig small_scenario(std::uint64_t seed) {
  ScenarioConfig cfg;
  cfg.data_len = 200;
  cfg.master_seed = seed;
  return cfg;
}

struct Suite {
  std::ostream& out;
  std::ostream& err;
  int failures = 0;

  void check(const std::string& name, const std::function<bool(std::string&)>& fn) {
    std::string detail;
    bool ok = false;
    try {
      ok = fn(detail);
    } catch (const std::exception& e) {
      detail = e.what();
    }
    if (ok) {
      out << "ok " << name << "\n";
    } else {
      ++failures;
      err << "error: {\"check\":\"" << name << "\",\"detail\":\"" << detail << "\"}\n";
    }
  }
};

}  // namespace

int run_validation(std::uint64_t seed, std::ostream& out, std::ostream& err) {
  Suite suite{out, err};

  suite.check("pilot_orthogonality", [](std::string& detail) {
    const PilotMatrix pm = make_pilots(8, 6);
    const Eigen::MatrixXcd gram = pm.p.adjoint() * pm.p;
    const double res = (gram - 8.0 * Eigen::MatrixXcd::Identity(6, 6)).norm();
    detail = "residual " + std::to_string(res);
    return res < 1e-10;
  });

  suite.check("constellation_unit_energy", [](std::string& detail) {
    for (int order : {4, 16, 64}) {
      const Constellation c = make_constellation(order);
      double mean = 0.0;
      for (auto p : c.points) mean += std::norm(p);
      mean /= static_cast<double>(order);
      if (std::abs(mean - 1.0) > 1e-12) {
        detail = "order " + std::to_string(order) + " mean " + std::to_string(mean);
        return false;
      }
    }
    return true;
  });

  suite.check("psi_structure", [&](std::string& detail) {
    ScenarioConfig cfg = small_scenario(seed);
    cfg.interferers.push_back({std::nullopt, -5.0});
    const ChannelRealization chan = draw_channels(cfg, derive_trial_seed(seed, 0));
    const double herm = (chan.psi - chan.psi.adjoint()).norm();
    const double sigma2 = dbm_to_linear(cfg.noise_power_dbm);
    Eigen::MatrixXcd rebuilt =
        sigma2 * Eigen::MatrixXcd::Identity(chan.psi.rows(), chan.psi.cols());
    for (int j = 0; j < chan.interferer_h.cols(); ++j) {
      rebuilt += chan.interferer_power_mw[static_cast<size_t>(j)] *
                 chan.interferer_h.col(j) * chan.interferer_h.col(j).adjoint();
    }
    const double recon = (chan.psi - rebuilt).norm() / chan.psi.norm();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(chan.psi);
    const double min_eig = es.eigenvalues().minCoeff();
    detail = "herm " + std::to_string(herm) + " recon " + std::to_string(recon);
    return herm == 0.0 && recon < 1e-12 && min_eig >= sigma2 - 1e-12;
  });

  suite.check("channel_determinism", [&](std::string&) {
    const ScenarioConfig cfg = small_scenario(seed);
    const auto a = draw_channels(cfg, derive_trial_seed(seed, 7));
    const auto b = draw_channels(cfg, derive_trial_seed(seed, 7));
    return a.h == b.h && a.psi == b.psi && a.interferer_h == b.interferer_h;
  });

  suite.check("prep_invariants", [&](std::string& detail) {
    const ScenarioConfig cfg = small_scenario(seed);
    for (std::uint64_t t = 0; t < 5; ++t) {
      const std::uint64_t ts = derive_trial_seed(cfg.master_seed, t);
      const auto chan = draw_channels(cfg, ts);
      const auto pm = make_pilots(cfg.pilot_len, cfg.num_ues);
      const auto yp = synthesize(Phase::pilot, cfg, chan, pm.p, ts);
      const ShrinkagePrep prep = build_prep(yp);
      const double tr_s = std::abs(prep.s.trace());
      const Eigen::MatrixXcd recon = prep.eigvecs * prep.eigvals.asDiagonal() *
                                     prep.eigvecs.adjoint();
      const double rel = (recon - prep.q).norm() / prep.q.norm();
      if (tr_s > 1e-10 * prep.q.trace().real() || rel > 1e-10) {
        detail = "tr(S) " + std::to_string(tr_s) + " recon " + std::to_string(rel);
        return false;
      }
    }
    return true;
  });

  suite.check("eigencache_vs_dense", [&](std::string& detail) {
    const ScenarioConfig cfg = small_scenario(seed);
    for (std::uint64_t t = 0; t < 5; ++t) {
      const std::uint64_t ts = derive_trial_seed(cfg.master_seed, t + 100);
      const auto chan = draw_channels(cfg, ts);
      const auto pm = make_pilots(cfg.pilot_len, cfg.num_ues);
      const auto yp = synthesize(Phase::pilot, cfg, chan, pm.p, ts);
      const ShrinkagePrep prep = build_prep(yp);
      const Eigen::MatrixXcd x = yp.received * pm.p;
      for (double alpha = 0.1; alpha <= 1.0; alpha += 0.1) {
        const Eigen::MatrixXcd fast = apply_r_inverse(prep, alpha, x);
        const Eigen::MatrixXcd dense = r_of_alpha(prep, alpha).partialPivLu().solve(x);
        const double rel = (fast - dense).norm() / dense.norm();
        if (rel > 1e-9) {
          detail = "alpha " + std::to_string(alpha) + " rel " + std::to_string(rel);
          return false;
        }
      }
    }
    return true;
  });

  suite.check("closed_form_alpha_vs_grid", [&](std::string& detail) {
    const ScenarioConfig cfg = small_scenario(seed);
    const double step = 1e-3;
    for (std::uint64_t t = 0; t < 5; ++t) {
      const std::uint64_t ts = derive_trial_seed(cfg.master_seed, t + 200);
      const auto chan = draw_channels(cfg, ts);
      const auto pm = make_pilots(cfg.pilot_len, cfg.num_ues);
      const auto yp = synthesize(Phase::pilot, cfg, chan, pm.p, ts);
      const ShrinkagePrep prep = build_prep(yp);
      const Eigen::MatrixXcd target =
          chan.h * ue_power_vector(cfg).asDiagonal() * chan.h.adjoint() + chan.psi;
      const AlphaEstimate est = alpha_against_target(prep, target);
      double best_alpha = 0.0, best = std::numeric_limits<double>::infinity();
      for (long i = 0; i <= 1000; ++i) {
        const double a = static_cast<double>(i) * step;
        const double obj = (r_of_alpha(prep, a) - target).squaredNorm();
        if (obj < best) {
          best = obj;
          best_alpha = a;
        }
      }
      if (std::abs(est.alpha - best_alpha) > step + 1e-12) {
        detail = "closed " + std::to_string(est.alpha) + " grid " + std::to_string(best_alpha);
        return false;
      }
    }
    return true;
  });

  suite.check("gradient_vs_finite_difference", [&](std::string& detail) {
    const ScenarioConfig cfg = small_scenario(seed);
    const Constellation c = make_constellation(cfg.constellation_order);
    const double h = 1e-6;
    for (std::uint64_t t = 0; t < 5; ++t) {
      const std::uint64_t ts = derive_trial_seed(cfg.master_seed, t + 300);
      const auto chan = draw_channels(cfg, ts);
      const auto pm = make_pilots(cfg.pilot_len, cfg.num_ues);
      const auto yp = synthesize(Phase::pilot, cfg, chan, pm.p, ts);
      const auto dtrue = draw_data_symbols(cfg, ts);
      const auto yd = synthesize(Phase::data, cfg, chan, dtrue, ts);
      const ShrinkagePrep prep = build_prep(yp);
      for (double alpha : {0.1, 0.5, 0.9}) {
        const CombinerSet w = direct_estimate(prep, yp, pm, alpha);
        const Eigen::MatrixXcd hard =
            hard_decide_all(soft_estimate_all(yd.received, w), c);
        const double g = mse_gradient(prep, yp, pm, yd.received, hard, alpha);
        const CombinerSet wp = direct_estimate(prep, yp, pm, alpha + h);
        const CombinerSet wm = direct_estimate(prep, yp, pm, alpha - h);
        const double fd = (sample_mse(yd.received, wp.w, hard) -
                           sample_mse(yd.received, wm.w, hard)) /
                          (2.0 * h);
        const double rel = std::abs(g - fd) / std::max({std::abs(g), std::abs(fd), 1e-9});
        if (rel > 1e-4) {
          detail = "alpha " + std::to_string(alpha) + " rel " + std::to_string(rel);
          return false;
        }
      }
    }
    return true;
  });

  suite.check("detection_invariants", [&](std::string& detail) {
    const Constellation c = make_constellation(4);
    Rng rng(seed, StreamPurpose::data_symbols);
    // idempotence + elementwise equals joint argmin over 4^3 sequences
    for (int rep = 0; rep < 50; ++rep) {
      Eigen::VectorXcd soft(3);
      for (int t = 0; t < 3; ++t) {
        soft(t) = 2.0 * rng.complex_normal();
      }
      const Eigen::VectorXcd hard = hard_decide(soft, c);
      if (hard_decide(hard, c) != hard) {
        detail = "idempotence violated";
        return false;
      }
      double best = std::numeric_limits<double>::infinity();
      Eigen::VectorXcd best_seq(3);
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          for (int d = 0; d < 4; ++d) {
            Eigen::VectorXcd cand(3);
            cand << c.points[static_cast<size_t>(a)], c.points[static_cast<size_t>(b)],
                c.points[static_cast<size_t>(d)];
            const double obj = (soft - cand).squaredNorm();
            if (obj < best) {
              best = obj;
              best_seq = cand;
            }
          }
      if (best_seq != hard) {
        detail = "joint argmin mismatch";
        return false;
      }
    }
    return true;
  });

  suite.check("sample_mse_dual_formula", [&](std::string& detail) {
    const ScenarioConfig cfg = small_scenario(seed);
    const Constellation c = make_constellation(cfg.constellation_order);
    const std::uint64_t ts = derive_trial_seed(cfg.master_seed, 400);
    const auto chan = draw_channels(cfg, ts);
    const auto pm = make_pilots(cfg.pilot_len, cfg.num_ues);
    const auto yp = synthesize(Phase::pilot, cfg, chan, pm.p, ts);
    const auto dtrue = draw_data_symbols(cfg, ts);
    const auto yd = synthesize(Phase::data, cfg, chan, dtrue, ts);
    const ShrinkagePrep prep = build_prep(yp);
    for (double alpha : {0.05, 0.3, 0.7}) {
      const CombinerSet w = direct_estimate(prep, yp, pm, alpha);
      const Eigen::MatrixXcd hard = hard_decide_all(soft_estimate_all(yd.received, w), c);
      const double a = sample_mse(yd.received, w.w, hard);
      const double b = sample_mse_trace(prep, yp, pm, alpha, yd.received, hard);
      if (std::abs(a - b) / std::max(a, 1e-30) > 1e-9) {
        detail = "residual " + std::to_string(a) + " trace " + std::to_string(b);
        return false;
      }
    }
    return true;
  });

  suite.check("power_scale_invariance", [&](std::string& detail) {
    RunConfig run;
    run.scenario = small_scenario(seed);
    run.trials = 1;
    ScenarioConfig scaled = run.scenario;
    const double shift_db = 10.0;  // scales every power by 10x
    scaled.ue_tx_power_dbm = {run.scenario.ue_tx_power_dbm[0] + shift_db};
    scaled.noise_power_dbm += shift_db;
    for (std::uint64_t t = 0; t < 3; ++t) {
      const TrialOutcome a = run_trial(run, run.scenario, t);
      const TrialOutcome b = run_trial(run, scaled, t);
      for (Method m : {Method::no_reg, Method::perfect_csi}) {
        if (a.per_method.at(m).symbol_errors != b.per_method.at(m).symbol_errors) {
          detail = method_name(m) + " errors differ under power scaling";
          return false;
        }
      }
    }
    return true;
  });

  suite.check("sweep_thread_invariance", [&](std::string& detail) {
    RunConfig run;
    run.scenario = small_scenario(seed);
    run.trials = 12;
    run.sweep = SweepSpec{SweepKind::ue_power_dbm, {10.0, 18.0}};
    SweepResult r1 = run_sweep(run, 1);
    SweepResult r2 = run_sweep(run, 2);
    for (auto& rec : r1.records) rec.wallclock_s = 0.0;
    for (auto& rec : r2.records) rec.wallclock_s = 0.0;
    const std::string csv1 = records_to_csv(r1.records);
    const std::string csv2 = records_to_csv(r2.records);
    detail = "csv outputs differ between 1 and 2 workers";
    return csv1 == csv2;
  });

  suite.check("perfect_csi_max_sinr", [&](std::string& detail) {
    const ScenarioConfig cfg = small_scenario(seed);
    const Eigen::VectorXd rho = ue_power_vector(cfg);
    for (std::uint64_t t = 0; t < 10; ++t) {
      const std::uint64_t ts = derive_trial_seed(cfg.master_seed, t + 500);
      const auto chan = draw_channels(cfg, ts);
      const auto pm = make_pilots(cfg.pilot_len, cfg.num_ues);
      const auto yp = synthesize(Phase::pilot, cfg, chan, pm.p, ts);
      const ShrinkagePrep prep = build_prep(yp);
      const CombinerSet ideal = perfect_csi_combiner(chan, rho, dbm_to_linear(cfg.noise_power_dbm));
      const CombinerSet direct = direct_estimate(prep, yp, pm, 0.0);
      auto sinr = [&](const Eigen::VectorXcd& w, int k) {
        const double sig = rho(k) * std::norm(w.dot(chan.h.col(k)));
        Eigen::MatrixXcd inter = chan.psi;
        for (int k2 = 0; k2 < cfg.num_ues; ++k2) {
          if (k2 == k) continue;
          inter += rho(k2) * chan.h.col(k2) * chan.h.col(k2).adjoint();
        }
        return sig / (w.adjoint() * inter * w)(0, 0).real();
      };
      for (int k = 0; k < cfg.num_ues; ++k) {
        if (sinr(ideal.w.col(k), k) + 1e-9 < sinr(direct.w.col(k), k)) {
          detail = "direct combiner beat the ideal baseline at UE " + std::to_string(k);
          return false;
        }
      }
    }
    return true;
  });

  return suite.failures;
}

}  // namespace shrinkcomb
