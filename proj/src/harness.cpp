// SPDX-License-Identifier: Apache-2.0
#include "shrinkcomb/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "shrinkcomb/rng.hpp"

namespace shrinkcomb {

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods = {
      Method::no_reg, Method::reg_data, Method::reg_data_iter, Method::reg_exh,
      Method::perfect_csi};
  return methods;
}

std::string method_name(Method m) {
  switch (m) {
    case Method::no_reg: return "no_reg";
    case Method::reg_data: return "reg_data";
    case Method::reg_data_iter: return "reg_data_iter";
    case Method::reg_exh: return "reg_exh";
    case Method::perfect_csi: return "perfect_csi";
  }
  throw std::logic_error("method_name: unknown method");
}

Method method_from_name(const std::string& name) {
  for (Method m : all_methods()) {
    if (method_name(m) == name) return m;
  }
  throw std::invalid_argument("unknown method name: " + name);
}

std::string sweep_kind_name(SweepKind k) {
  return k == SweepKind::ue_power_dbm ? "ue_power_dbm" : "pilot_len";
}

SweepKind sweep_kind_from_name(const std::string& name) {
  if (name == "ue_power_dbm") return SweepKind::ue_power_dbm;
  if (name == "pilot_len") return SweepKind::pilot_len;
  throw std::invalid_argument("unknown sweep kind: " + name);
}

namespace {

struct TrialBlocks {
  ChannelRealization chan;
  PilotMatrix pilots;
  Eigen::MatrixXcd data_symbols;
  SignalBlock pilot_block;
  SignalBlock data_block;
  ShrinkagePrep prep;
};

TrialBlocks draw_trial(const ScenarioConfig& cfg, std::uint64_t seed) {
  TrialBlocks b;
  b.chan = draw_channels(cfg, seed);
  b.pilots = make_pilots(cfg.pilot_len, cfg.num_ues);
  b.data_symbols = draw_data_symbols(cfg, seed);
  b.pilot_block = synthesize(Phase::pilot, cfg, b.chan, b.pilots.p, seed);
  b.data_block = synthesize(Phase::data, cfg, b.chan, b.data_symbols, seed);
  b.prep = build_prep(b.pilot_block);
  return b;
}

MethodOutcome run_method(const RunConfig& run, const ScenarioConfig& cfg,
                         Method m, const TrialBlocks& b,
                         std::uint64_t trial_seed) {
  MethodOutcome out;
  const Constellation c = make_constellation(cfg.constellation_order);
  CombinerSet w;
  switch (m) {
    case Method::no_reg: {
      w = direct_estimate(b.prep, b.pilot_block, b.pilots, 0.0);
      out.alpha = 0.0;
      break;
    }
    case Method::reg_data: {
      const AlphaEstimate est = alpha_from_data(b.prep, b.data_block);
      w = direct_estimate(b.prep, b.pilot_block, b.pilots, est.alpha);
      out.alpha = est.alpha;
      out.clamp_events = est.clamped ? 1 : 0;
      break;
    }
    case Method::reg_data_iter: {
      FitOptions opts = run.fit;
      opts.subset_seed = trial_seed;
      const FitResult fit = fit_iterative(b.prep, b.pilot_block, b.pilots,
                                          b.data_block, c, opts);
      w = direct_estimate(b.prep, b.pilot_block, b.pilots, fit.alpha);
      out.alpha = fit.alpha;
      out.iterations = fit.state.iterations;
      out.clamp_events = fit.state.clamp_events;
      if (run.trace) {
        out.trace_alpha = fit.state.alpha_trajectory;
        out.trace_mse = fit.state.mse_trajectory;
        out.trace_beta = fit.state.beta_used;
        out.trace_beta.insert(out.trace_beta.begin(), 0.0);  // iteration 0 row
      }
      break;
    }
    case Method::reg_exh: {
      GenieOptions gopts = run.genie;
      gopts.constellation_order = cfg.constellation_order;
      const double alpha = fit_exhaustive_genie(b.prep, b.pilot_block, b.pilots,
                                                b.data_block, b.data_symbols, gopts);
      w = direct_estimate(b.prep, b.pilot_block, b.pilots, alpha);
      out.alpha = alpha;
      break;
    }
    case Method::perfect_csi: {
      w = perfect_csi_combiner(b.chan, ue_power_vector(cfg),
                               dbm_to_linear(cfg.noise_power_dbm), run.csi_kind);
      break;
    }
  }
  const DetectionResult det =
      detect_block(b.data_block.received, w.w, c, &b.data_symbols);
  out.errors_per_ue = det.errors_per_ue;
  for (long e : det.errors_per_ue) out.symbol_errors += e;
  return out;
}

}  // namespace

TrialOutcome run_trial(const RunConfig& run, const ScenarioConfig& cfg,
                       std::uint64_t trial_index) {
  cfg.validate();
  const std::uint64_t trial_seed = derive_trial_seed(cfg.master_seed, trial_index);

  TrialOutcome outcome;
  for (int attempt = 0; attempt <= run.max_resample_attempts; ++attempt) {
    const std::uint64_t seed =
        attempt == 0 ? trial_seed
                     : derive_resample_seed(trial_seed, static_cast<std::uint64_t>(attempt));
    const TrialBlocks blocks = draw_trial(cfg, seed);

    outcome.per_method.clear();
    bool any_singular = false;
    for (Method m : run.methods) {
      try {
        outcome.per_method[m] = run_method(run, cfg, m, blocks, seed);
      } catch (const SingularCovarianceError&) {
        any_singular = true;
        MethodOutcome failed;
        failed.failed = true;
        failed.errors_per_ue.assign(static_cast<size_t>(cfg.num_ues), 0);
        outcome.per_method[m] = failed;
      }
    }
    if (!any_singular || attempt == run.max_resample_attempts) {
      return outcome;
    }
    ++outcome.resamples;
  }
  return outcome;  // unreachable
}

SweepResult run_sweep(const RunConfig& run, int num_threads) {
  run.scenario.validate();
  if (run.sweep.values.empty()) {
    throw std::invalid_argument("run_sweep: sweep has no points");
  }
  if (run.trials < 1) throw std::invalid_argument("run_sweep: trials must be >= 1");
  const int workers =
      std::max(1, std::min(num_threads, run.trials));

  SweepResult result;
  for (double value : run.sweep.values) {
    ScenarioConfig cfg = run.scenario;
    if (run.sweep.kind == SweepKind::ue_power_dbm) {
      cfg.ue_tx_power_dbm = {value};
    } else {
      cfg.pilot_len = static_cast<int>(std::lround(value));
    }
    cfg.validate();

    const auto start = std::chrono::steady_clock::now();
    std::vector<TrialOutcome> outcomes(static_cast<size_t>(run.trials));
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&] {
      for (;;) {
        const int t = next.fetch_add(1);
        if (t >= run.trials) return;
        try {
          outcomes[static_cast<size_t>(t)] =
              run_trial(run, cfg, static_cast<std::uint64_t>(t));
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    };
    if (workers == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      pool.reserve(static_cast<size_t>(workers));
      for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    // Deterministic reduction in trial order.
    for (Method m : run.methods) {
      SweepRecord rec;
      rec.method = m;
      rec.sweep_kind = run.sweep.kind;
      rec.sweep_value = value;
      rec.wallclock_s = elapsed;
      std::vector<long> per_ue(static_cast<size_t>(cfg.num_ues), 0);
      double alpha_sum = 0.0;
      long alpha_count = 0;
      double iter_sum = 0.0;
      long iter_count = 0;
      for (int t = 0; t < run.trials; ++t) {
        const MethodOutcome& mo = outcomes[static_cast<size_t>(t)].per_method.at(m);
        if (mo.failed) {
          ++result.failed_trials;
          continue;
        }
        ++rec.trials;
        rec.symbol_errors += mo.symbol_errors;
        for (size_t k = 0; k < per_ue.size(); ++k) per_ue[k] += mo.errors_per_ue[k];
        if (mo.alpha) {
          alpha_sum += *mo.alpha;
          ++alpha_count;
        }
        if (mo.iterations) {
          iter_sum += *mo.iterations;
          ++iter_count;
        }
        result.clamp_events += mo.clamp_events;
        if (run.trace && m == Method::reg_data_iter) {
          for (size_t i = 0; i < mo.trace_alpha.size(); ++i) {
            result.traces.push_back(TraceRecord{value, t, static_cast<int>(i),
                                                mo.trace_alpha[i], mo.trace_mse[i],
                                                mo.trace_beta[i]});
          }
        }
      }
      rec.total_symbols =
          rec.trials * static_cast<long>(cfg.data_len) * static_cast<long>(cfg.num_ues);
      rec.ser = rec.total_symbols == 0
                    ? 0.0
                    : static_cast<double>(rec.symbol_errors) /
                          static_cast<double>(rec.total_symbols);
      if (alpha_count > 0) rec.mean_alpha = alpha_sum / static_cast<double>(alpha_count);
      if (iter_count > 0) rec.mean_iterations = iter_sum / static_cast<double>(iter_count);
      result.records.push_back(rec);

      for (int k = 0; k < cfg.num_ues; ++k) {
        result.per_ue.push_back(PerUeRecord{m, value, k, per_ue[static_cast<size_t>(k)],
                                            rec.trials * static_cast<long>(cfg.data_len)});
      }
    }
    for (int t = 0; t < run.trials; ++t) {
      if (outcomes[static_cast<size_t>(t)].resamples > 0) ++result.resampled_trials;
    }
  }
  return result;
}

}  // namespace shrinkcomb
