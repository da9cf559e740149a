// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shrinkcomb/scenario.hpp"
#include "shrinkcomb/shrinkfit.hpp"

namespace shrinkcomb {

enum class Method { no_reg, reg_data, reg_data_iter, reg_exh, perfect_csi };

const std::vector<Method>& all_methods();
std::string method_name(Method m);
Method method_from_name(const std::string& name);

enum class SweepKind { ue_power_dbm, pilot_len };
std::string sweep_kind_name(SweepKind k);
SweepKind sweep_kind_from_name(const std::string& name);

struct SweepSpec {
  SweepKind kind = SweepKind::ue_power_dbm;
  std::vector<double> values;
};

struct RunConfig {
  ScenarioConfig scenario;
  SweepSpec sweep;
  int trials = 2000;
  std::vector<Method> methods = all_methods();
  FitOptions fit;
  GenieOptions genie;
  CsiCombinerKind csi_kind = CsiCombinerKind::mmse;
  int max_resample_attempts = 3;
  bool trace = false;
};

struct MethodOutcome {
  bool failed = false;  // singular after all resample attempts
  long symbol_errors = 0;
  std::vector<long> errors_per_ue;
  std::optional<double> alpha;
  std::optional<int> iterations;
  int clamp_events = 0;
  std::vector<double> trace_alpha;  // populated only when tracing
  std::vector<double> trace_mse;
  std::vector<double> trace_beta;
};

struct TrialOutcome {
  std::map<Method, MethodOutcome> per_method;
  int resamples = 0;
};

// One channel/pilot/data draw shared by every requested method.
TrialOutcome run_trial(const RunConfig& run, const ScenarioConfig& cfg,
                       std::uint64_t trial_index);

struct SweepRecord {
  Method method = Method::no_reg;
  SweepKind sweep_kind = SweepKind::ue_power_dbm;
  double sweep_value = 0.0;
  long trials = 0;
  long symbol_errors = 0;
  long total_symbols = 0;
  double ser = 0.0;
  std::optional<double> mean_alpha;
  std::optional<double> mean_iterations;
  double wallclock_s = 0.0;
};

struct PerUeRecord {
  Method method;
  double sweep_value;
  int ue;
  long symbol_errors;
  long total_symbols;
};

struct TraceRecord {
  double sweep_value;
  long trial;
  int iteration;
  double alpha;
  double mse;
  double beta;
};

struct SweepResult {
  std::vector<SweepRecord> records;
  std::vector<PerUeRecord> per_ue;
  std::vector<TraceRecord> traces;
  long failed_trials = 0;
  long resampled_trials = 0;
  long clamp_events = 0;
};

// Runs `trials` paired trials at every sweep point. Trial decomposition is
// per-index, so results do not depend on the worker count.
SweepResult run_sweep(const RunConfig& run, int num_threads = 1);

}  // namespace shrinkcomb
