#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "plastic/dataset.hpp"
#include "plastic/mlp.hpp"
#include "plastic/objective.hpp"
#include "plastic/optimizers.hpp"
#include "plastic/probes.hpp"
#include "plastic/tasks.hpp"

namespace plastic {

/// The six benchmark settings: {SGD, SAM, GNP} x alpha {0.01, 0.001}, with
/// lambda = 0.1 on the regularized optimizers.
std::vector<OptimizerConfig> default_settings();

/// Full protocol recipe: which stream, which training settings, how many
/// seeded repetitions, and the training/probing knobs.
struct ExperimentConfig {
  StreamConfig stream;
  std::vector<OptimizerConfig> settings = default_settings();
  int n_seeds = 10;
  int epochs_per_task = 1;
  int batch_size = 64;
  int hidden_width = 100;
  /// Probe the top Hessian eigenvalue after every Nth task (0 = off).
  int probe_every = 0;
  /// Examples per sharpness probe batch, sampled from the task's test split.
  int probe_batch_size = 512;
  std::uint64_t master_seed = 1729;
  /// Ablation switch: reinitialize the network before every task instead of
  /// carrying weights across tasks.
  bool reset_per_task = false;

  void validate() const;
};

/// A probe result tied to the task it was taken after.
struct ProbePoint {
  int task_id = 0;
  SharpnessReport report;
};

/// Everything observed during one (setting, seed) run.
struct RunRecord {
  std::string setting_label;
  int seed = 0;
  /// Task-specific test accuracy after training on each task, in stream
  /// order. Shorter than the stream length iff the run failed.
  std::vector<double> per_task_accuracy;
  std::vector<ProbePoint> sharpness;
  int probe_batch_size = 0;  ///< recorded identity of the probe batches (0 = unprobed)
  long degenerate_step_count = 0;
  EvalCounts counts;  ///< differentiation work across the whole run
  /// Network state after the last completed task (checkpointing, probes).
  ParamSet final_params;
  bool failed = false;
  int failed_task_id = 0;
  std::string failure_message;
};

/// Progress callback payload, emitted once per finished task.
struct RunProgress {
  std::string setting_label;
  int seed = 0;
  int task_id = 0;
  int n_tasks = 0;
  double accuracy = 0.0;
};
using ProgressFn = std::function<void(const RunProgress&)>;

/// One run: a fresh network trained across the whole stream under one
/// setting. Within an experiment seed the stream is identical for every
/// setting, so the optimizer is the only varying factor. A NumericError mid
/// stream marks the record failed at that task instead of propagating.
///
/// Deterministic seeding contract (all via RngStream keys, replayable
/// anywhere): the stream's master seed is
/// rng(config.master_seed, "stream", seed).next_u64(); initial weights come
/// from rng(seed, "init", 0) (reset_per_task reinitializes task t > 1 from
/// rng(seed, "init", t-1)); the example order of the e-th epoch overall is
/// shuffled by rng(seed, "shuffle", e); probe batches use one selector list
/// from rng(seed, "probe", 0) and start vectors from
/// rng(seed, "probe_v", task_id). Architecture: input, three hidden layers
/// of hidden_width, and one output unit per task class.
RunRecord run_setting(const ExperimentConfig& config, const Dataset& train,
                      const Dataset& test, const OptimizerConfig& setting,
                      int seed, const ProgressFn& progress = nullptr);

/// Every (setting, seed) pair, settings-major and seed-minor (seeds run
/// 1..n_seeds). Runs are independent and execute on n_threads workers; the
/// returned order is deterministic regardless of scheduling. The progress
/// callback is serialized internally.
std::vector<RunRecord> run_suite(const ExperimentConfig& config,
                                 const Dataset& train, const Dataset& test,
                                 int n_threads = 1,
                                 const ProgressFn& progress = nullptr);

/// Mean successive difference of a task-accuracy sequence, which telescopes
/// to (last - first)/(len - 1). The plasticity summary statistic.
double mean_per_task_change(std::span<const double> per_task_accuracy);

/// Least-squares slope of accuracy over task index; reported alongside
/// mean_per_task_change as a noise-robust companion.
double trend_slope(std::span<const double> per_task_accuracy);

}  // namespace plastic
