#include "plastic/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>
#include <utility>

#include "plastic/errors.hpp"
#include "plastic/mlp.hpp"

namespace plastic {
namespace {

constexpr int kEvalChunk = 512;

// Accuracy on the task's held-out split, evaluated in chunks so the full
// split is never materialized as doubles at once.
double task_accuracy(const ParamSet& params, const Task& task, LabeledBatch& buf) {
  const int ts = task.split_size(Split::Test);
  int correct = 0;
  std::vector<int> rows;
  for (int start = 0; start < ts; start += kEvalChunk) {
    const int end = std::min(ts, start + kEvalChunk);
    rows.resize(static_cast<std::size_t>(end - start));
    std::iota(rows.begin(), rows.end(), start);
    gather_examples(task, Split::Test, rows, buf);
    correct += correct_count(params, buf);
  }
  return static_cast<double>(correct) / ts;
}

}  // namespace

std::vector<OptimizerConfig> default_settings() {
  std::vector<OptimizerConfig> settings(6);
  const double alphas[2] = {0.01, 0.001};
  for (int i = 0; i < 2; ++i) {
    settings[static_cast<std::size_t>(i)].kind = OptimizerKind::SGD;
    settings[static_cast<std::size_t>(i)].alpha = alphas[i];
    settings[static_cast<std::size_t>(i)].lambda = 0.0;
    settings[static_cast<std::size_t>(2 + i)].kind = OptimizerKind::SAM;
    settings[static_cast<std::size_t>(2 + i)].alpha = alphas[i];
    settings[static_cast<std::size_t>(2 + i)].lambda = 0.1;
    settings[static_cast<std::size_t>(4 + i)].kind = OptimizerKind::GNP;
    settings[static_cast<std::size_t>(4 + i)].alpha = alphas[i];
    settings[static_cast<std::size_t>(4 + i)].lambda = 0.1;
  }
  return settings;
}

void ExperimentConfig::validate() const {
  if (settings.empty()) throw ConfigError("experiment needs at least one setting");
  for (const OptimizerConfig& s : settings) s.validate();
  if (n_seeds < 1) throw ConfigError("n_seeds must be >= 1");
  if (epochs_per_task < 1) throw ConfigError("epochs_per_task must be >= 1");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (hidden_width < 1) throw ConfigError("hidden_width must be >= 1");
  if (probe_every < 0) throw ConfigError("probe_every must be >= 0");
  if (probe_batch_size < 1) throw ConfigError("probe_batch_size must be >= 1");
  if (stream.n_tasks < 0) throw ConfigError("n_tasks must be >= 0");
}

RunRecord run_setting(const ExperimentConfig& config, const Dataset& train,
                      const Dataset& test, const OptimizerConfig& setting,
                      int seed, const ProgressFn& progress) {
  config.validate();
  setting.validate();
  const std::uint64_t seedu = static_cast<std::uint64_t>(seed);

  // The stream depends only on (master_seed, seed), never on the setting, so
  // every setting sees identical tasks within one seed.
  StreamConfig sc = config.stream;
  sc.master_seed = RngStream(config.master_seed, "stream", seedu).next_u64();
  const std::vector<Task> tasks = build_stream(sc, train, test);
  const int n_tasks = static_cast<int>(tasks.size());

  const int n_classes = config.stream.kind == StreamKind::Domain ? 10 : 2;
  const std::vector<int> sizes = {train.dim(), config.hidden_width,
                                  config.hidden_width, config.hidden_width,
                                  n_classes};

  RunRecord rec;
  rec.setting_label = setting.label();
  rec.seed = seed;

  RngStream init_rng(seedu, "init", 0);
  ParamSet params = init_mlp(init_rng, sizes);
  MlpGraph graph(sizes);

  LabeledBatch batch;
  batch.inputs.resize(0, train.dim());
  MlpBatchObjective obj(graph, batch);
  StepScratch scratch;

  // Probe-batch identity: one fixed set of selectors per run, mapped onto
  // each probed task's test split.
  std::vector<double> probe_selectors;
  if (config.probe_every > 0) {
    rec.probe_batch_size = config.probe_batch_size;
    RngStream sel(seedu, "probe", 0);
    probe_selectors.resize(static_cast<std::size_t>(config.probe_batch_size));
    for (double& u : probe_selectors) u = sel.uniform_real();
  }

  std::uint64_t global_epoch = 0;
  std::vector<int> order;
  LabeledBatch eval_batch;

  for (const Task& task : tasks) {
    try {
      if (config.reset_per_task && task.id > 1) {
        RngStream reinit(seedu, "init", static_cast<std::uint64_t>(task.id - 1));
        params = init_mlp(reinit, sizes);
      }
      const int train_size = task.split_size(Split::Train);
      for (int epoch = 0; epoch < config.epochs_per_task; ++epoch) {
        order.resize(static_cast<std::size_t>(train_size));
        std::iota(order.begin(), order.end(), 0);
        RngStream shuffle_rng(seedu, "shuffle", global_epoch++);
        shuffle_rng.shuffle(order);
        for (int start = 0; start < train_size; start += config.batch_size) {
          const int end = std::min(train_size, start + config.batch_size);
          gather_examples(task, Split::Train,
                          std::span<const int>(order.data() + start,
                                               static_cast<std::size_t>(end - start)),
                          batch);
          if (apply_step(obj, params.weights_and_biases, setting, scratch).degenerate) {
            ++rec.degenerate_step_count;
          }
        }
      }

      const double acc = task_accuracy(params, task, eval_batch);
      rec.per_task_accuracy.push_back(acc);

      if (config.probe_every > 0 && task.id % config.probe_every == 0) {
        const int test_size = task.split_size(Split::Test);
        std::vector<int> rows(probe_selectors.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
          rows[i] = std::min(static_cast<int>(probe_selectors[i] * test_size),
                             test_size - 1);
        }
        gather_examples(task, Split::Test, rows, eval_batch);
        obj.set_batch(eval_batch);
        RngStream v_rng(seedu, "probe_v", static_cast<std::uint64_t>(task.id));
        SharpnessReport rep =
            max_hessian_eigenvalue(obj, params.weights_and_biases, kDefaultEigTol,
                                   kDefaultEigMaxIter, v_rng);
        rec.sharpness.push_back({task.id, rep});
        obj.set_batch(batch);
      }

      if (progress) {
        progress({rec.setting_label, seed, task.id, n_tasks, acc});
      }
    } catch (const NumericError& err) {
      rec.failed = true;
      rec.failed_task_id = task.id;
      rec.failure_message = err.what();
      break;
    }
  }
  rec.counts = obj.counts();
  rec.final_params = std::move(params);
  return rec;
}

std::vector<RunRecord> run_suite(const ExperimentConfig& config,
                                 const Dataset& train, const Dataset& test,
                                 int n_threads, const ProgressFn& progress) {
  config.validate();
  const int n_settings = static_cast<int>(config.settings.size());
  const int n_jobs = n_settings * config.n_seeds;
  std::vector<RunRecord> records(static_cast<std::size_t>(n_jobs));

  std::mutex progress_mutex;
  ProgressFn serialized;
  if (progress) {
    serialized = [&](const RunProgress& p) {
      std::lock_guard<std::mutex> lock(progress_mutex);
      progress(p);
    };
  }

  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      const int job = next.fetch_add(1);
      if (job >= n_jobs) return;
      const int setting_idx = job / config.n_seeds;
      const int seed = job % config.n_seeds + 1;
      try {
        records[static_cast<std::size_t>(job)] =
            run_setting(config, train, test,
                        config.settings[static_cast<std::size_t>(setting_idx)], seed,
                        serialized);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  const int threads = std::clamp(n_threads, 1, n_jobs);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return records;
}

double mean_per_task_change(std::span<const double> per_task_accuracy) {
  const std::size_t n = per_task_accuracy.size();
  if (n < 2) {
    throw UsageError("mean per-task change needs at least 2 accuracies, got " +
                     std::to_string(n));
  }
  // Successive differences telescope.
  return (per_task_accuracy[n - 1] - per_task_accuracy[0]) /
         static_cast<double>(n - 1);
}

double trend_slope(std::span<const double> per_task_accuracy) {
  const std::size_t n = per_task_accuracy.size();
  if (n < 2) {
    throw UsageError("trend slope needs at least 2 accuracies, got " +
                     std::to_string(n));
  }
  const double x_bar = static_cast<double>(n - 1) / 2.0;
  double y_bar = 0.0;
  for (double y : per_task_accuracy) y_bar += y;
  y_bar /= static_cast<double>(n);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = static_cast<double>(i) - x_bar;
    sxy += dx * (per_task_accuracy[i] - y_bar);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace plastic
