// Command-line front end: train benchmark suites, regenerate reports from
// saved results, probe checkpoints, and self-check the numeric kernels.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "plastic/harness.hpp"
#include "plastic/idx.hpp"
#include "plastic/mlp.hpp"
#include "plastic/numfmt.hpp"
#include "plastic/objective.hpp"
#include "plastic/optimizers.hpp"
#include "plastic/probes.hpp"
#include "plastic/report.hpp"
#include "plastic/rng.hpp"
#include "plastic/synth_digits.hpp"
#include "plastic/tasks.hpp"

using json = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------------
// JSON <-> ExperimentConfig. Field names mirror the struct; unknown keys are
// rejected so config typos fail loudly instead of silently using defaults.

void expect_keys(const json& j, std::initializer_list<const char*> allowed,
                 const std::string& where) {
  for (const auto& item : j.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) {
          return item.key() == k;
        }) == allowed.end()) {
      throw plastic::ConfigError("unknown key \"" + item.key() + "\" in " + where);
    }
  }
}

plastic::StreamKind stream_kind_from(const std::string& s) {
  if (s == "domain") return plastic::StreamKind::Domain;
  if (s == "class") return plastic::StreamKind::Class;
  throw plastic::ConfigError("stream kind must be \"domain\" or \"class\", got \"" + s + "\"");
}

plastic::TaskOrder order_from(const std::string& s) {
  if (s == "lexicographic") return plastic::TaskOrder::Lexicographic;
  if (s == "shuffled") return plastic::TaskOrder::Shuffled;
  throw plastic::ConfigError("task_order must be \"lexicographic\" or \"shuffled\", got \"" + s + "\"");
}

plastic::OptimizerKind optimizer_kind_from(const std::string& s) {
  if (s == "sgd") return plastic::OptimizerKind::SGD;
  if (s == "sam") return plastic::OptimizerKind::SAM;
  if (s == "gnp") return plastic::OptimizerKind::GNP;
  throw plastic::ConfigError("optimizer kind must be \"sgd\", \"sam\" or \"gnp\", got \"" + s + "\"");
}

plastic::GnpMode gnp_mode_from(const std::string& s) {
  if (s == "exact") return plastic::GnpMode::Exact;
  if (s == "fd") return plastic::GnpMode::FiniteDifference;
  throw plastic::ConfigError("gnp_mode must be \"exact\" or \"fd\", got \"" + s + "\"");
}

plastic::OptimizerConfig setting_from_json(const json& j, int index) {
  const std::string where = "settings[" + std::to_string(index) + "]";
  expect_keys(j,
              {"kind", "alpha", "lambda", "rho", "gnp_mode", "gnp_fd_step",
               "sam_l2_squared", "custom_label"},
              where);
  plastic::OptimizerConfig s;
  s.kind = optimizer_kind_from(j.value("kind", std::string("sgd")));
  s.alpha = j.value("alpha", s.alpha);
  s.lambda = j.value("lambda", s.lambda);
  s.rho = j.value("rho", s.rho);
  s.gnp_mode = gnp_mode_from(j.value("gnp_mode", std::string("exact")));
  s.gnp_fd_step = j.value("gnp_fd_step", s.gnp_fd_step);
  s.sam_l2_squared = j.value("sam_l2_squared", s.sam_l2_squared);
  s.custom_label = j.value("custom_label", s.custom_label);
  return s;
}

plastic::ExperimentConfig config_from_json(const json& j) {
  expect_keys(j,
              {"stream", "settings", "n_seeds", "epochs_per_task", "batch_size",
               "hidden_width", "probe_every", "probe_batch_size", "master_seed",
               "reset_per_task"},
              "config");
  plastic::ExperimentConfig c;
  if (j.contains("stream")) {
    const json& s = j["stream"];
    expect_keys(s, {"kind", "n_tasks", "master_seed", "task_order"}, "stream");
    c.stream.kind = stream_kind_from(s.value("kind", std::string("domain")));
    c.stream.n_tasks = s.value("n_tasks", c.stream.n_tasks);
    c.stream.master_seed = s.value("master_seed", c.stream.master_seed);
    c.stream.task_order = order_from(s.value("task_order", std::string("lexicographic")));
  }
  if (j.contains("settings")) {
    if (!j["settings"].is_array() || j["settings"].empty()) {
      throw plastic::ConfigError("settings must be a non-empty array");
    }
    c.settings.clear();
    int i = 0;
    for (const json& s : j["settings"]) c.settings.push_back(setting_from_json(s, i++));
  }
  c.n_seeds = j.value("n_seeds", c.n_seeds);
  c.epochs_per_task = j.value("epochs_per_task", c.epochs_per_task);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.hidden_width = j.value("hidden_width", c.hidden_width);
  c.probe_every = j.value("probe_every", c.probe_every);
  c.probe_batch_size = j.value("probe_batch_size", c.probe_batch_size);
  c.master_seed = j.value("master_seed", c.master_seed);
  c.reset_per_task = j.value("reset_per_task", c.reset_per_task);
  return c;
}

json config_to_json(const plastic::ExperimentConfig& c) {
  json settings = json::array();
  for (const plastic::OptimizerConfig& s : c.settings) {
    const char* kind = s.kind == plastic::OptimizerKind::SGD   ? "sgd"
                       : s.kind == plastic::OptimizerKind::SAM ? "sam"
                                                               : "gnp";
    settings.push_back(
        {{"kind", kind},
         {"alpha", s.alpha},
         {"lambda", s.lambda},
         {"rho", s.rho},
         {"gnp_mode", s.gnp_mode == plastic::GnpMode::Exact ? "exact" : "fd"},
         {"gnp_fd_step", s.gnp_fd_step},
         {"sam_l2_squared", s.sam_l2_squared},
         {"custom_label", s.custom_label}});
  }
  return {
      {"stream",
       {{"kind", c.stream.kind == plastic::StreamKind::Domain ? "domain" : "class"},
        {"n_tasks", c.stream.n_tasks},
        {"master_seed", c.stream.master_seed},
        {"task_order", c.stream.task_order == plastic::TaskOrder::Lexicographic
                           ? "lexicographic"
                           : "shuffled"}}},
      {"settings", settings},
      {"n_seeds", c.n_seeds},
      {"epochs_per_task", c.epochs_per_task},
      {"batch_size", c.batch_size},
      {"hidden_width", c.hidden_width},
      {"probe_every", c.probe_every},
      {"probe_batch_size", c.probe_batch_size},
      {"master_seed", c.master_seed},
      {"reset_per_task", c.reset_per_task},
  };
}

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw plastic::IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw plastic::FormatError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw plastic::IoError("cannot write " + path.string());
  out << body;
}

std::string sanitize_label(const std::string& label) {
  std::string out;
  for (char ch : label) {
    if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '.') {
      out.push_back(ch);
    } else if (!out.empty() && out.back() != '-') {
      out.push_back('-');
    }
  }
  while (!out.empty() && out.back() == '-') out.pop_back();
  return out;
}

int default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// ---------------------------------------------------------------------------
// run

struct RunArgs {
  std::string config_path;
  std::string data_dir = "data";
  std::string out_dir = "out";
  int threads = default_threads();
  std::string stream;
  int tasks = -1;
  int seeds = -1;
  int epochs = -1;
  int batch_size = -1;
  int hidden = -1;
  int probe_every = -1;
  int probe_batch = -1;
  std::int64_t master_seed = -1;
  bool reset_per_task = false;
  std::string order;
  std::vector<std::string> only;
  bool per_seed = false;
  bool save_params = false;
  bool dump_config = false;
  bool quiet = false;
};

void save_checkpoints(const std::vector<plastic::RunRecord>& records,
                      const plastic::ExperimentConfig& cfg,
                      const std::filesystem::path& dir) {
  for (const plastic::RunRecord& r : records) {
    json ckpt = {
        {"setting", r.setting_label},
        {"seed", r.seed},
        {"stream_kind",
         cfg.stream.kind == plastic::StreamKind::Domain ? "domain" : "class"},
        {"task_order", cfg.stream.task_order == plastic::TaskOrder::Lexicographic
                           ? "lexicographic"
                           : "shuffled"},
        {"master_seed", cfg.master_seed},
        {"completed_tasks", r.per_task_accuracy.size()},
        {"layer_sizes", r.final_params.layer_sizes},
        {"weights_and_biases",
         std::vector<double>(r.final_params.weights_and_biases.begin(),
                             r.final_params.weights_and_biases.end())},
    };
    const auto path = dir / ("params-" + sanitize_label(r.setting_label) +
                             "-seed" + std::to_string(r.seed) + ".json");
    write_text_file(path, ckpt.dump());
  }
}

int cmd_run(const RunArgs& a, const CLI::App& cmd) {
  plastic::ExperimentConfig cfg;
  if (!a.config_path.empty()) cfg = config_from_json(load_json_file(a.config_path));

  if (cmd.count("--stream") > 0) cfg.stream.kind = stream_kind_from(a.stream);
  if (cmd.count("--tasks") > 0) cfg.stream.n_tasks = a.tasks;
  if (cmd.count("--order") > 0) cfg.stream.task_order = order_from(a.order);
  if (cmd.count("--seeds") > 0) cfg.n_seeds = a.seeds;
  if (cmd.count("--epochs") > 0) cfg.epochs_per_task = a.epochs;
  if (cmd.count("--batch-size") > 0) cfg.batch_size = a.batch_size;
  if (cmd.count("--hidden") > 0) cfg.hidden_width = a.hidden;
  if (cmd.count("--probe-every") > 0) cfg.probe_every = a.probe_every;
  if (cmd.count("--probe-batch") > 0) cfg.probe_batch_size = a.probe_batch;
  if (cmd.count("--master-seed") > 0) {
    cfg.master_seed = static_cast<std::uint64_t>(a.master_seed);
    cfg.stream.master_seed = cfg.master_seed;
  }
  if (a.reset_per_task) cfg.reset_per_task = true;

  if (!a.only.empty()) {
    std::vector<plastic::OptimizerConfig> kept;
    for (const plastic::OptimizerConfig& s : cfg.settings) {
      if (std::find(a.only.begin(), a.only.end(), s.label()) != a.only.end()) {
        kept.push_back(s);
      }
    }
    if (kept.empty()) {
      std::string labels;
      for (const plastic::OptimizerConfig& s : cfg.settings) {
        labels += (labels.empty() ? "" : ", ") + s.label();
      }
      throw plastic::ConfigError("--only matched no setting; available: " + labels);
    }
    cfg.settings = kept;
  }
  cfg.validate();

  if (a.dump_config) {
    std::printf("%s\n", config_to_json(cfg).dump(2).c_str());
    return 0;
  }

  const auto [train, test] = plastic::load_mnist_idx(a.data_dir);
  std::filesystem::create_directories(a.out_dir);

  const long total_tasks =
      static_cast<long>(cfg.stream.n_tasks != 0
                            ? cfg.stream.n_tasks
                            : (cfg.stream.kind == plastic::StreamKind::Domain ? 100 : 45)) *
      cfg.n_seeds * static_cast<long>(cfg.settings.size());
  if (!a.quiet) {
    std::printf("%ld task trainings on %d thread(s), writing to %s\n",
                total_tasks, a.threads, a.out_dir.c_str());
  }

  const auto t0 = std::chrono::steady_clock::now();
  plastic::ProgressFn progress;
  if (!a.quiet) {
    progress = [&](const plastic::RunProgress& p) {
      if (p.task_id == p.n_tasks) {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        std::printf("  [%6.0fs] %s seed %d done (final accuracy %.4f)\n", secs,
                    p.setting_label.c_str(), p.seed, p.accuracy);
        std::fflush(stdout);
      }
    };
  }

  const std::vector<plastic::RunRecord> records =
      plastic::run_suite(cfg, train, test, a.threads, progress);

  const std::filesystem::path out(a.out_dir);
  plastic::write_records_csv(records, out / "records.csv");
  const std::string md = plastic::summarize_table(
      records, plastic::setting_order_from_records(records));
  write_text_file(out / "summary.md", md);
  if (std::any_of(records.begin(), records.end(), [](const plastic::RunRecord& r) {
        return !r.per_task_accuracy.empty();
      })) {
    plastic::render_accuracy_plot(records, out / "accuracy.svg", a.per_seed);
  }
  if (a.save_params) save_checkpoints(records, cfg, out);

  std::printf("%s", md.c_str());
  int failed = 0;
  for (const plastic::RunRecord& r : records) failed += r.failed ? 1 : 0;
  if (failed > 0) {
    std::printf("\n%d of %zu runs failed; see records.csv\n", failed, records.size());
  }
  return 0;
}

// ---------------------------------------------------------------------------
// report

int cmd_report(const std::string& records_path, const std::string& out_dir,
               bool per_seed) {
  const std::vector<plastic::RunRecord> records =
      plastic::read_records_csv(records_path);
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path out(out_dir);
  const std::string md = plastic::summarize_table(
      records, plastic::setting_order_from_records(records));
  write_text_file(out / "summary.md", md);
  if (std::any_of(records.begin(), records.end(), [](const plastic::RunRecord& r) {
        return !r.per_task_accuracy.empty();
      })) {
    plastic::render_accuracy_plot(records, out / "accuracy.svg", per_seed);
  }
  std::printf("%s", md.c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// probe

struct ProbeArgs {
  std::string params_path;
  std::string data_dir = "data";
  int task_index = 1;
  int probe_batch = 512;
  double eig_tol = plastic::kDefaultEigTol;
  int eig_max_iter = plastic::kDefaultEigMaxIter;
  double radius = 1e-4;
  int samples = 0;
  int seed = -1;
  std::int64_t master_seed = -1;
};

int cmd_probe(const ProbeArgs& a) {
  const json ckpt = load_json_file(a.params_path);
  expect_keys(ckpt,
              {"setting", "seed", "stream_kind", "task_order", "master_seed",
               "completed_tasks", "layer_sizes", "weights_and_biases"},
              "checkpoint");
  plastic::ParamSet params;
  params.layer_sizes = ckpt.at("layer_sizes").get<std::vector<int>>();
  const std::vector<double> wb =
      ckpt.at("weights_and_biases").get<std::vector<double>>();
  params.weights_and_biases.assign(wb.begin(), wb.end());

  const int seed = a.seed > 0 ? a.seed : ckpt.value("seed", 1);
  const std::uint64_t master =
      a.master_seed >= 0 ? static_cast<std::uint64_t>(a.master_seed)
                         : ckpt.value("master_seed", std::uint64_t{1729});
  const std::string kind = ckpt.value("stream_kind", std::string("domain"));
  const std::uint64_t seedu = static_cast<std::uint64_t>(seed);

  const auto [train, test] = plastic::load_mnist_idx(a.data_dir);

  // Rebuild the probed task exactly as a training run under (master, seed)
  // would see it: shuffle-then-truncate stream semantics make the prefix
  // stable, so building only task_index tasks reproduces that position.
  plastic::StreamConfig sc;
  sc.kind = stream_kind_from(kind);
  sc.n_tasks = a.task_index;
  sc.task_order = order_from(ckpt.value("task_order", std::string("lexicographic")));
  sc.master_seed = plastic::RngStream(master, "stream", seedu).next_u64();
  const std::vector<plastic::Task> tasks = plastic::build_stream(sc, train, test);
  const plastic::Task& task = tasks.at(static_cast<std::size_t>(a.task_index - 1));

  const int test_size = task.split_size(plastic::Split::Test);
  plastic::RngStream sel(seedu, "probe", 0);
  std::vector<int> rows(static_cast<std::size_t>(a.probe_batch));
  for (int& r : rows) {
    r = std::min(static_cast<int>(sel.uniform_real() * test_size), test_size - 1);
  }
  plastic::LabeledBatch batch;
  plastic::gather_examples(task, plastic::Split::Test, rows, batch);

  plastic::MlpGraph graph(params.layer_sizes);
  plastic::MlpBatchObjective obj(graph, batch);

  plastic::RngStream v_rng(seedu, "probe_v", static_cast<std::uint64_t>(task.id));
  const plastic::SharpnessReport rep = plastic::max_hessian_eigenvalue(
      obj, params.weights_and_biases, a.eig_tol, a.eig_max_iter, v_rng);

  json out = {
      {"setting", ckpt.value("setting", "")},
      {"seed", seed},
      {"task_id", task.id},
      {"probe_batch_size", a.probe_batch},
      {"lambda_max", rep.lambda_max},
      {"converged", rep.converged},
      {"iterations_used", rep.iterations_used},
      {"residual", rep.residual},
  };
  if (a.samples > 0) {
    plastic::RngStream l_rng(seedu, "probe_l", static_cast<std::uint64_t>(task.id));
    const plastic::LipschitzEstimate est = plastic::local_lipschitz_estimate(
        obj, params.weights_and_biases, a.radius, a.samples, l_rng);
    out["k_hat"] = est.k_hat;
    out["radius"] = est.radius;
    out["n_samples"] = est.n_samples;
  }
  std::printf("%s\n", out.dump(2).c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// selftest: quick built-in checks of the numeric kernels, runnable without
// any data or test infrastructure.

int cmd_selftest() {
  int failures = 0;
  auto check = [&](const char* name, bool ok) {
    std::printf("[%s] %s\n", ok ? "ok" : "FAIL", name);
    failures += ok ? 0 : 1;
  };

  {
    plastic::RngStream r(1, "init", 0);
    check("seeded stream reproduces its fixed first draw",
          r.next_u64() == 0xA6AA3B30A47390ADull);
  }
  {
    plastic::QuadraticObjective obj{plastic::FlatVector{1.0}};
    plastic::FlatVector w{1.0};
    plastic::OptimizerConfig c;
    c.kind = plastic::OptimizerKind::SGD;
    c.alpha = 0.1;
    plastic::sgd_step(obj, w, c);
    check("sgd closed form on a 1-D quadratic", std::abs(w[0] - 0.9) < 1e-12);

    w = {1.0};
    c.kind = plastic::OptimizerKind::SAM;
    c.lambda = 0.1;
    c.rho = 0.1;
    plastic::sam_step(obj, w, c);
    check("sam closed form on a 1-D quadratic", std::abs(w[0] - 0.88) < 1e-12);

    w = {1.0};
    c.kind = plastic::OptimizerKind::GNP;
    c.rho = 0.05;
    plastic::gnp_step(obj, w, c);
    check("gnp closed form on a 1-D quadratic", std::abs(w[0] - 0.89) < 1e-12);
  }
  {
    plastic::QuadraticObjective obj{plastic::FlatVector{2.0, 4.0}};
    plastic::FlatVector w{0.0, 0.0};
    plastic::RngStream rng(7, "selftest", 0);
    const auto rep = plastic::max_hessian_eigenvalue(obj, w, 1e-6, 500, rng);
    check("power iteration finds the top curvature of diag(2,4)",
          rep.converged && std::abs(rep.lambda_max - 4.0) < 1e-3);
  }
  {
    // Central finite differences against the reverse-mode gradient on a
    // small seeded network.
    const std::vector<int> sizes = {3, 5, 4};
    plastic::RngStream init(99, "selftest", 1);
    plastic::ParamSet p = plastic::init_mlp(init, sizes);
    plastic::LabeledBatch batch;
    batch.inputs.resize(4, 3);
    plastic::RngStream data(99, "selftest", 2);
    for (double& x : batch.inputs.data) x = data.uniform_real();
    batch.labels = {0, 1, 2, 3};
    plastic::MlpGraph graph(sizes);
    plastic::MlpBatchObjective obj(graph, batch);

    plastic::FlatVector grad;
    obj.gradient(p.weights_and_biases, grad);
    double worst = 0.0;
    const double h = 1e-5;
    plastic::FlatVector w = p.weights_and_biases;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double save = w[i];
      w[i] = save + h;
      const double up = obj.value(w);
      w[i] = save - h;
      const double dn = obj.value(w);
      w[i] = save;
      const double fd = (up - dn) / (2.0 * h);
      worst = std::max(worst,
                       std::abs(grad[i] - fd) / std::max(std::abs(fd), 1e-3));
    }
    check("reverse-mode gradient matches central finite differences",
          worst < 1e-6);
  }
  {
    const std::vector<int> sizes = {2, 10};
    plastic::ParamSet p;
    p.layer_sizes = sizes;
    p.weights_and_biases.assign(30, 0.0);
    plastic::Matrix inputs(1, 2, 0.5);
    plastic::Matrix logits = plastic::forward_logits(p, inputs);
    check("uniform logits cost ln(n_classes)",
          std::abs(plastic::ce_loss(logits, {3}) - std::log(10.0)) < 1e-12);
  }

  std::printf(failures == 0 ? "all checks passed\n" : "%d check(s) failed\n",
              failures);
  return failures;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"continual-learning plasticity benchmark for sharpness-aware optimizers"};
  app.require_subcommand(1);

  RunArgs run_args;
  CLI::App* run = app.add_subcommand(
      "run", "train a suite and write records.csv, summary.md and accuracy.svg");
  run->add_option("--config", run_args.config_path,
                  "JSON experiment config; flags override file values");
  run->add_option("--data-dir", run_args.data_dir, "corpus directory (IDX files)")
      ->capture_default_str();
  run->add_option("--out", run_args.out_dir, "output directory")
      ->capture_default_str();
  run->add_option("--threads", run_args.threads, "worker threads")
      ->capture_default_str();
  run->add_option("--stream", run_args.stream, "task stream kind: domain|class");
  run->add_option("--tasks", run_args.tasks,
                  "number of tasks (0 = full protocol for the stream kind)");
  run->add_option("--order", run_args.order,
                  "class-pair order: lexicographic|shuffled");
  run->add_option("--seeds", run_args.seeds, "seeded repetitions per setting");
  run->add_option("--epochs", run_args.epochs, "epochs per task");
  run->add_option("--batch-size", run_args.batch_size, "training batch size");
  run->add_option("--hidden", run_args.hidden, "hidden layer width");
  run->add_option("--probe-every", run_args.probe_every,
                  "probe the top Hessian eigenvalue after every Nth task (0 = off)");
  run->add_option("--probe-batch", run_args.probe_batch, "examples per probe batch");
  run->add_option("--master-seed", run_args.master_seed,
                  "master seed for both the experiment and the task stream");
  run->add_flag("--reset-per-task", run_args.reset_per_task,
                "reinitialize the network before every task");
  run->add_option("--only", run_args.only,
                  "run only settings with these labels (repeatable)");
  run->add_flag("--per-seed", run_args.per_seed,
                "draw thin per-seed lines in the accuracy plot");
  run->add_flag("--save-params", run_args.save_params,
                "write a params-<setting>-seed<N>.json checkpoint per run");
  run->add_flag("--dump-config", run_args.dump_config,
                "print the effective config as JSON and exit");
  run->add_flag("--quiet", run_args.quiet, "suppress progress lines");

  std::string records_path, report_out = "out";
  bool report_per_seed = false;
  CLI::App* report = app.add_subcommand(
      "report", "regenerate summary.md and accuracy.svg from a records.csv");
  report->add_option("--records", records_path, "records.csv produced by run")
      ->required();
  report->add_option("--out", report_out, "output directory")->capture_default_str();
  report->add_flag("--per-seed", report_per_seed,
                   "draw thin per-seed lines in the accuracy plot");

  ProbeArgs probe_args;
  CLI::App* probe = app.add_subcommand(
      "probe", "sharpness probe of a saved checkpoint on one task");
  probe->add_option("--params", probe_args.params_path,
                    "checkpoint JSON written by run --save-params")
      ->required();
  probe->add_option("--data-dir", probe_args.data_dir, "corpus directory")
      ->capture_default_str();
  probe->add_option("--task-index", probe_args.task_index,
                    "1-based task to probe on")
      ->capture_default_str();
  probe->add_option("--probe-batch", probe_args.probe_batch,
                    "examples per probe batch")
      ->capture_default_str();
  probe->add_option("--eig-tol", probe_args.eig_tol,
                    "relative convergence tolerance")
      ->capture_default_str();
  probe->add_option("--eig-max-iter", probe_args.eig_max_iter,
                    "power iteration cap")
      ->capture_default_str();
  probe->add_option("--samples", probe_args.samples,
                    "local Lipschitz sample count (0 = skip that probe)");
  probe->add_option("--radius", probe_args.radius, "local Lipschitz radius")
      ->capture_default_str();
  probe->add_option("--seed", probe_args.seed,
                    "run seed for probe identity (default: from checkpoint)");
  probe->add_option("--master-seed", probe_args.master_seed,
                    "experiment master seed (default: from checkpoint)");

  app.add_subcommand("selftest", "quick built-in checks of the numeric kernels");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_args, *run);
    if (report->parsed()) return cmd_report(records_path, report_out, report_per_seed);
    if (probe->parsed()) return cmd_probe(probe_args);
    return cmd_selftest();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
