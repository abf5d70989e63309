#include "plastic/tasks.hpp"

#include <cstddef>
#include <numeric>
#include <string>
#include <utility>

#include "plastic/errors.hpp"

namespace plastic {
namespace {

constexpr int kDefaultDomainTasks = 100;
constexpr int kClassPairCount = 45;  // C(10,2)

void check_base(const Dataset& train, const Dataset& test) {
  train.validate();
  test.validate();
  if (train.dim() != test.dim()) {
    throw ConfigError("train and test images disagree on pixel count: " +
                      std::to_string(train.dim()) + " vs " +
                      std::to_string(test.dim()));
  }
}

const Dataset& base_of(const Task& task, Split split) {
  return split == Split::Train ? *task.base_train : *task.base_test;
}

}  // namespace

int Task::split_size(Split split) const {
  if (kind == StreamKind::Domain) return base_of(*this, split).n;
  const auto& idx = (split == Split::Train) ? train_indices : test_indices;
  return static_cast<int>(idx.size());
}

int Task::label_of(Split split, int i) const {
  const Dataset& base = base_of(*this, split);
  if (kind == StreamKind::Domain) return base.labels[static_cast<std::size_t>(i)];
  const auto& idx = (split == Split::Train) ? train_indices : test_indices;
  const int y = base.labels[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
  return y == class_high ? 1 : 0;
}

Task permute_task(const Dataset& train, const Dataset& test,
                  std::uint64_t master_seed, int seed_index) {
  check_base(train, test);
  if (seed_index < 0) throw ConfigError("permutation seed index must be >= 0");
  Task task;
  task.kind = StreamKind::Domain;
  task.base_train = &train;
  task.base_test = &test;
  task.permutation_master = master_seed;
  task.permutation_index = seed_index;
  task.pixel_perm.resize(static_cast<std::size_t>(train.dim()));
  std::iota(task.pixel_perm.begin(), task.pixel_perm.end(), 0);
  RngStream rng(master_seed, "perm", static_cast<std::uint64_t>(seed_index));
  rng.shuffle(task.pixel_perm);
  return task;
}

Task domain_task_from_permutation(const Dataset& train, const Dataset& test,
                                  std::vector<int> pixel_perm) {
  check_base(train, test);
  const int d = train.dim();
  if (static_cast<int>(pixel_perm.size()) != d) {
    throw ConfigError("permutation covers " + std::to_string(pixel_perm.size()) +
                      " pixels, images have " + std::to_string(d));
  }
  std::vector<char> seen(static_cast<std::size_t>(d), 0);
  for (int p : pixel_perm) {
    if (p < 0 || p >= d || seen[static_cast<std::size_t>(p)]) {
      throw ConfigError("pixel permutation is not a bijection on [0," +
                        std::to_string(d) + ")");
    }
    seen[static_cast<std::size_t>(p)] = 1;
  }
  Task task;
  task.kind = StreamKind::Domain;
  task.base_train = &train;
  task.base_test = &test;
  task.pixel_perm = std::move(pixel_perm);
  return task;
}

Task class_pair_task(const Dataset& train, const Dataset& test, int c_low,
                     int c_high) {
  check_base(train, test);
  if (c_low < 0 || c_high > 9 || c_low >= c_high) {
    throw ConfigError("class pair (" + std::to_string(c_low) + "," +
                      std::to_string(c_high) + ") must satisfy 0 <= low < high <= 9");
  }
  Task task;
  task.kind = StreamKind::Class;
  task.base_train = &train;
  task.base_test = &test;
  task.class_low = c_low;
  task.class_high = c_high;
  for (int i = 0; i < train.n; ++i) {
    const int y = train.labels[static_cast<std::size_t>(i)];
    if (y == c_low || y == c_high) task.train_indices.push_back(i);
  }
  for (int i = 0; i < test.n; ++i) {
    const int y = test.labels[static_cast<std::size_t>(i)];
    if (y == c_low || y == c_high) task.test_indices.push_back(i);
  }
  return task;
}

std::vector<Task> build_stream(const StreamConfig& config, const Dataset& train,
                               const Dataset& test) {
  check_base(train, test);
  std::vector<Task> tasks;
  if (config.kind == StreamKind::Domain) {
    const int n = config.n_tasks == 0 ? kDefaultDomainTasks : config.n_tasks;
    if (n < 1) throw ConfigError("domain stream needs n_tasks >= 1");
    tasks.reserve(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) {
      tasks.push_back(permute_task(train, test, config.master_seed, t));
      tasks.back().id = t + 1;
    }
    return tasks;
  }

  const int n = config.n_tasks == 0 ? kClassPairCount : config.n_tasks;
  if (n < 1) throw ConfigError("class stream needs n_tasks >= 1");
  if (n > kClassPairCount) {
    throw ConfigError("class stream has only " + std::to_string(kClassPairCount) +
                      " distinct pairs, got n_tasks=" + std::to_string(n));
  }
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(kClassPairCount);
  for (int lo = 0; lo <= 9; ++lo) {
    for (int hi = lo + 1; hi <= 9; ++hi) pairs.emplace_back(lo, hi);
  }
  if (config.task_order == TaskOrder::Shuffled) {
    RngStream rng(config.master_seed, "order", 0);
    rng.shuffle(pairs);
  }
  pairs.resize(static_cast<std::size_t>(n));
  tasks.reserve(pairs.size());
  for (std::size_t t = 0; t < pairs.size(); ++t) {
    tasks.push_back(class_pair_task(train, test, pairs[t].first, pairs[t].second));
    tasks.back().id = static_cast<int>(t) + 1;
  }
  return tasks;
}

void gather_examples(const Task& task, Split split, std::span<const int> rows,
                     LabeledBatch& out) {
  const Dataset& base = base_of(task, split);
  const int d = base.dim();
  const int size = task.split_size(split);
  out.inputs.rows = static_cast<int>(rows.size());
  out.inputs.cols = d;
  out.inputs.data.resize(rows.size() * static_cast<std::size_t>(d));
  out.labels.resize(rows.size());

  for (std::size_t r = 0; r < rows.size(); ++r) {
    const int i = rows[r];
    if (i < 0 || i >= size) {
      throw ConfigError("example index " + std::to_string(i) +
                        " outside task split of size " + std::to_string(size));
    }
    double* dst = out.inputs.row(static_cast<int>(r));
    if (task.kind == StreamKind::Domain) {
      const std::uint8_t* src = base.image(i);
      for (int j = 0; j < d; ++j) {
        dst[j] = src[task.pixel_perm[static_cast<std::size_t>(j)]] / 255.0;
      }
    } else {
      const auto& idx = (split == Split::Train) ? task.train_indices : task.test_indices;
      const std::uint8_t* src = base.image(idx[static_cast<std::size_t>(i)]);
      for (int j = 0; j < d; ++j) dst[j] = src[j] / 255.0;
    }
    out.labels[r] = task.label_of(split, i);
  }
}

}  // namespace plastic
