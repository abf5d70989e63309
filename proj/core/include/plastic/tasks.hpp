#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "plastic/dataset.hpp"
#include "plastic/matrix.hpp"
#include "plastic/rng.hpp"

namespace plastic {

enum class StreamKind { Domain, Class };
enum class TaskOrder { Lexicographic, Shuffled };
enum class Split { Train, Test };

/// One continual-learning unit. A task never copies images: it references
/// the base train/test datasets plus either a pixel permutation (domain
/// kind) or per-split row-index lists with a binary label remap (class
/// kind). The referenced datasets must outlive the task.
struct Task {
  int id = 0;  ///< position in its stream, 1-based
  StreamKind kind = StreamKind::Domain;
  const Dataset* base_train = nullptr;
  const Dataset* base_test = nullptr;

  // Domain provenance: the permutation was drawn from
  // rng_stream(permutation_master, "perm", permutation_index).
  // permutation_index is -1 for explicitly supplied permutations.
  std::uint64_t permutation_master = 0;
  int permutation_index = -1;
  /// Pixel bijection: output pixel j of a permuted image reads input pixel
  /// pixel_perm[j]. Empty for class tasks.
  std::vector<int> pixel_perm;

  // Class provenance: the digit pair, with labels remapped low->0, high->1.
  int class_low = -1;
  int class_high = -1;
  std::vector<int> train_indices;
  std::vector<int> test_indices;

  int n_classes() const { return kind == StreamKind::Domain ? 10 : 2; }
  int split_size(Split split) const;
  /// Task-level label of example i of a split (remapped for class tasks).
  int label_of(Split split, int i) const;
};

/// Domain-incremental task: one pixel permutation drawn via Fisher-Yates
/// from rng_stream(master_seed, "perm", seed_index), applied identically to
/// every train and test image. Labels untouched.
Task permute_task(const Dataset& train, const Dataset& test,
                  std::uint64_t master_seed, int seed_index);

/// Domain task with an explicitly supplied permutation (e.g. identity);
/// pixel_perm must be a bijection on [0, dim).
Task domain_task_from_permutation(const Dataset& train, const Dataset& test,
                                  std::vector<int> pixel_perm);

/// Class-incremental task restricted to digits c_low < c_high, keeping the
/// base datasets' example order and remapping labels to {0,1}.
Task class_pair_task(const Dataset& train, const Dataset& test, int c_low,
                     int c_high);

/// Stream recipe. n_tasks = 0 picks the full-protocol default for the kind:
/// 100 domain tasks or all 45 class pairs.
struct StreamConfig {
  StreamKind kind = StreamKind::Domain;
  int n_tasks = 0;
  std::uint64_t master_seed = 0;
  TaskOrder task_order = TaskOrder::Lexicographic;  ///< class streams only
};

/// Materialize the full task sequence for one stream. Domain: n_tasks
/// permutations at indices 0..n-1 under config.master_seed. Class: the 45
/// pairs in lexicographic order, optionally shuffled by
/// rng_stream(master_seed, "order", 0), truncated to n_tasks.
std::vector<Task> build_stream(const StreamConfig& config, const Dataset& train,
                               const Dataset& test);

/// Copy the given task-split rows into a normalized batch: pixels byte/255
/// with the task's permutation or restriction applied, labels task-level.
void gather_examples(const Task& task, Split split, std::span<const int> rows,
                     LabeledBatch& out);

}  // namespace plastic
