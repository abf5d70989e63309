#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "plastic/harness.hpp"

namespace plastic {

/// One summary-table line: across-seed statistics of the per-task accuracy
/// change for one setting.
struct SummaryRow {
  std::string label;
  double mean_change = 0.0;  ///< mean over contributing seeds; NaN if none
  double std_change = 0.0;   ///< sample std-dev (n-1); NaN below 2 seeds
  double mean_trend = 0.0;   ///< mean least-squares slope; NaN if none
  int n_seeds = 0;
  int n_failed = 0;
};

/// Raw results table, one row per (setting, seed, task_index) with columns
/// setting,seed,task_index,accuracy,lambda_max (lambda_max empty when the
/// task was not probed). Rows sorted by (setting, seed, task_index); header
/// always written; shortest-round-trip number formatting, so identical
/// records produce byte-identical files.
void write_records_csv(const std::vector<RunRecord>& records,
                       const std::filesystem::path& path);

/// Inverse of write_records_csv, reconstructing one record per (setting,
/// seed) group. Failure is inferred: records shorter than the longest in the
/// file are marked failed (per-run metadata beyond the five columns is not
/// stored in CSV).
std::vector<RunRecord> read_records_csv(const std::filesystem::path& path);

/// Setting labels in first-appearance order.
std::vector<std::string> setting_order_from_records(
    const std::vector<RunRecord>& records);

/// Across-seed summary, one row per label in setting_order. A record counts
/// as failed if flagged or shorter than the longest record present.
std::vector<SummaryRow> summarize(const std::vector<RunRecord>& records,
                                  const std::vector<std::string>& setting_order);

/// Render summary rows as a markdown table (2-significant-digit scientific
/// notation; "n/a" for undefined cells; a failure marker when no seed of a
/// setting succeeded).
std::string summary_markdown(const std::vector<SummaryRow>& rows);

/// summarize + summary_markdown in one call.
std::string summarize_table(const std::vector<RunRecord>& records,
                            const std::vector<std::string>& setting_order);

/// Self-contained SVG: per setting, one poly-line of seed-averaged
/// task-specific accuracy vs task index on a fixed [0,1] accuracy axis, plus
/// axes and a legend. With per_seed, thin per-seed lines are drawn under the
/// means. The plot area rect carries data-x-min/x-max/y-min/y-max attributes
/// declaring the affine map from data to pixel coordinates.
void render_accuracy_plot(const std::vector<RunRecord>& records,
                          const std::filesystem::path& path,
                          bool per_seed = false);

}  // namespace plastic
