#include "plastic/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <limits>
#include <locale>
#include <map>
#include <sstream>
#include <utility>

#include "plastic/errors.hpp"
#include "plastic/numfmt.hpp"

namespace plastic {
namespace {

const char* kCsvHeader = "setting,seed,task_index,accuracy,lambda_max";

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// Splits one CSV line into fields, honoring quoted fields with doubled
// quotes.
std::vector<std::string> csv_split(const std::string& line,
                                   const std::filesystem::path& path) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          fields.back() += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) throw FormatError(path.string() + ": unterminated quoted CSV field");
  return fields;
}

double parse_double(const std::string& s, const std::filesystem::path& path) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    throw FormatError(path.string() + ": bad number '" + s + "'");
  }
  return v;
}

int parse_int(const std::string& s, const std::filesystem::path& path) {
  int v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw FormatError(path.string() + ": bad integer '" + s + "'");
  }
  return v;
}

double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_std(const std::vector<double>& xs) {
  if (xs.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double m = mean_of(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

std::size_t longest_record(const std::vector<RunRecord>& records) {
  std::size_t n = 0;
  for (const RunRecord& r : records) n = std::max(n, r.per_task_accuracy.size());
  return n;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_records_csv(const std::vector<RunRecord>& records,
                       const std::filesystem::path& path) {
  std::vector<const RunRecord*> sorted;
  sorted.reserve(records.size());
  for (const RunRecord& r : records) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(),
            [](const RunRecord* a, const RunRecord* b) {
              if (a->setting_label != b->setting_label) {
                return a->setting_label < b->setting_label;
              }
              return a->seed < b->seed;
            });

  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out.imbue(std::locale::classic());
  out << kCsvHeader << '\n';
  for (const RunRecord* rec : sorted) {
    std::map<int, double> lambda_by_task;
    for (const ProbePoint& p : rec->sharpness) {
      lambda_by_task[p.task_id] = p.report.lambda_max;
    }
    const std::string label = csv_escape(rec->setting_label);
    for (std::size_t t = 0; t < rec->per_task_accuracy.size(); ++t) {
      const int task_index = static_cast<int>(t) + 1;
      out << label << ',' << rec->seed << ',' << task_index << ','
          << double_to_string(rec->per_task_accuracy[t]) << ',';
      auto it = lambda_by_task.find(task_index);
      if (it != lambda_by_task.end()) out << double_to_string(it->second);
      out << '\n';
    }
  }
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<RunRecord> read_records_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path.string() + " is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) {
    throw FormatError(path.string() + ": expected header '" +
                      std::string(kCsvHeader) + "', found '" + line + "'");
  }

  std::vector<RunRecord> records;
  std::map<std::pair<std::string, int>, std::size_t> index;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f = csv_split(line, path);
    if (f.size() != 5) {
      throw FormatError(path.string() + ": expected 5 columns, found " +
                        std::to_string(f.size()));
    }
    const int seed = parse_int(f[1], path);
    const int task_index = parse_int(f[2], path);
    const auto key = std::make_pair(f[0], seed);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, records.size()).first;
      records.emplace_back();
      records.back().setting_label = f[0];
      records.back().seed = seed;
    }
    RunRecord& rec = records[it->second];
    if (task_index != static_cast<int>(rec.per_task_accuracy.size()) + 1) {
      throw FormatError(path.string() + ": task indices of " + f[0] + " seed " +
                        f[1] + " are not contiguous from 1");
    }
    rec.per_task_accuracy.push_back(parse_double(f[3], path));
    if (!f[4].empty()) {
      ProbePoint p;
      p.task_id = task_index;
      p.report.lambda_max = parse_double(f[4], path);
      p.report.converged = true;
      rec.sharpness.push_back(p);
    }
  }

  const std::size_t max_len = longest_record(records);
  for (RunRecord& rec : records) {
    rec.failed = rec.per_task_accuracy.size() < max_len;
  }
  return records;
}

std::vector<std::string> setting_order_from_records(
    const std::vector<RunRecord>& records) {
  std::vector<std::string> order;
  for (const RunRecord& r : records) {
    if (std::find(order.begin(), order.end(), r.setting_label) == order.end()) {
      order.push_back(r.setting_label);
    }
  }
  return order;
}

std::vector<SummaryRow> summarize(const std::vector<RunRecord>& records,
                                  const std::vector<std::string>& setting_order) {
  const std::size_t max_len = longest_record(records);
  std::vector<SummaryRow> rows;
  rows.reserve(setting_order.size());
  for (const std::string& label : setting_order) {
    SummaryRow row;
    row.label = label;
    std::vector<double> changes, trends;
    for (const RunRecord& rec : records) {
      if (rec.setting_label != label) continue;
      ++row.n_seeds;
      const bool ok = !rec.failed && rec.per_task_accuracy.size() == max_len;
      if (!ok) {
        ++row.n_failed;
      } else if (rec.per_task_accuracy.size() >= 2) {
        changes.push_back(mean_per_task_change(rec.per_task_accuracy));
        trends.push_back(trend_slope(rec.per_task_accuracy));
      }
    }
    row.mean_change = mean_of(changes);
    row.std_change = sample_std(changes);
    row.mean_trend = mean_of(trends);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string summary_markdown(const std::vector<SummaryRow>& rows) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out << "| setting | mean_change | std_change | trend_slope | seeds | failed |\n";
  out << "|---|---|---|---|---|---|\n";
  for (const SummaryRow& row : rows) {
    const bool all_failed = row.n_seeds > 0 && row.n_failed == row.n_seeds;
    auto cell = [&](double v) {
      return std::isnan(v) ? std::string(all_failed ? "FAILED" : "n/a")
                           : signed_scientific_2(v);
    };
    out << "| " << row.label << " | " << cell(row.mean_change) << " | "
        << cell(row.std_change) << " | " << cell(row.mean_trend) << " | "
        << row.n_seeds << " | " << row.n_failed << " |\n";
  }
  return out.str();
}

std::string summarize_table(const std::vector<RunRecord>& records,
                            const std::vector<std::string>& setting_order) {
  return summary_markdown(summarize(records, setting_order));
}

void render_accuracy_plot(const std::vector<RunRecord>& records,
                          const std::filesystem::path& path, bool per_seed) {
  const std::size_t max_len = longest_record(records);
  if (max_len == 0) {
    throw UsageError("accuracy plot needs at least one record with accuracies");
  }
  const std::vector<std::string> labels = setting_order_from_records(records);

  const double width = 960, height = 600;
  const double left = 70, top = 40, right_margin = 220, bottom = 60;
  const double pw = width - left - right_margin;
  const double ph = height - top - bottom;
  const double x_min = 1.0;
  const double x_max = std::max<double>(2.0, static_cast<double>(max_len));
  auto fx = [&](double x) { return left + (x - x_min) / (x_max - x_min) * pw; };
  auto fy = [&](double y) { return top + (1.0 - y) * ph; };

  static const char* kPalette[8] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                    "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

  std::ostringstream svg;
  svg.imbue(std::locale::classic());
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height
      << "\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
      << "\" fill=\"#ffffff\"/>\n";
  svg << "<rect id=\"plot-area\" x=\"" << left << "\" y=\"" << top
      << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"#333333\""
      << " data-x-min=\"" << double_to_string(x_min) << "\" data-x-max=\""
      << double_to_string(x_max) << "\" data-y-min=\"0\" data-y-max=\"1\"/>\n";

  // y ticks every 0.2
  for (int i = 0; i <= 5; ++i) {
    const double y = i / 5.0;
    const double py = fy(y);
    svg << "<line x1=\"" << left << "\" y1=\"" << py << "\" x2=\"" << (left + pw)
        << "\" y2=\"" << py << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << (left - 8) << "\" y=\"" << (py + 4)
        << "\" text-anchor=\"end\" font-size=\"13\" font-family=\"sans-serif\">"
        << double_to_string(y) << "</text>\n";
  }
  // x ticks: at most ~10 integer positions
  const int x_step = std::max(1, (static_cast<int>(max_len) + 9) / 10);
  for (int t = 1; t <= static_cast<int>(max_len); t += x_step) {
    const double px = fx(t);
    svg << "<line x1=\"" << px << "\" y1=\"" << (top + ph) << "\" x2=\"" << px
        << "\" y2=\"" << (top + ph + 5) << "\" stroke=\"#333333\"/>\n";
    svg << "<text x=\"" << px << "\" y=\"" << (top + ph + 20)
        << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">"
        << t << "</text>\n";
  }
  svg << "<text x=\"" << (left + pw / 2) << "\" y=\"" << (height - 14)
      << "\" text-anchor=\"middle\" font-size=\"15\" font-family=\"sans-serif\">"
         "task</text>\n";
  svg << "<text x=\"20\" y=\"" << (top + ph / 2)
      << "\" text-anchor=\"middle\" font-size=\"15\" font-family=\"sans-serif\""
         " transform=\"rotate(-90 20 "
      << (top + ph / 2) << ")\">accuracy</text>\n";

  auto polyline = [&](const std::vector<double>& ys, const char* color,
                      const char* extra) {
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" " << extra
        << " points=\"";
    for (std::size_t t = 0; t < ys.size(); ++t) {
      if (t > 0) svg << ' ';
      svg << double_to_string(fx(static_cast<double>(t) + 1.0)) << ','
          << double_to_string(fy(ys[t]));
    }
    svg << "\"/>\n";
  };

  for (std::size_t li = 0; li < labels.size(); ++li) {
    const char* color = kPalette[li % 8];
    if (per_seed) {
      for (const RunRecord& rec : records) {
        if (rec.setting_label != labels[li] || rec.per_task_accuracy.empty()) continue;
        polyline(rec.per_task_accuracy, color,
                 "stroke-width=\"0.8\" stroke-opacity=\"0.35\"");
      }
    }
    // seed mean at each task index over the records that reached it
    std::vector<double> mean;
    for (std::size_t t = 0; t < max_len; ++t) {
      double sum = 0.0;
      int n = 0;
      for (const RunRecord& rec : records) {
        if (rec.setting_label != labels[li]) continue;
        if (t < rec.per_task_accuracy.size()) {
          sum += rec.per_task_accuracy[t];
          ++n;
        }
      }
      if (n == 0) break;
      mean.push_back(sum / n);
    }
    if (!mean.empty()) polyline(mean, color, "stroke-width=\"2\"");

    const double ly = top + 10 + 22.0 * static_cast<double>(li);
    svg << "<line x1=\"" << (width - right_margin + 16) << "\" y1=\"" << ly
        << "\" x2=\"" << (width - right_margin + 44) << "\" y2=\"" << ly
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << (width - right_margin + 52) << "\" y=\"" << (ly + 4)
        << "\" font-size=\"13\" font-family=\"sans-serif\">"
        << xml_escape(labels[li]) << "</text>\n";
  }
  svg << "</svg>\n";

  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << svg.str();
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace plastic
