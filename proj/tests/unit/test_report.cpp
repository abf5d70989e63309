#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "doctest.h"
#include "plastic/errors.hpp"
#include "plastic/numfmt.hpp"
#include "plastic/report.hpp"
#include "support/fixtures.hpp"

using plastic::RunRecord;
using plastic::SummaryRow;

namespace {

RunRecord rec(const std::string& label, int seed, std::vector<double> accs) {
  RunRecord r;
  r.setting_label = label;
  r.seed = seed;
  r.per_task_accuracy = std::move(accs);
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Collect all descendants with the given element name.
void collect(const boost::property_tree::ptree& node, const std::string& name,
             std::vector<const boost::property_tree::ptree*>& out) {
  for (const auto& [key, child] : node) {
    if (key == name) out.push_back(&child);
    collect(child, name, out);
  }
}

struct PlotGeometry {
  double left, top, pw, ph, x_min, x_max, y_min, y_max;
  double data_x(double px) const {
    return x_min + (px - left) / pw * (x_max - x_min);
  }
  double data_y(double py) const {
    return y_max - (py - top) / ph * (y_max - y_min);
  }
};

PlotGeometry plot_geometry(const boost::property_tree::ptree& svg) {
  std::vector<const boost::property_tree::ptree*> rects;
  collect(svg, "rect", rects);
  for (const auto* r : rects) {
    if (r->get<std::string>("<xmlattr>.id", "") != "plot-area") continue;
    PlotGeometry g{};
    g.left = r->get<double>("<xmlattr>.x");
    g.top = r->get<double>("<xmlattr>.y");
    g.pw = r->get<double>("<xmlattr>.width");
    g.ph = r->get<double>("<xmlattr>.height");
    g.x_min = r->get<double>("<xmlattr>.data-x-min");
    g.x_max = r->get<double>("<xmlattr>.data-x-max");
    g.y_min = r->get<double>("<xmlattr>.data-y-min");
    g.y_max = r->get<double>("<xmlattr>.data-y-max");
    return g;
  }
  throw std::runtime_error("no plot-area rect in SVG");
}

std::vector<std::pair<double, double>> polyline_points(
    const boost::property_tree::ptree& poly) {
  std::vector<std::pair<double, double>> pts;
  std::istringstream ss(poly.get<std::string>("<xmlattr>.points"));
  std::string pair;
  while (ss >> pair) {
    const auto comma = pair.find(',');
    pts.emplace_back(std::stod(pair.substr(0, comma)),
                     std::stod(pair.substr(comma + 1)));
  }
  return pts;
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("csv bytes are frozen for a known record set") {
  fixture::TempDir tmp("csv-golden");
  RunRecord r = rec("SGD(alpha=0.01)", 1, {0.5, 0.625});
  r.sharpness.push_back({2, plastic::SharpnessReport{2.5, 7, 1e-4, true}});
  const auto path = tmp.path() / "records.csv";
  plastic::write_records_csv({r}, path);
  CHECK(slurp(path) ==
        "setting,seed,task_index,accuracy,lambda_max\n"
        "SGD(alpha=0.01),1,1,0.5,\n"
        "SGD(alpha=0.01),1,2,0.625,2.5\n");
}

TEST_CASE("csv writing is deterministic and sorted") {
  fixture::TempDir tmp("csv-det");
  // Deliberately unsorted input: seeds and settings out of order.
  std::vector<RunRecord> records = {
      rec("B", 2, {0.75}),
      rec("A", 2, {0.25}),
      rec("B", 1, {0.5}),
      rec("A", 1, {0.125}),
  };
  const auto p1 = tmp.path() / "one.csv";
  const auto p2 = tmp.path() / "two.csv";
  plastic::write_records_csv(records, p1);
  std::reverse(records.begin(), records.end());
  plastic::write_records_csv(records, p2);
  const std::string body = slurp(p1);
  CHECK(body == slurp(p2));
  CHECK(body ==
        "setting,seed,task_index,accuracy,lambda_max\n"
        "A,1,1,0.125,\n"
        "A,2,1,0.25,\n"
        "B,1,1,0.5,\n"
        "B,2,1,0.75,\n");
}

TEST_CASE("labels with csv metacharacters survive a round trip") {
  fixture::TempDir tmp("csv-quote");
  const std::string tricky = "weird, \"label\" (v1)";
  const auto path = tmp.path() / "records.csv";
  plastic::write_records_csv({rec(tricky, 1, {0.5})}, path);
  const std::vector<RunRecord> back = plastic::read_records_csv(path);
  REQUIRE(back.size() == 1);
  CHECK(back[0].setting_label == tricky);
  CHECK(back[0].per_task_accuracy == std::vector<double>{0.5});
}

TEST_CASE("records round-trip exactly, including failure inference") {
  fixture::TempDir tmp("csv-rt");
  std::vector<RunRecord> records = {
      rec("SGD(alpha=0.01)", 1, {0.91, 0.92, 0.93}),
      rec("SGD(alpha=0.01)", 2, {0.9}),  // failed: shorter than the rest
      rec("SAM(alpha=0.01)", 1, {0.81, 0.82, 0.83}),
  };
  records[1].failed = true;
  const auto path = tmp.path() / "records.csv";
  plastic::write_records_csv(records, path);
  const std::vector<RunRecord> back = plastic::read_records_csv(path);
  REQUIRE(back.size() == 3);

  auto find = [&](const std::string& label, int seed) -> const RunRecord& {
    for (const RunRecord& r : back) {
      if (r.setting_label == label && r.seed == seed) return r;
    }
    throw std::runtime_error("missing record");
  };
  CHECK(find("SGD(alpha=0.01)", 1).per_task_accuracy ==
        std::vector<double>{0.91, 0.92, 0.93});
  CHECK(find("SGD(alpha=0.01)", 2).failed);
  CHECK_FALSE(find("SGD(alpha=0.01)", 1).failed);
  CHECK_FALSE(find("SAM(alpha=0.01)", 1).failed);

  // Summaries computed from the file equal summaries from memory (same
  // explicit setting order, since the file is sorted by label).
  const auto order = plastic::setting_order_from_records(records);
  const auto mem = plastic::summarize(records, order);
  const auto disk = plastic::summarize(back, order);
  REQUIRE(mem.size() == disk.size());
  for (std::size_t i = 0; i < mem.size(); ++i) {
    CHECK(mem[i].label == disk[i].label);
    CHECK(mem[i].mean_change == disk[i].mean_change);
    CHECK(mem[i].n_failed == disk[i].n_failed);
  }
}

TEST_CASE("csv structural violations are format errors") {
  fixture::TempDir tmp("csv-bad");
  auto write = [&](const char* name, const std::string& body) {
    std::ofstream out(tmp.path() / name);
    out << body;
    return tmp.path() / name;
  };
  CHECK_THROWS_AS(plastic::read_records_csv(tmp.path() / "absent.csv"),
                  plastic::IoError);
  CHECK_THROWS_AS(plastic::read_records_csv(
                      write("h.csv", "setting,seed,task,acc,lambda\n")),
                  plastic::FormatError);
  CHECK_THROWS_AS(
      plastic::read_records_csv(write(
          "n.csv", "setting,seed,task_index,accuracy,lambda_max\nA,1,1,zero,\n")),
      plastic::FormatError);
  CHECK_THROWS_AS(
      plastic::read_records_csv(write(
          "gap.csv",
          "setting,seed,task_index,accuracy,lambda_max\nA,1,1,0.5,\nA,1,3,0.6,\n")),
      plastic::FormatError);
  CHECK_THROWS_AS(
      plastic::read_records_csv(write(
          "cols.csv", "setting,seed,task_index,accuracy,lambda_max\nA,1,1\n")),
      plastic::FormatError);
}

TEST_CASE("summaries aggregate per-task changes across seeds") {
  // The longest record defines the stream length; shorter ones failed mid
  // stream no matter which setting they belong to.
  std::vector<RunRecord> records = {
      rec("A", 1, {0.9, 0.8, 0.7}),  // change -0.1
      rec("A", 2, {0.8, 0.9, 1.0}),  // change +0.1
      rec("B", 1, {0.5, 0.5, 0.5}),
      rec("B", 2, {0.2}),            // too short: counts as failed
  };
  const auto rows = plastic::summarize(records, {"A", "B"});
  REQUIRE(rows.size() == 2);

  CHECK(rows[0].label == "A");
  CHECK(rows[0].mean_change == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(rows[0].std_change ==
        doctest::Approx(std::sqrt(0.02 / 1.0)).epsilon(1e-12));
  CHECK(rows[0].n_seeds == 2);
  CHECK(rows[0].n_failed == 0);

  CHECK(rows[1].label == "B");
  CHECK(rows[1].mean_change == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(rows[1].n_seeds == 2);
  CHECK(rows[1].n_failed == 1);
  CHECK(std::isnan(rows[1].std_change));  // single contributing seed
}

TEST_CASE("markdown table renders signed scientific entries") {
  std::vector<RunRecord> records = {
      rec("A", 1, {0.9, 0.8}),
      rec("A", 2, {0.8, 0.9}),
  };
  const std::string md =
      plastic::summarize_table(records, plastic::setting_order_from_records(records));
  CHECK(md.find("| setting | mean_change | std_change | trend_slope | seeds | failed |") !=
        std::string::npos);
  CHECK(md.find("| A |") != std::string::npos);
  CHECK(md.find("+0.0e+00") != std::string::npos);
  CHECK(md.find("1.4e-01") != std::string::npos);
}

TEST_CASE("markdown marks settings whose every seed failed") {
  std::vector<RunRecord> records = {rec("A", 1, {0.9, 0.8}), rec("dead", 1, {})};
  records[1].failed = true;
  const std::string md = plastic::summarize_table(
      records, plastic::setting_order_from_records(records));
  CHECK(md.find("FAILED") != std::string::npos);
}

TEST_CASE("signed scientific format is stable") {
  CHECK(plastic::signed_scientific_2(-0.00032) == "-3.2e-04");
  CHECK(plastic::signed_scientific_2(0.1) == "+1.0e-01");
  CHECK(plastic::signed_scientific_2(0.0) == "+0.0e+00");
  CHECK(plastic::double_to_string(0.01) == "0.01");
  CHECK(plastic::double_to_string(1e10) == "1e+10");
}

TEST_CASE("setting order follows first appearance") {
  std::vector<RunRecord> records = {rec("Z", 1, {0.1}), rec("A", 1, {0.2}),
                                    rec("Z", 2, {0.3}), rec("M", 1, {0.4})};
  CHECK(plastic::setting_order_from_records(records) ==
        std::vector<std::string>{"Z", "A", "M"});
}

TEST_CASE("accuracy plot is well-formed and maps data faithfully") {
  fixture::TempDir tmp("svg");
  std::vector<RunRecord> records;
  // Setting "flat": constant 0.9. Setting "rise <&>": 0.2 + 0.1*(t-1).
  for (int seed = 1; seed <= 2; ++seed) {
    records.push_back(rec("flat", seed, {0.9, 0.9, 0.9, 0.9, 0.9}));
    records.push_back(rec("rise <&>", seed, {0.2, 0.3, 0.4, 0.5, 0.6}));
  }
  const auto path = tmp.path() / "plot.svg";
  plastic::render_accuracy_plot(records, path);

  boost::property_tree::ptree doc;
  boost::property_tree::read_xml(path.string(), doc);
  const auto& svg = doc.get_child("svg");
  const PlotGeometry geom = plot_geometry(svg);
  CHECK(geom.x_min == 1.0);
  CHECK(geom.x_max == 5.0);
  CHECK(geom.y_min == 0.0);
  CHECK(geom.y_max == 1.0);

  std::vector<const boost::property_tree::ptree*> polys;
  collect(svg, "polyline", polys);
  REQUIRE(polys.size() == 2);  // one mean line per setting

  bool saw_flat = false, saw_rise = false;
  for (const auto* poly : polys) {
    const auto pts = polyline_points(*poly);
    REQUIRE(pts.size() == 5);
    const double y0 = geom.data_y(pts[0].second);
    if (std::abs(y0 - 0.9) < 1e-9) {
      saw_flat = true;
      for (std::size_t t = 0; t < 5; ++t) {
        CHECK(geom.data_x(pts[t].first) ==
              doctest::Approx(static_cast<double>(t) + 1.0).epsilon(1e-9));
        CHECK(geom.data_y(pts[t].second) == doctest::Approx(0.9).epsilon(1e-9));
      }
    } else {
      saw_rise = true;
      for (std::size_t t = 0; t < 5; ++t) {
        CHECK(geom.data_y(pts[t].second) ==
              doctest::Approx(0.2 + 0.1 * static_cast<double>(t)).epsilon(1e-9));
      }
    }
  }
  CHECK(saw_flat);
  CHECK(saw_rise);

  // The escaped label appears intact after XML parsing.
  std::vector<const boost::property_tree::ptree*> texts;
  collect(svg, "text", texts);
  bool found_label = false;
  for (const auto* t : texts) {
    if (t->get_value<std::string>() == "rise <&>") found_label = true;
  }
  CHECK(found_label);

  SUBCASE("per-seed mode layers thin lines underneath") {
    const auto path2 = tmp.path() / "plot_seeds.svg";
    plastic::render_accuracy_plot(records, path2, true);
    boost::property_tree::ptree doc2;
    boost::property_tree::read_xml(path2.string(), doc2);
    std::vector<const boost::property_tree::ptree*> all;
    collect(doc2.get_child("svg"), "polyline", all);
    CHECK(all.size() == 6);  // 4 per-seed + 2 means
    int thin = 0;
    for (const auto* p : all) {
      if (p->get<std::string>("<xmlattr>.stroke-width") == "0.8") ++thin;
    }
    CHECK(thin == 4);
  }

  SUBCASE("identical input renders identical bytes") {
    const auto path3 = tmp.path() / "again.svg";
    plastic::render_accuracy_plot(records, path3);
    CHECK(slurp(path) == slurp(path3));
  }
}

TEST_CASE("plotting nothing is a usage error") {
  fixture::TempDir tmp("svg-empty");
  std::vector<RunRecord> no_accs = {rec("A", 1, {})};
  CHECK_THROWS_AS(
      plastic::render_accuracy_plot(no_accs, tmp.path() / "x.svg"),
      plastic::UsageError);
  CHECK_THROWS_AS(
      plastic::render_accuracy_plot({}, tmp.path() / "y.svg"),
      plastic::UsageError);
}

}  // TEST_SUITE
