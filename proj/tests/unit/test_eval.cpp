#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

#include "gaitxai/data_ingest.hpp"
#include "gaitxai/eval.hpp"

using namespace gaitxai;

namespace {

Dataset small_synthetic(std::size_t n0, std::size_t n1, std::size_t trials,
                        std::uint64_t seed) {
  SyntheticSpec spec;
  spec.n_subjects_class0 = n0;
  spec.n_subjects_class1 = n1;
  spec.trials_per_subject = trials;
  spec.series_length = 40;
  spec.bump_center = 20;
  spec.bump_width = 6;
  return generate_synthetic(spec, seed);
}

}  // namespace

TEST_CASE("zero_rule majority share") {
  const Dataset ds = small_synthetic(34, 28, 5, 1);
  CHECK(zero_rule(ds) == 170.0 / 310.0);
  CHECK(zero_rule(ds) == doctest::Approx(0.548387).epsilon(1e-6));

  const Dataset flipped = small_synthetic(3, 7, 1, 1);
  CHECK(zero_rule(flipped) == 0.7);
  CHECK_THROWS_AS(zero_rule(Dataset{}), EmptyDataset);
}

TEST_CASE("run_cv structure and bookkeeping") {
  const Dataset ds = small_synthetic(6, 6, 2, 3);
  CvOptions opt;
  opt.k = 3;
  opt.seed = 17;
  opt.train.epochs = 2;  // speed over accuracy; structure is what matters here
  const CvResult res = run_cv(ds, opt);

  CHECK(res.report.fold_accuracy.size() == 3);
  CHECK(res.checkpoints.size() == 3);
  CHECK(res.report.seed == 17);
  CHECK(res.report.zero_rule_accuracy == 0.5);

  // Mean and sd are recomputable from the per-fold accuracies.
  double mean = 0.0;
  for (double a : res.report.fold_accuracy) mean += a;
  mean /= 3.0;
  double var = 0.0;
  for (double a : res.report.fold_accuracy) var += (a - mean) * (a - mean);
  CHECK(res.report.mean_accuracy == doctest::Approx(mean).epsilon(1e-12));
  CHECK(res.report.std_accuracy ==
        doctest::Approx(std::sqrt(var / 3.0)).epsilon(1e-12));

  // Confusion matrix accounts for every trial exactly once.
  std::size_t total = 0;
  for (const auto& row : res.report.confusion)
    for (std::size_t v : row) total += v;
  CHECK(total == ds.trials.size());

  // Folds partition subjects (subject-disjoint splits by construction).
  std::set<std::string> subjects;
  for (const auto& [subject, fold] : res.folds.assignments) {
    CHECK(fold < 3);
    subjects.insert(subject);
  }
  CHECK(subjects.size() == 12);

  SUBCASE("deterministic") {
    const CvResult again = run_cv(ds, opt);
    CHECK(again.report.fold_accuracy == res.report.fold_accuracy);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(again.checkpoints[i].serialize() == res.checkpoints[i].serialize());
    }
  }
}

TEST_CASE("report serialization") {
  EvalReport report;
  report.fold_accuracy = {0.8, 1.0};
  report.mean_accuracy = 0.9;
  report.std_accuracy = 0.1;
  report.zero_rule_accuracy = 170.0 / 310.0;
  report.confusion = {{{{7, 1}}, {{2, 6}}}};
  report.config_echo = "cfg";
  report.seed = 42;

  SUBCASE("json round-trips through a parser") {
    const auto j = nlohmann::json::parse(report_to_json(report));
    CHECK(j["mean_accuracy"] == 0.9);
    CHECK(j["std_kind"] == "population");
    CHECK(j["fold_accuracy"].size() == 2);
    CHECK(j["confusion"]["true1_pred0"] == 2);
    CHECK(j["zero_rule_accuracy"] == doctest::Approx(0.548387).epsilon(1e-6));
    CHECK(j["seed"] == 42);
  }
  SUBCASE("text carries the headline numbers") {
    const std::string text = report_to_text(report);
    CHECK(text.find("mean accuracy: 90.0%") != std::string::npos);
    CHECK(text.find("zero-rule baseline: 54.8%") != std::string::npos);
    CHECK(text.find("fold 1 accuracy: 1.0000") != std::string::npos);
  }
}

TEST_CASE("aggregate_signals matches a direct two-pass computation") {
  const Dataset ds = small_synthetic(3, 4, 2, 9);
  for (int cls : {0, 1}) {
    const auto stats = aggregate_signals(ds, cls);
    REQUIRE(stats.size() == kNumChannels);
    for (std::size_t c = 0; c < kNumChannels; ++c) {
      const auto& s = stats.at(ChannelId::from_index(c).name());
      REQUIRE(s.mean.size() == ds.series_length);
      for (std::size_t q = 0; q < ds.series_length; q += 7) {
        double mean = 0.0;
        std::size_t n = 0;
        for (const auto& t : ds.trials) {
          if (class_of(t.sex) == cls) {
            mean += t.curves[c][q];
            ++n;
          }
        }
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (const auto& t : ds.trials) {
          if (class_of(t.sex) == cls) {
            var += (t.curves[c][q] - mean) * (t.curves[c][q] - mean);
          }
        }
        var /= static_cast<double>(n);
        CHECK(s.mean[q] == doctest::Approx(mean).epsilon(1e-12));
        CHECK(s.sd[q] == doctest::Approx(std::sqrt(var)).epsilon(1e-12));
      }
    }
  }
  Dataset females_only = small_synthetic(2, 1, 1, 1);
  std::erase_if(females_only.trials,
                [](const GaitTrial& t) { return t.sex == Sex::Male; });
  CHECK_THROWS_AS(aggregate_signals(females_only, 1), EmptyGroup);
}

TEST_CASE("relevance_regions") {
  SUBCASE("point mass yields a single one-node region") {
    std::map<std::string, std::vector<double>> curves;
    curves["L_V"] = {0.0, 0.0, 5.0, 0.0};
    curves["R_V"] = {0.0, 0.0, 0.0, 0.0};
    const RegionSet set = relevance_regions(curves, 0.9);
    REQUIRE(set.regions.size() == 1);
    CHECK(set.regions[0].channel == "L_V");
    CHECK(set.regions[0].start == 2);
    CHECK(set.regions[0].end == 2);
    CHECK(set.provenance == "lrp");
  }
  SUBCASE("uniform curve picks the minimal node count") {
    std::map<std::string, std::vector<double>> curves;
    curves["L_V"] = std::vector<double>(10, 1.0);
    const RegionSet set = relevance_regions(curves, 0.5);
    std::size_t nodes = 0;
    for (const auto& r : set.regions) nodes += r.end - r.start + 1;
    CHECK(nodes == 5);
  }
  SUBCASE("contiguous picks merge into one region") {
    std::map<std::string, std::vector<double>> curves;
    curves["L_V"] = {0.1, 4.0, 5.0, 4.5, 0.1};
    const RegionSet set = relevance_regions(curves, 0.9);
    REQUIRE(set.regions.size() == 1);
    CHECK(set.regions[0].start == 1);
    CHECK(set.regions[0].end == 3);
  }
  SUBCASE("greedy selection is minimal for distinct values") {
    std::map<std::string, std::vector<double>> curves;
    curves["L_V"] = {8.0, 1.0, 4.0, 2.0};  // total 15, 60% needs 8+4 = 12
    const RegionSet set = relevance_regions(curves, 0.6);
    std::size_t nodes = 0;
    bool has0 = false, has2 = false;
    for (const auto& r : set.regions) {
      for (std::size_t i = r.start; i <= r.end; ++i) {
        ++nodes;
        has0 = has0 || i == 0;
        has2 = has2 || i == 2;
      }
    }
    CHECK(nodes == 2);
    CHECK(has0);
    CHECK(has2);
  }
  SUBCASE("degenerate inputs") {
    std::map<std::string, std::vector<double>> zero{{"L_V", {0.0, 0.0}}};
    CHECK_THROWS_AS(relevance_regions(zero, 0.5), ZeroCurve);
    std::map<std::string, std::vector<double>> neg{{"L_V", {-1.0, 2.0}}};
    CHECK_THROWS_AS(relevance_regions(neg, 0.5), ConfigError);
    std::map<std::string, std::vector<double>> ok{{"L_V", {1.0}}};
    CHECK_THROWS_AS(relevance_regions(ok, 0.0), ConfigError);
    CHECK_THROWS_AS(relevance_regions(ok, 1.5), ConfigError);
  }
}

TEST_CASE("overlap_score") {
  auto make = [](std::size_t start, std::size_t end) {
    RegionSet s;
    s.provenance = "lrp";
    s.regions.push_back({"r", "L_V", start, end});
    return s;
  };
  SUBCASE("identical sets score 1") {
    const OverlapScore score = overlap_score(make(3, 7), make(3, 7));
    CHECK(score.overall == 1.0);
    CHECK(score.per_channel.at("L_V") == 1.0);
  }
  SUBCASE("disjoint sets score 0") {
    CHECK(overlap_score(make(0, 4), make(10, 14)).overall == 0.0);
  }
  SUBCASE("half-shifted windows score 1/3") {
    const OverlapScore score = overlap_score(make(0, 9), make(5, 14));
    CHECK(score.overall == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  }
  SUBCASE("overall is node-weighted across channels") {
    RegionSet a = make(0, 9);
    a.regions.push_back({"x", "R_V", 0, 0});
    RegionSet b = make(0, 9);
    b.regions.push_back({"x", "R_V", 5, 5});
    const OverlapScore score = overlap_score(a, b);
    CHECK(score.per_channel.at("L_V") == 1.0);
    CHECK(score.per_channel.at("R_V") == 0.0);
    CHECK(score.overall == doctest::Approx(10.0 / 12.0).epsilon(1e-12));
  }
}

TEST_CASE("regions file round-trip") {
  namespace fs = std::filesystem;
  const fs::path path = fs::temp_directory_path() / "gaitxai_regions_test.csv";
  RegionSet set;
  set.provenance = "literature";
  set.regions.push_back({"push_off", "L_V", 70, 85});
  set.regions.push_back({"loading", "R_V", 10, 25});
  write_regions_file(path.string(), {set});
  const RegionSet parsed = parse_regions_file(path.string());
  REQUIRE(parsed.regions.size() == 2);
  CHECK(parsed.provenance == "literature");
  CHECK(parsed.regions[0].name == "push_off");
  CHECK(parsed.regions[1].channel == "R_V");
  CHECK(parsed.regions[1].start == 10);
  CHECK(parsed.regions[1].end == 25);
  fs::remove(path);

  CHECK_THROWS_AS(parse_regions_file("/nonexistent/regions.csv"), DataNotFound);

  SUBCASE("comment lines are skipped") {
    const fs::path commented =
        fs::temp_directory_path() / "gaitxai_regions_comment.csv";
    std::ofstream out(commented);
    out << "name,channel,start,end,provenance\n"
        << "# annotation only\n"
        << "r0,L_V,1,2,literature\n";
    out.close();
    const RegionSet p = parse_regions_file(commented.string());
    CHECK(p.regions.size() == 1);
    CHECK(p.provenance == "literature");
    fs::remove(commented);
  }
}

TEST_CASE("split_relevance_channels") {
  SUBCASE("temporal concatenation splits halves") {
    Tensor rel(3, 8);  // V, AP, ML over left(4) ++ right(4)
    for (std::size_t c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < 8; ++i)
        rel.at(c, i) = 10.0 * static_cast<double>(c) + static_cast<double>(i);
    const auto curves = split_relevance_channels(
        rel, InputLayout::TemporalConcat,
        {Component::V, Component::AP, Component::ML}, 4);
    REQUIRE(curves.size() == 6);
    CHECK(curves.at("L_V") == std::vector<double>{0, 1, 2, 3});
    CHECK(curves.at("R_V") == std::vector<double>{4, 5, 6, 7});
    CHECK(curves.at("L_ML") == std::vector<double>{20, 21, 22, 23});
    CHECK(curves.at("R_AP") == std::vector<double>{14, 15, 16, 17});
  }
  SUBCASE("channel stack splits rows") {
    Tensor rel(2, 4);  // V only: row 0 = left, row 1 = right
    rel.data = {1, 2, 3, 4, 5, 6, 7, 8};
    const auto curves = split_relevance_channels(rel, InputLayout::ChannelStack,
                                                 {Component::V}, 4);
    REQUIRE(curves.size() == 2);
    CHECK(curves.at("L_V") == std::vector<double>{1, 2, 3, 4});
    CHECK(curves.at("R_V") == std::vector<double>{5, 6, 7, 8});
  }
  SUBCASE("shape mismatch rejected") {
    Tensor rel(3, 7);
    CHECK_THROWS_AS(
        split_relevance_channels(rel, InputLayout::TemporalConcat,
                                 {Component::V, Component::AP, Component::ML},
                                 4),
        ShapeMismatch);
  }
}
