#include <doctest.h>

#include <string>

#include "gaitxai/data_ingest.hpp"
#include "gaitxai/report.hpp"

using namespace gaitxai;

namespace {

PanelData sample_panel_data() {
  SyntheticSpec spec;
  spec.n_subjects_class0 = spec.n_subjects_class1 = 4;
  spec.trials_per_subject = 2;
  spec.series_length = 30;
  spec.bump_center = 15;
  spec.bump_width = 5;
  const Dataset ds = generate_synthetic(spec, 5);

  PanelData data;
  data.series_length = ds.series_length;
  data.class0_stats = aggregate_signals(ds, 0);
  data.class1_stats = aggregate_signals(ds, 1);
  for (std::size_t c = 0; c < kNumChannels; ++c) {
    const std::string name = ChannelId::from_index(c).name();
    std::vector<double> rel(ds.series_length, 0.0);
    for (std::size_t i = 10; i <= 20; ++i) rel[i] = c == 0 ? 0.2 : 0.01;
    data.mean_rel0[name] = rel;
    data.mean_rel1[name] = rel;
    data.total_rel[name] = rel;

    CurveGroup a{"f", {}}, b{"m", {}};
    for (const auto& t : ds.trials) {
      (t.sex == Sex::Female ? a : b).curves.push_back(t.curves[c]);
    }
    data.spm[name] = spm_two_sample(a, b);
  }
  return data;
}

std::size_t count_substr(const std::string& s, const std::string& needle) {
  std::size_t count = 0;
  for (std::size_t pos = s.find(needle); pos != std::string::npos;
       pos = s.find(needle, pos + needle.size())) {
    ++count;
  }
  return count;
}

void check_svg_shell(const std::string& svg) {
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("<svg xmlns=\"http://www.w3.org/2000/svg\"") !=
        std::string::npos);
  CHECK(svg.find("width=\"1200\"") != std::string::npos);
  CHECK(svg.find("height=\"300\"") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  // One frame + label per channel cell.
  for (std::size_t c = 0; c < kNumChannels; ++c) {
    const std::string label =
        ">" + ChannelId::from_index(c).name() + "</text>";
    CHECK(count_substr(svg, label) == 1);
  }
  // Every tag opened is closed (self-closing elements are fine).
  CHECK(count_substr(svg, "<svg") == count_substr(svg, "</svg>"));
}

}  // namespace

TEST_CASE("relevance_color endpoints and neutrality") {
  // Quantized interior endpoints of the 64-step map.
  CHECK(relevance_color(-1.0, 1.0) == relevance_color(-100.0, 100.0));
  CHECK(relevance_color(1.0, 1.0) == relevance_color(100.0, 100.0));
  CHECK(relevance_color(-1.0, 1.0) != relevance_color(1.0, 1.0));

  // Zero relevance and a degenerate (all-zero) scale both map to the
  // neutral mid color.
  const std::string neutral = relevance_color(0.0, 0.0);
  CHECK(relevance_color(0.0, 123.0) == neutral);
  CHECK(neutral[0] == '#');
  CHECK(neutral.size() == 7);

  // Warmth (red minus blue) grows monotonically from blue to red.
  auto warmth = [](const std::string& hex) {
    return std::stoi(hex.substr(1, 2), nullptr, 16) -
           std::stoi(hex.substr(5, 2), nullptr, 16);
  };
  int prev = -1000;
  for (double v : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
    const int w = warmth(relevance_color(v, 1.0));
    CHECK(w >= prev);
    prev = w;
  }

  // Exactly 64 distinct colors over a fine sweep.
  std::set<std::string> colors;
  for (int i = 0; i <= 1000; ++i) {
    colors.insert(relevance_color(-1.0 + 2.0 * i / 1000.0, 1.0));
  }
  CHECK(colors.size() == 64);
}

TEST_CASE("panels render valid deterministic SVG") {
  const PanelData data = sample_panel_data();

  const std::string a = render_panel_a(data);
  const std::string b = render_panel_b(data);
  const std::string c = render_panel_c(data);
  const std::string d = render_panel_d(data);
  for (const auto& svg : {a, b, c, d}) check_svg_shell(svg);

  SUBCASE("panel A draws two class means per cell") {
    CHECK(count_substr(a, "stroke=\"#2166ac\"") == kNumChannels);
    CHECK(count_substr(a, "stroke=\"#b2182b\"") == kNumChannels);
  }
  SUBCASE("panels B/C draw sd bands and colored segments") {
    CHECK(count_substr(b, "<polygon") == kNumChannels);
    CHECK(count_substr(b, "<line ") ==
          kNumChannels * (data.series_length - 1));
    CHECK(count_substr(c, "<polygon") == kNumChannels);
  }
  SUBCASE("panel D overlays effect size and total relevance") {
    CHECK(count_substr(d, "stroke=\"#404040\"") == kNumChannels);
    CHECK(count_substr(d, "stroke=\"#7b3294\"") == kNumChannels);
  }
  SUBCASE("rendering is deterministic") {
    CHECK(render_panel_a(data) == a);
    CHECK(render_panel_b(data) == b);
    CHECK(render_panel_c(data) == c);
    CHECK(render_panel_d(data) == d);
  }
}

TEST_CASE("zero relevance renders as the neutral color") {
  PanelData data = sample_panel_data();
  for (auto& [name, curve] : data.mean_rel0) {
    std::fill(curve.begin(), curve.end(), 0.0);
  }
  const std::string svg = render_panel_b(data);
  const std::string neutral = relevance_color(0.0, 0.0);
  CHECK(count_substr(svg, "stroke=\"" + neutral + "\"") ==
        kNumChannels * (data.series_length - 1));
}

TEST_CASE("overlap table formatting") {
  OverlapScore score;
  score.overall = 1.0 / 3.0;
  score.per_channel["L_V"] = 0.5;
  score.per_channel["R_V"] = 0.0;
  const std::string table = render_overlap_table({{"lrp-vs-spm", score}});
  CHECK(table.find("Jaccard") != std::string::npos);
  CHECK(table.find("lrp-vs-spm") != std::string::npos);
  CHECK(table.find("overall=0.3333") != std::string::npos);
  CHECK(table.find("L_V") != std::string::npos);
  CHECK(table.find("0.5000") != std::string::npos);
}
