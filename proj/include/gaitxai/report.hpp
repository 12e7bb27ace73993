#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gaitxai/eval.hpp"
#include "gaitxai/spm1d.hpp"

namespace gaitxai {

// Everything the figure panels need, keyed by canonical channel name.
struct PanelData {
  std::size_t series_length = 0;
  std::map<std::string, SignalStats> class0_stats;
  std::map<std::string, SignalStats> class1_stats;
  std::map<std::string, std::vector<double>> mean_rel0;
  std::map<std::string, std::vector<double>> mean_rel1;
  std::map<std::string, std::vector<double>> total_rel;
  std::map<std::string, SpmResult> spm;
};

// 64-step diverging color map, symmetric around zero; max_abs = 0 yields the
// neutral mid color.
std::string relevance_color(double value, double max_abs);

// Figure panels as deterministic SVG documents (1200x300 viewport each).
std::string render_panel_a(const PanelData& data);  // class means + SPM clusters
std::string render_panel_b(const PanelData& data);  // class 0 mean, sd band, relevance
std::string render_panel_c(const PanelData& data);  // class 1, likewise
std::string render_panel_d(const PanelData& data);  // effect size + total relevance

std::string render_overlap_table(
    const std::vector<std::pair<std::string, OverlapScore>>& entries);

}  // namespace gaitxai
