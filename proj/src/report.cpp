#include "gaitxai/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace gaitxai {

namespace {

constexpr double kPanelWidth = 1200.0;
constexpr double kPanelHeight = 300.0;
constexpr double kCellWidth = 400.0;
constexpr double kCellHeight = 150.0;
constexpr double kMarginLeft = 42.0;
constexpr double kMarginRight = 10.0;
constexpr double kMarginTop = 18.0;
constexpr double kMarginBottom = 14.0;

const char* kChannelOrder[kNumChannels] = {"L_V",  "L_AP", "L_ML",
                                           "R_V",  "R_AP", "R_ML"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

struct Cell {
  double x0, y0;          // plot-box origin in document coordinates
  double width, height;   // plot-box size
  double ymin, ymax;      // data range
  std::size_t n;          // nodes

  double px(std::size_t i) const {
    return x0 + width * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  double py(double v) const {
    const double range = ymax > ymin ? ymax - ymin : 1.0;
    return y0 + height - height * (v - ymin) / range;
  }
};

Cell make_cell(std::size_t channel_index, double ymin, double ymax,
               std::size_t n) {
  const double col = static_cast<double>(channel_index % 3);
  const double row = static_cast<double>(channel_index / 3);
  if (ymax <= ymin) ymax = ymin + 1.0;
  return {col * kCellWidth + kMarginLeft,
          row * kCellHeight + kMarginTop,
          kCellWidth - kMarginLeft - kMarginRight,
          kCellHeight - kMarginTop - kMarginBottom,
          ymin, ymax, n};
}

class Svg {
 public:
  Svg() {
    os_ << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kPanelWidth
        << "\" height=\"" << kPanelHeight << "\" viewBox=\"0 0 " << kPanelWidth
        << " " << kPanelHeight << "\">\n"
        << "<rect width=\"" << kPanelWidth << "\" height=\"" << kPanelHeight
        << "\" fill=\"#ffffff\"/>\n";
  }

  void frame(const Cell& cell, const std::string& label) {
    os_ << "<rect x=\"" << fmt(cell.x0) << "\" y=\"" << fmt(cell.y0)
        << "\" width=\"" << fmt(cell.width) << "\" height=\"" << fmt(cell.height)
        << "\" fill=\"none\" stroke=\"#888888\" stroke-width=\"0.5\"/>\n";
    os_ << "<text x=\"" << fmt(cell.x0 + 4.0) << "\" y=\""
        << fmt(cell.y0 - 5.0)
        << "\" font-family=\"monospace\" font-size=\"11\">" << label
        << "</text>\n";
  }

  void polyline(const Cell& cell, const std::vector<double>& curve,
                const std::string& color, double width = 1.0) {
    os_ << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"" << fmt(width) << "\" points=\"";
    for (std::size_t i = 0; i < curve.size(); ++i) {
      if (i) os_ << ' ';
      os_ << fmt(cell.px(i)) << ',' << fmt(cell.py(curve[i]));
    }
    os_ << "\"/>\n";
  }

  // Per-segment colored line for relevance color-coding.
  void colored_line(const Cell& cell, const std::vector<double>& curve,
                    const std::vector<double>& colors, double max_abs) {
    for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
      os_ << "<line x1=\"" << fmt(cell.px(i)) << "\" y1=\""
          << fmt(cell.py(curve[i])) << "\" x2=\"" << fmt(cell.px(i + 1))
          << "\" y2=\"" << fmt(cell.py(curve[i + 1])) << "\" stroke=\""
          << relevance_color(colors[i], max_abs)
          << "\" stroke-width=\"2.0\"/>\n";
    }
  }

  void band(const Cell& cell, const std::vector<double>& lo,
            const std::vector<double>& hi, const std::string& color) {
    os_ << "<polygon fill=\"" << color << "\" fill-opacity=\"0.35\" "
        << "stroke=\"none\" points=\"";
    for (std::size_t i = 0; i < hi.size(); ++i) {
      if (i) os_ << ' ';
      os_ << fmt(cell.px(i)) << ',' << fmt(cell.py(hi[i]));
    }
    for (std::size_t i = lo.size(); i-- > 0;) {
      os_ << ' ' << fmt(cell.px(i)) << ',' << fmt(cell.py(lo[i]));
    }
    os_ << "\"/>\n";
  }

  void shade(const Cell& cell, std::size_t start, std::size_t end) {
    const double x = cell.px(start);
    const double w = cell.px(end) - x;
    os_ << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(cell.y0) << "\" width=\""
        << fmt(std::max(w, 1.0)) << "\" height=\"" << fmt(cell.height)
        << "\" fill=\"#bbbbbb\" fill-opacity=\"0.5\"/>\n";
  }

  void axis_labels(const Cell& cell) {
    os_ << "<text x=\"" << fmt(cell.x0 - 4.0) << "\" y=\""
        << fmt(cell.py(cell.ymax) + 8.0)
        << "\" font-family=\"monospace\" font-size=\"9\" text-anchor=\"end\">"
        << fmt(cell.ymax) << "</text>\n";
    os_ << "<text x=\"" << fmt(cell.x0 - 4.0) << "\" y=\""
        << fmt(cell.py(cell.ymin))
        << "\" font-family=\"monospace\" font-size=\"9\" text-anchor=\"end\">"
        << fmt(cell.ymin) << "</text>\n";
  }

  std::string finish() {
    os_ << "</svg>\n";
    return os_.str();
  }

 private:
  std::ostringstream os_;
};

std::pair<double, double> range_of(const std::vector<double>& v,
                                   double lo = 1e300, double hi = -1e300) {
  for (double x : v) {
    if (!std::isfinite(x)) continue;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  return {lo, hi};
}

}  // namespace

std::string relevance_color(double value, double max_abs) {
  int step = 32;
  if (max_abs > 0.0) {
    const double t = (std::clamp(value, -max_abs, max_abs) + max_abs) /
                     (2.0 * max_abs);
    step = std::min(63, static_cast<int>(t * 64.0));
  }
  // Diverging blue -> neutral -> red, quantized to 64 steps.
  const double t = (static_cast<double>(step) + 0.5) / 64.0;
  const int blue[3] = {33, 102, 172};
  const int neutral[3] = {247, 247, 247};
  const int red[3] = {178, 24, 43};
  int rgb[3];
  for (int i = 0; i < 3; ++i) {
    if (t < 0.5) {
      const double u = t * 2.0;
      rgb[i] = static_cast<int>(std::lround(blue[i] + u * (neutral[i] - blue[i])));
    } else {
      const double u = (t - 0.5) * 2.0;
      rgb[i] = static_cast<int>(std::lround(neutral[i] + u * (red[i] - neutral[i])));
    }
  }
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
  return buf;
}

std::string render_panel_a(const PanelData& data) {
  Svg svg;
  for (std::size_t c = 0; c < kNumChannels; ++c) {
    const std::string channel = kChannelOrder[c];
    const auto& m0 = data.class0_stats.at(channel).mean;
    const auto& m1 = data.class1_stats.at(channel).mean;
    auto [lo, hi] = range_of(m0);
    std::tie(lo, hi) = range_of(m1, lo, hi);
    Cell cell = make_cell(c, lo, hi, data.series_length);
    auto spm_it = data.spm.find(channel);
    if (spm_it != data.spm.end()) {
      for (const auto& cluster : spm_it->second.clusters) {
        svg.shade(cell, cluster.start, cluster.end);
      }
    }
    svg.frame(cell, channel);
    svg.axis_labels(cell);
    svg.polyline(cell, m0, "#2166ac", 1.2);
    svg.polyline(cell, m1, "#b2182b", 1.2);
  }
  return svg.finish();
}

namespace {

std::string render_class_panel(const PanelData& data, int class_index) {
  const auto& stats = class_index == 0 ? data.class0_stats : data.class1_stats;
  const auto& rel = class_index == 0 ? data.mean_rel0 : data.mean_rel1;
  double max_abs = 0.0;
  for (const auto& [channel, curve] : rel) {
    for (double v : curve) max_abs = std::max(max_abs, std::abs(v));
  }
  Svg svg;
  for (std::size_t c = 0; c < kNumChannels; ++c) {
    const std::string channel = kChannelOrder[c];
    const auto& s = stats.at(channel);
    std::vector<double> lo_band(s.mean.size()), hi_band(s.mean.size());
    for (std::size_t i = 0; i < s.mean.size(); ++i) {
      lo_band[i] = s.mean[i] - s.sd[i];
      hi_band[i] = s.mean[i] + s.sd[i];
    }
    auto [lo, hi] = range_of(lo_band);
    std::tie(lo, hi) = range_of(hi_band, lo, hi);
    Cell cell = make_cell(c, lo, hi, data.series_length);
    svg.frame(cell, channel);
    svg.axis_labels(cell);
    svg.band(cell, lo_band, hi_band, "#cccccc");
    auto rel_it = rel.find(channel);
    if (rel_it != rel.end()) {
      svg.colored_line(cell, s.mean, rel_it->second, max_abs);
    } else {
      svg.polyline(cell, s.mean, relevance_color(0.0, 0.0), 2.0);
    }
  }
  return svg.finish();
}

}  // namespace

std::string render_panel_b(const PanelData& data) {
  return render_class_panel(data, 0);
}

std::string render_panel_c(const PanelData& data) {
  return render_class_panel(data, 1);
}

std::string render_panel_d(const PanelData& data) {
  Svg svg;
  double rel_max = 0.0;
  for (const auto& [channel, curve] : data.total_rel) {
    for (double v : curve) rel_max = std::max(rel_max, v);
  }
  for (std::size_t c = 0; c < kNumChannels; ++c) {
    const std::string channel = kChannelOrder[c];
    auto spm_it = data.spm.find(channel);
    std::vector<double> d_curve =
        spm_it != data.spm.end() ? spm_it->second.d_curve
                                 : std::vector<double>(data.series_length, 0.0);
    auto [lo, hi] = range_of(d_curve);
    lo = std::min(lo, 0.0);
    hi = std::max(hi, 0.0);
    Cell cell = make_cell(c, lo, hi, data.series_length);
    svg.frame(cell, channel);
    svg.axis_labels(cell);
    svg.polyline(cell, d_curve, "#404040", 1.2);
    // Total relevance, globally rescaled into the cell's vertical range.
    auto rel_it = data.total_rel.find(channel);
    if (rel_it != data.total_rel.end() && rel_max > 0.0) {
      std::vector<double> scaled(rel_it->second.size());
      for (std::size_t i = 0; i < scaled.size(); ++i) {
        scaled[i] = lo + (hi - lo) * rel_it->second[i] / rel_max;
      }
      svg.polyline(cell, scaled, "#7b3294", 1.2);
    }
  }
  return svg.finish();
}

std::string render_overlap_table(
    const std::vector<std::pair<std::string, OverlapScore>>& entries) {
  std::ostringstream os;
  os << "region overlap (Jaccard index)\n";
  for (const auto& [name, score] : entries) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%-24s overall=%.4f\n", name.c_str(),
                  score.overall);
    os << buf;
    for (const auto& [channel, value] : score.per_channel) {
      std::snprintf(buf, sizeof(buf), "  %-8s %.4f\n", channel.c_str(), value);
      os << buf;
    }
  }
  return os.str();
}

}  // namespace gaitxai
