#pragma once

#include <string>
#include <vector>

namespace cntq {

struct SvgPoint {
  double x = 0.0;
  double y = 0.0;
};

struct SvgSeries {
  std::string label;
  std::string color;
  std::vector<SvgPoint> points;
};

/// Scatter chart with linear axes, rendered to a self-contained SVG string.
/// Output bytes are deterministic for identical inputs.
struct SvgScatter {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<SvgSeries> series;
  std::string render() const;
};

struct SvgBarGroup {
  std::string label;               // group name (e.g. feature source)
  std::vector<double> values;      // one per bar in the group
};

/// Grouped bar chart; bar_labels name the bars within each group.
struct SvgBars {
  std::string title;
  std::string y_label;
  std::vector<std::string> bar_labels;
  std::vector<SvgBarGroup> groups;
  std::string render() const;
};

/// Fixed-precision decimal for SVG coordinates.
std::string svg_num(double v);

}  // namespace cntq
