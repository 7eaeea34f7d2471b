#include "cntq/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace cntq {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 55.0;

struct Range {
  double lo = 0.0;
  double hi = 1.0;
  double scale(double v, double out_lo, double out_hi) const {
    if (hi == lo) return 0.5 * (out_lo + out_hi);
    return out_lo + (v - lo) / (hi - lo) * (out_hi - out_lo);
  }
};

Range padded(double lo, double hi) {
  if (lo > hi) std::swap(lo, hi);
  const double pad = (hi == lo) ? std::max(1.0, std::abs(hi)) * 0.1
                                : (hi - lo) * 0.05;
  return {lo - pad, hi + pad};
}

std::string escape(const std::string& text) {
  std::string out;
  for (const char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string header() {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + svg_num(kWidth) +
         "\" height=\"" + svg_num(kHeight) + "\" viewBox=\"0 0 " +
         svg_num(kWidth) + " " + svg_num(kHeight) + "\">\n"
         "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string text_at(double x, double y, const std::string& s,
                    const std::string& anchor = "middle",
                    const std::string& extra = "") {
  return "<text x=\"" + svg_num(x) + "\" y=\"" + svg_num(y) +
         "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"" +
         anchor + "\"" + extra + ">" + escape(s) + "</text>\n";
}

std::string axes_frame(const std::string& title, const std::string& x_label,
                       const std::string& y_label) {
  std::string out;
  out += "<rect x=\"" + svg_num(kMarginLeft) + "\" y=\"" + svg_num(kMarginTop) +
         "\" width=\"" + svg_num(kWidth - kMarginLeft - kMarginRight) +
         "\" height=\"" + svg_num(kHeight - kMarginTop - kMarginBottom) +
         "\" fill=\"none\" stroke=\"#888888\"/>\n";
  out += text_at(kWidth / 2.0, kMarginTop - 14.0, title, "middle",
                 " font-weight=\"bold\"");
  out += text_at(kWidth / 2.0, kHeight - 12.0, x_label);
  out += text_at(16.0, kHeight / 2.0, y_label, "middle",
                 " transform=\"rotate(-90 16 " + svg_num(kHeight / 2.0) + ")\"");
  return out;
}

}  // namespace

std::string svg_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string SvgScatter::render() const {
  double x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;
  bool first = true;
  for (const SvgSeries& s : series) {
    for (const SvgPoint& p : s.points) {
      if (first) {
        x_lo = x_hi = p.x;
        y_lo = y_hi = p.y;
        first = false;
      } else {
        x_lo = std::min(x_lo, p.x);
        x_hi = std::max(x_hi, p.x);
        y_lo = std::min(y_lo, p.y);
        y_hi = std::max(y_hi, p.y);
      }
    }
  }
  const Range xr = padded(x_lo, x_hi);
  const Range yr = padded(y_lo, y_hi);

  std::string out = header();
  out += axes_frame(title, x_label, y_label);

  // axis end labels
  out += text_at(kMarginLeft, kHeight - kMarginBottom + 16.0, svg_num(xr.lo));
  out += text_at(kWidth - kMarginRight, kHeight - kMarginBottom + 16.0,
                 svg_num(xr.hi));
  out += text_at(kMarginLeft - 6.0, kHeight - kMarginBottom, svg_num(yr.lo), "end");
  out += text_at(kMarginLeft - 6.0, kMarginTop + 10.0, svg_num(yr.hi), "end");

  double legend_y = kMarginTop + 14.0;
  for (const SvgSeries& s : series) {
    for (const SvgPoint& p : s.points) {
      const double cx = xr.scale(p.x, kMarginLeft, kWidth - kMarginRight);
      const double cy = yr.scale(p.y, kHeight - kMarginBottom, kMarginTop);
      out += "<circle cx=\"" + svg_num(cx) + "\" cy=\"" + svg_num(cy) +
             "\" r=\"3\" fill=\"" + s.color + "\" fill-opacity=\"0.7\"/>\n";
    }
    out += "<circle cx=\"" + svg_num(kWidth - kMarginRight - 120.0) + "\" cy=\"" +
           svg_num(legend_y - 4.0) + "\" r=\"4\" fill=\"" + s.color + "\"/>\n";
    out += text_at(kWidth - kMarginRight - 110.0, legend_y, s.label, "start");
    legend_y += 16.0;
  }
  out += "</svg>\n";
  return out;
}

std::string SvgBars::render() const {
  double v_hi = 0.0;
  for (const SvgBarGroup& g : groups) {
    for (const double v : g.values) v_hi = std::max(v_hi, v);
  }
  if (v_hi <= 0.0) v_hi = 1.0;
  const Range yr{0.0, v_hi * 1.1};

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double base_y = kHeight - kMarginBottom;
  const std::size_t n_groups = std::max<std::size_t>(groups.size(), 1);
  const double group_w = plot_w / static_cast<double>(n_groups);

  static const char* kPalette[] = {"#4477aa", "#cc6677", "#ddaa33", "#117733"};

  std::string out = header();
  out += axes_frame(title, "", y_label);
  out += text_at(kMarginLeft - 6.0, base_y, "0", "end");
  out += text_at(kMarginLeft - 6.0, kMarginTop + 10.0, svg_num(yr.hi), "end");

  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const SvgBarGroup& g = groups[gi];
    const double gx = kMarginLeft + group_w * static_cast<double>(gi);
    const std::size_t n_bars = std::max<std::size_t>(g.values.size(), 1);
    const double bar_w = group_w * 0.8 / static_cast<double>(n_bars);
    for (std::size_t bi = 0; bi < g.values.size(); ++bi) {
      const double x = gx + group_w * 0.1 + bar_w * static_cast<double>(bi);
      const double top = yr.scale(g.values[bi], base_y, kMarginTop);
      out += "<rect x=\"" + svg_num(x) + "\" y=\"" + svg_num(top) +
             "\" width=\"" + svg_num(bar_w * 0.9) + "\" height=\"" +
             svg_num(base_y - top) + "\" fill=\"" +
             kPalette[bi % 4] + "\"/>\n";
      out += text_at(x + bar_w * 0.45, top - 4.0, svg_num(g.values[bi]));
    }
    out += text_at(gx + group_w / 2.0, base_y + 16.0, g.label);
  }

  double legend_y = kMarginTop + 14.0;
  for (std::size_t bi = 0; bi < bar_labels.size(); ++bi) {
    out += "<rect x=\"" + svg_num(kWidth - kMarginRight - 130.0) + "\" y=\"" +
           svg_num(legend_y - 10.0) + "\" width=\"10\" height=\"10\" fill=\"" +
           kPalette[bi % 4] + "\"/>\n";
    out += text_at(kWidth - kMarginRight - 114.0, legend_y, bar_labels[bi],
                   "start");
    legend_y += 16.0;
  }
  out += "</svg>\n";
  return out;
}

}  // namespace cntq
