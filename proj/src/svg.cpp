#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "banditlab/harness.hpp"

namespace banditlab {

namespace {

constexpr double kWidth = 920.0;
constexpr double kHeight = 560.0;
constexpr double kLeft = 80.0;
constexpr double kRight = kWidth - 220.0;  // room for the legend
constexpr double kTop = 40.0;
constexpr double kBottom = kHeight - 64.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

struct Axes {
  double x_min, x_max, y_min, y_max;

  double px(double x) const {
    return kLeft + (x - x_min) / std::max(x_max - x_min, 1e-300) * (kRight - kLeft);
  }
  double py(double y) const {
    return kBottom - (y - y_min) / std::max(y_max - y_min, 1e-300) * (kBottom - kTop);
  }
};

void open_svg(std::ostringstream& out, const AggregateResult& result, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  out << "  <metadata>config_hash=" << result.config_hash << " seed=" << result.seed
      << " trials=" << result.trials << "</metadata>\n";
  out << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "  <text x=\"" << (kLeft + (kRight - kLeft) / 2) << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
}

void draw_axes(std::ostringstream& out, const Axes& ax, const std::string& x_label,
               const std::string& y_label) {
  out << "  <line x1=\"" << num(kLeft) << "\" y1=\"" << num(kBottom) << "\" x2=\"" << num(kRight)
      << "\" y2=\"" << num(kBottom) << "\" stroke=\"black\"/>\n";
  out << "  <line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(kLeft)
      << "\" y2=\"" << num(kBottom) << "\" stroke=\"black\"/>\n";
  const int ticks = 5;
  for (int i = 0; i <= ticks; ++i) {
    const double fx = ax.x_min + (ax.x_max - ax.x_min) * i / ticks;
    const double fy = ax.y_min + (ax.y_max - ax.y_min) * i / ticks;
    out << "  <line x1=\"" << num(ax.px(fx)) << "\" y1=\"" << num(kBottom) << "\" x2=\""
        << num(ax.px(fx)) << "\" y2=\"" << num(kBottom + 5) << "\" stroke=\"black\"/>\n";
    out << "  <text x=\"" << num(ax.px(fx)) << "\" y=\"" << num(kBottom + 20)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << tick_label(fx) << "</text>\n";
    out << "  <line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(ax.py(fy)) << "\" x2=\""
        << num(kLeft) << "\" y2=\"" << num(ax.py(fy)) << "\" stroke=\"black\"/>\n";
    out << "  <text x=\"" << num(kLeft - 9) << "\" y=\"" << num(ax.py(fy) + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << tick_label(fy)
        << "</text>\n";
  }
  out << "  <text x=\"" << num(kLeft + (kRight - kLeft) / 2) << "\" y=\"" << num(kHeight - 16)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" << x_label
      << "</text>\n";
  out << "  <text x=\"20\" y=\"" << num(kTop + (kBottom - kTop) / 2)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
      << "transform=\"rotate(-90 20 " << num(kTop + (kBottom - kTop) / 2) << ")\">" << y_label
      << "</text>\n";
}

void draw_legend(std::ostringstream& out, const std::vector<std::string>& names) {
  const double x = kRight + 16.0;
  double y = kTop + 10.0;
  for (std::size_t a = 0; a < names.size(); ++a) {
    const char* color = kPalette[a % kPaletteSize];
    out << "  <line x1=\"" << num(x) << "\" y1=\"" << num(y) << "\" x2=\"" << num(x + 26)
        << "\" y2=\"" << num(y) << "\" stroke=\"" << color << "\" stroke-width=\"2.5\"/>\n";
    out << "  <text x=\"" << num(x + 32) << "\" y=\"" << num(y + 4)
        << "\" font-family=\"sans-serif\" font-size=\"13\">" << names[a] << "</text>\n";
    y += 22.0;
  }
}

void band_polygon(std::ostringstream& out, const Axes& ax, const std::vector<double>& xs,
                  const std::vector<double>& lo, const std::vector<double>& hi,
                  const char* color) {
  out << "  <polygon class=\"band\" fill=\"" << color << "\" fill-opacity=\"0.18\" "
      << "stroke=\"none\" points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out << num(ax.px(xs[i])) << ',' << num(ax.py(hi[i])) << ' ';
  }
  for (std::size_t i = xs.size(); i-- > 0;) {
    out << num(ax.px(xs[i])) << ',' << num(ax.py(lo[i])) << ' ';
  }
  out << "\"/>\n";
}

void curve_polyline(std::ostringstream& out, const Axes& ax, const std::vector<double>& xs,
                    const std::vector<double>& ys, const char* color) {
  out << "  <polyline class=\"curve\" fill=\"none\" stroke=\"" << color
      << "\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out << num(ax.px(xs[i])) << ',' << num(ax.py(ys[i])) << ' ';
  }
  out << "\"/>\n";
}

}  // namespace

std::string render_curves_svg(const AggregateResult& result) {
  if (result.mean_regret.empty()) {
    throw std::invalid_argument("render_curves_svg: result holds no curves");
  }
  Axes ax{1.0, 1.0, 0.0, 0.0};
  for (std::size_t a = 0; a < result.mean_regret.size(); ++a) {
    ax.x_max = std::max(ax.x_max, static_cast<double>(result.mean_regret[a].size()));
    for (std::size_t t = 0; t < result.mean_regret[a].size(); ++t) {
      ax.y_max = std::max(ax.y_max, result.mean_regret[a][t] + result.band_halfwidth[a][t]);
    }
  }
  if (ax.y_max <= 0.0) ax.y_max = 1.0;

  std::ostringstream out;
  open_svg(out, result, "mean cumulative regret (band: 2 std over trials)");
  for (std::size_t a = 0; a < result.algorithms.size(); ++a) {
    const char* color = kPalette[a % kPaletteSize];
    const auto& mean = result.mean_regret[a];
    const auto& band = result.band_halfwidth[a];
    std::vector<double> xs(mean.size()), lo(mean.size()), hi(mean.size());
    for (std::size_t t = 0; t < mean.size(); ++t) {
      xs[t] = static_cast<double>(t + 1);
      lo[t] = std::max(0.0, mean[t] - band[t]);
      hi[t] = mean[t] + band[t];
    }
    band_polygon(out, ax, xs, lo, hi, color);
    curve_polyline(out, ax, xs, mean, color);
  }
  draw_axes(out, ax, "step", "cumulative regret");
  draw_legend(out, result.algorithms);
  out << "</svg>\n";
  return out.str();
}

std::string render_sweep_svg(const AggregateResult& result) {
  if (result.sweep.empty()) throw std::invalid_argument("render_sweep_svg: result holds no sweep");

  Axes ax{1e300, -1e300, 0.0, 0.0};
  for (const SweepRow& row : result.sweep) {
    ax.x_min = std::min(ax.x_min, row.alpha);
    ax.x_max = std::max(ax.x_max, row.alpha);
    ax.y_max = std::max(ax.y_max, row.mean_terminal + row.band_halfwidth);
  }
  if (ax.x_max <= ax.x_min) {
    ax.x_min -= 0.05;
    ax.x_max += 0.05;
  }
  if (ax.y_max <= 0.0) ax.y_max = 1.0;

  std::ostringstream out;
  open_svg(out, result, "terminal regret vs hardness level (band: 2 std over trials)");
  for (std::size_t a = 0; a < result.algorithms.size(); ++a) {
    const char* color = kPalette[a % kPaletteSize];
    std::vector<double> xs, ys, lo, hi;
    for (const SweepRow& row : result.sweep) {
      if (row.algorithm != result.algorithms[a]) continue;
      xs.push_back(row.alpha);
      ys.push_back(row.mean_terminal);
      lo.push_back(std::max(0.0, row.mean_terminal - row.band_halfwidth));
      hi.push_back(row.mean_terminal + row.band_halfwidth);
    }
    if (xs.empty()) continue;
    band_polygon(out, ax, xs, lo, hi, color);
    curve_polyline(out, ax, xs, ys, color);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      out << "  <circle cx=\"" << num(ax.px(xs[i])) << "\" cy=\"" << num(ax.py(ys[i]))
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
  }
  draw_axes(out, ax, "hardness level", "terminal regret");
  draw_legend(out, result.algorithms);
  out << "</svg>\n";
  return out.str();
}

}  // namespace banditlab
