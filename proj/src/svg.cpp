#include "windecomp/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "windecomp/series.hpp"

namespace windecomp::svg {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 180.0;  // legend column
constexpr double kTop = 60.0;
constexpr double kBottom = 60.0;

constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                              "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string escape(const std::string& s) {
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

std::string coord(double v) { return fmt::format("{:.2f}", v); }

std::string tick_label(double v) {
  if (std::fabs(v) < 1e-12) return "0";
  return fmt::format("{:.4g}", v);
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish(bool pad) {
    if (lo > hi) {
      lo = 0.0;
      hi = 1.0;
    }
    // spans at rounding-noise level are drawn as flat lines
    const double mag = std::max(std::fabs(lo), std::fabs(hi));
    if (hi - lo <= 1e-9 * mag || lo == hi) {
      const double mid = lo + (hi - lo) / 2;
      const double d = mid == 0.0 ? 1.0 : std::fabs(mid) * 0.05;
      lo = mid - d;
      hi = mid + d;
    } else if (pad) {
      const double d = (hi - lo) * 0.05;
      lo -= d;
      hi += d;
    }
  }
};

double nice_step(double span) {
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double r = raw / mag;
  const double nice = r < 1.5 ? 1.0 : r < 3.0 ? 2.0 : r < 7.0 ? 5.0 : 10.0;
  return nice * mag;
}

}  // namespace

bool Chart::empty() const noexcept {
  return std::all_of(series.begin(), series.end(), [](const Series& s) { return s.x.empty(); });
}

std::string render(const Chart& chart) {
  std::string out;
  out += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
      "font-family=\"sans-serif\" font-size=\"12\">\n",
      kWidth, kHeight);
  out += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n", kWidth, kHeight);
  out += fmt::format("<text x=\"{}\" y=\"24\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n",
                     coord(kWidth / 2), escape(chart.title));
  for (std::size_t i = 0; i < chart.notes.size(); ++i) {
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" fill=\"#444\">{}</text>\n",
                       coord(kWidth / 2), coord(42.0 + 14.0 * static_cast<double>(i)), escape(chart.notes[i]));
  }

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  if (chart.empty()) {
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" fill=\"#888\">no data</text>\n",
                       coord(kLeft + plot_w / 2), coord(kTop + plot_h / 2));
    out += "</svg>\n";
    return out;
  }

  Range xr, yr;
  bool has_bars = false;
  double min_dx = std::numeric_limits<double>::infinity();
  std::size_t bar_series = 0;
  for (const auto& s : chart.series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xr.add(s.x[i]);
      yr.add(s.y[i]);
      if (s.style == Style::Bars) yr.add(s.y0.empty() ? 0.0 : s.y0[i]);
      if (i > 0) min_dx = std::min(min_dx, std::fabs(s.x[i] - s.x[i - 1]));
    }
    if (s.style == Style::Bars) {
      has_bars = true;
      ++bar_series;
    }
  }
  if (!std::isfinite(min_dx) || min_dx == 0.0) min_dx = 1.0;
  if (has_bars) {
    xr.lo -= min_dx / 2;
    xr.hi += min_dx / 2;
  }
  xr.finish(!has_bars);
  yr.finish(true);

  const auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
  const auto py = [&](double y) { return kTop + plot_h - (y - yr.lo) / (yr.hi - yr.lo) * plot_h; };

  // axes and ticks
  out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#000\"/>\n",
                     coord(kLeft), coord(kTop), coord(plot_w), coord(plot_h));
  const double ys = nice_step(yr.hi - yr.lo);
  for (double k = std::ceil(yr.lo / ys), v = k * ys; v <= yr.hi + ys * 1e-9; v = ++k * ys) {
    out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"#ddd\"/>\n", coord(kLeft),
                       coord(py(v)), coord(kLeft + plot_w));
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", coord(kLeft - 6),
                       coord(py(v) + 4), tick_label(v));
  }
  const double xs = std::max(nice_step(xr.hi - xr.lo), has_bars ? min_dx : 0.0);
  for (double k = std::ceil(xr.lo / xs), v = k * xs; v <= xr.hi + xs * 1e-9; v = ++k * xs) {
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", coord(px(v)),
                       coord(kTop + plot_h + 18), tick_label(v));
  }
  if (yr.lo < 0.0 && yr.hi > 0.0) {
    out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"#000\"/>\n", coord(kLeft),
                       coord(py(0.0)), coord(kLeft + plot_w));
  }
  out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", coord(kLeft + plot_w / 2),
                     coord(kHeight - 16), escape(chart.x_label));
  out += fmt::format("<text x=\"16\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {0})\">{1}</text>\n",
                     coord(kTop + plot_h / 2), escape(chart.y_label));

  const double bar_w =
      (px(xr.lo + min_dx) - px(xr.lo)) * 0.8 / static_cast<double>(std::max<std::size_t>(bar_series, 1));
  std::size_t bar_index = 0;
  for (std::size_t k = 0; k < chart.series.size(); ++k) {
    const auto& s = chart.series[k];
    const char* color = kPalette[k % kPalette.size()];
    switch (s.style) {
      case Style::Line:
      case Style::Dashed: {
        std::string pts;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
          if (i) pts += ' ';
          pts += coord(px(s.x[i])) + "," + coord(py(s.y[i]));
        }
        out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"2\"{} points=\"{}\"/>\n", color,
                           s.style == Style::Dashed ? " stroke-dasharray=\"6 4\"" : "", pts);
        break;
      }
      case Style::Points:
        for (std::size_t i = 0; i < s.x.size(); ++i) {
          out += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"{}\"/>\n", coord(px(s.x[i])),
                             coord(py(s.y[i])), color);
        }
        break;
      case Style::Bars: {
        const double offset = (static_cast<double>(bar_index) - static_cast<double>(bar_series - 1) / 2.0) * bar_w;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
          const double base = s.y0.empty() ? 0.0 : s.y0[i];
          const double top = std::max(py(base), py(s.y[i]));
          const double bottom = std::min(py(base), py(s.y[i]));
          out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>\n",
                             coord(px(s.x[i]) + offset - bar_w / 2), coord(bottom), coord(bar_w),
                             coord(top - bottom), color);
        }
        ++bar_index;
        break;
      }
    }
    const double ly = kTop + 10.0 + 18.0 * static_cast<double>(k);
    const double lx = kLeft + plot_w + 14.0;
    out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"12\" height=\"12\" fill=\"{}\"/>\n", coord(lx),
                       coord(ly - 10), color);
    out += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", coord(lx + 18), coord(ly), escape(s.name));
  }
  out += "</svg>\n";
  return out;
}

std::string to_csv(const Chart& chart) {
  std::string out = "series,x,y,y0\n";
  for (const auto& s : chart.series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      out += fmt::format("{},{},{},{}\n", s.name, format_number(s.x[i]), format_number(s.y[i]),
                         s.y0.empty() ? std::string() : format_number(s.y0[i]));
    }
  }
  return out;
}

}  // namespace windecomp::svg
