#pragma once

#include <string>
#include <vector>

namespace windecomp::svg {

enum class Style { Line, Dashed, Points, Bars };

struct Series {
  std::string name;
  Style style = Style::Line;
  std::vector<double> x;
  std::vector<double> y;
  /// Bar bottoms for Style::Bars; empty means bars start at 0.
  std::vector<double> y0;
};

/// Data model of one figure. Rendering is a pure function of this value.
struct Chart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  std::vector<std::string> notes;  // printed under the title

  bool empty() const noexcept;
};

/// Deterministic SVG document; an empty chart renders a "no data" placeholder.
std::string render(const Chart& chart);

/// Tidy CSV `series,x,y,y0` with every plotted point.
std::string to_csv(const Chart& chart);

}  // namespace windecomp::svg
