#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "windecomp/calendar.hpp"
#include "windecomp/fleet.hpp"
#include "windecomp/windgrid.hpp"

namespace testing {

/// Rotor diameter whose swept area is `area` m².
inline double diameter_for_area(double area) { return std::sqrt(4.0 * area / std::numbers::pi); }

inline windecomp::fleet::TurbineRecord make_turbine(std::string id, int year, double lon = -99.5, double lat = 40.5,
                                                    double rotor = 100.0, double hub = 80.0,
                                                    double cap_kw = 2000.0) {
  windecomp::fleet::TurbineRecord t;
  t.id = std::move(id);
  t.lon = lon;
  t.lat = lat;
  t.commissioning_year = year;
  t.rotor_diameter = rotor;
  t.hub_height = hub;
  t.capacity_kw = cap_kw;
  return t;
}

/// 2×2 hourly grid over lon −100..−99, lat 40..41 with components along u.
inline windecomp::windgrid::WindGrid constant_grid(windecomp::YearRange years, float v10, float v100) {
  const auto t0 = windecomp::unix_seconds(years.first, 1, 1);
  const auto t1 = windecomp::unix_seconds(years.last + 1, 1, 1);
  const auto n = static_cast<std::size_t>((t1 - t0) / 3600);
  std::array<std::vector<float>, 4> data;
  data[0].assign(n * 4, v10);
  data[1].assign(n * 4, 0.0f);
  data[2].assign(n * 4, v100);
  data[3].assign(n * 4, 0.0f);
  return windecomp::windgrid::WindGrid({40.0, 41.0}, {-100.0, -99.0}, t0, 3600, n, std::move(data));
}

}  // namespace testing
