#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "windecomp/calendar.hpp"

namespace windecomp::windgrid {

enum class Variable : std::uint8_t { U10 = 0, V10 = 1, U100 = 2, V100 = 3 };

inline constexpr std::array<Variable, 4> kVariables{Variable::U10, Variable::V10, Variable::U100,
                                                    Variable::V100};
std::string_view variable_name(Variable v) noexcept;
/// Accepts "u10", "v10", "u100", "v100".
Variable parse_variable(std::string_view name);

/// Reference heights of the source data, m.
inline constexpr double kLowHeight = 10.0;
inline constexpr double kHighHeight = 100.0;

/**
 * Hourly wind components at 10 m and 100 m on a regular lon/lat grid.
 *
 * Arrays are stored as f32 in [time][lat][lon] order; coordinates are
 * strictly ascending. Read-only after construction.
 */
class WindGrid {
 public:
  WindGrid(std::vector<double> lats, std::vector<double> lons, std::int64_t t0, std::int64_t step,
           std::size_t n_time, std::array<std::vector<float>, 4> data);

  const std::vector<double>& lats() const noexcept { return lats_; }
  const std::vector<double>& lons() const noexcept { return lons_; }
  std::int64_t t0() const noexcept { return t0_; }
  std::int64_t step() const noexcept { return step_; }
  std::size_t n_time() const noexcept { return n_time_; }
  std::size_t n_lat() const noexcept { return lats_.size(); }
  std::size_t n_lon() const noexcept { return lons_.size(); }
  std::size_t slice_size() const noexcept { return lats_.size() * lons_.size(); }

  std::span<const float> data(Variable v) const noexcept {
    return data_[static_cast<std::size_t>(v)];
  }
  float value(Variable v, std::size_t t, std::size_t ilat, std::size_t ilon) const noexcept {
    return data_[static_cast<std::size_t>(v)][(t * lats_.size() + ilat) * lons_.size() + ilon];
  }
  std::int64_t timestamp(std::size_t t) const noexcept {
    return t0_ + static_cast<std::int64_t>(t) * step_;
  }

  bool contains(double lon, double lat) const noexcept;

  /// Half-open index range of time steps inside `period`; throws DataError
  /// when the grid does not cover the whole period.
  std::pair<std::size_t, std::size_t> time_indices(const Period& period) const;

 private:
  std::vector<double> lats_;
  std::vector<double> lons_;
  std::int64_t t0_;
  std::int64_t step_;
  std::size_t n_time_;
  std::array<std::vector<float>, 4> data_;
};

// -- WGRD container ------------------------------------------------------------

inline constexpr std::uint32_t kFormatVersion = 1;

WindGrid decode_wgrd(std::span<const std::byte> bytes);
std::vector<std::byte> encode_wgrd(const WindGrid& grid);
WindGrid load_windgrid(const std::string& path);
void save_windgrid(const std::string& path, const WindGrid& grid);

/// Builds a grid from CSV rows `time_index,lat,lon,u10,v10,u100,v100`.
/// Time metadata is not part of the CSV and is passed explicitly.
WindGrid windgrid_from_csv(std::string_view text, std::int64_t t0, std::int64_t step);

// -- point evaluation ------------------------------------------------------------

/// Enclosing cell and interpolation fractions of a location.
struct CellWeights {
  std::size_t ilat0 = 0, ilat1 = 0;
  std::size_t ilon0 = 0, ilon1 = 0;
  double flat = 0.0;  // fraction towards ilat1
  double flon = 0.0;  // fraction towards ilon1
};

/// Throws DomainError when the point lies outside the grid bounding box.
CellWeights locate(const WindGrid& grid, double lon, double lat);

/// Bilinear blend of the four corners at time step `t`, using precomputed weights.
double interpolate(const WindGrid& grid, Variable var, std::size_t t, const CellWeights& w) noexcept;

double bilinear(const WindGrid& grid, Variable var, std::size_t t, double lon, double lat);

double speed_from_components(double u, double v) noexcept;

struct Shear {
  double alpha = 0.0;
  bool calm = false;  // a zero speed made the exponent undefined; alpha fell back to 0
};

/// Power-law exponent between 10 m and 100 m.
Shear shear_exponent(double v10, double v100) noexcept;

/// Power-law extrapolation from 100 m to height `h`.
double speed_at_height(double v100, double alpha, double h);

double hub_height_speed(const WindGrid& grid, double lon, double lat, std::size_t t, double h);

}  // namespace windecomp::windgrid
