#include "windecomp/windgrid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>

#include <fmt/format.h>

#include "windecomp/csv.hpp"
#include "windecomp/error.hpp"

namespace windecomp::windgrid {

namespace {

constexpr std::string_view kModule = "windgrid";
constexpr std::size_t kHeaderSize = 4 + 4 * 4 + 8 * 2;

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <typename T>
T byteswap_if_needed(T v) noexcept {
  if constexpr (std::endian::native == std::endian::little || sizeof(T) == 1) {
    return v;
  } else {
    std::array<std::byte, sizeof(T)> b;
    std::memcpy(b.data(), &v, sizeof(T));
    std::reverse(b.begin(), b.end());
    std::memcpy(&v, b.data(), sizeof(T));
    return v;
  }
}

class Reader {
 public:
  explicit Reader(std::span<const std::byte> bytes) : bytes_(bytes) {}

  template <typename T>
  T read() {
    T v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return byteswap_if_needed(v);
  }

  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

 private:
  std::span<const std::byte> bytes_;
  std::size_t pos_ = 0;
};

template <typename T>
void append(std::vector<std::byte>& out, T v) {
  v = byteswap_if_needed(v);
  const auto* p = reinterpret_cast<const std::byte*>(&v);
  out.insert(out.end(), p, p + sizeof(T));
}

void check_axis(const std::vector<double>& axis, std::string_view name) {
  if (axis.empty()) throw FormatError(std::string(kModule), fmt::format("{} axis is empty", name));
  for (std::size_t i = 0; i < axis.size(); ++i) {
    if (!std::isfinite(axis[i])) {
      throw FormatError(std::string(kModule), fmt::format("non-finite {} coordinate", name));
    }
    if (i > 0 && !(axis[i] > axis[i - 1])) {
      throw FormatError(std::string(kModule), fmt::format("{} not strictly increasing", name));
    }
  }
}

// Index of the lower cell edge and the fraction towards the upper edge.
std::pair<std::size_t, double> bracket(const std::vector<double>& axis, double x) {
  if (axis.size() == 1) return {0, 0.0};
  auto it = std::upper_bound(axis.begin(), axis.end(), x);
  std::size_t hi = static_cast<std::size_t>(it - axis.begin());
  hi = std::clamp<std::size_t>(hi, 1, axis.size() - 1);
  const std::size_t lo = hi - 1;
  const double f = (x - axis[lo]) / (axis[hi] - axis[lo]);
  return {lo, std::clamp(f, 0.0, 1.0)};
}

}  // namespace

std::string_view variable_name(Variable v) noexcept {
  switch (v) {
    case Variable::U10: return "u10";
    case Variable::V10: return "v10";
    case Variable::U100: return "u100";
    case Variable::V100: return "v100";
  }
  return "?";
}

Variable parse_variable(std::string_view name) {
  for (Variable v : kVariables) {
    if (variable_name(v) == name) return v;
  }
  throw ConfigError(std::string(kModule), fmt::format("unknown variable '{}'", name));
}

WindGrid::WindGrid(std::vector<double> lats, std::vector<double> lons, std::int64_t t0,
                   std::int64_t step, std::size_t n_time, std::array<std::vector<float>, 4> data)
    : lats_(std::move(lats)), lons_(std::move(lons)), t0_(t0), step_(step), n_time_(n_time),
      data_(std::move(data)) {
  check_axis(lats_, "lat");
  check_axis(lons_, "lon");
  if (step_ <= 0) throw FormatError(std::string(kModule), "time step must be > 0");
  if (n_time_ == 0) throw FormatError(std::string(kModule), "no time steps");
  const std::size_t expected = n_time_ * slice_size();
  for (Variable v : kVariables) {
    const auto& arr = data_[static_cast<std::size_t>(v)];
    if (arr.size() != expected) {
      throw FormatError(std::string(kModule),
                        fmt::format("{} has {} values, expected {}", variable_name(v), arr.size(), expected));
    }
    for (float x : arr) {
      if (!std::isfinite(x)) {
        throw FormatError(std::string(kModule), fmt::format("non-finite value in {}", variable_name(v)));
      }
    }
  }
}

bool WindGrid::contains(double lon, double lat) const noexcept {
  return lon >= lons_.front() && lon <= lons_.back() && lat >= lats_.front() && lat <= lats_.back();
}

std::pair<std::size_t, std::size_t> WindGrid::time_indices(const Period& period) const {
  const std::int64_t start = period.start();
  const std::int64_t end = period.end();
  const std::int64_t last = timestamp(n_time_ - 1);
  if (t0_ > start || last + step_ < end) {
    throw DataError(std::string(kModule), fmt::format("period {} not covered by wind grid", period.label()));
  }
  // first index with timestamp >= start, first index with timestamp >= end
  auto ceil_index = [&](std::int64_t ts) {
    const std::int64_t d = ts - t0_;
    return static_cast<std::size_t>((d + step_ - 1) / step_);
  };
  const std::size_t lo = ceil_index(start);
  const std::size_t hi = std::min(ceil_index(end), n_time_);
  if (lo >= hi) {
    throw DataError(std::string(kModule), fmt::format("period {} has no time steps", period.label()));
  }
  return {lo, hi};
}

WindGrid decode_wgrd(std::span<const std::byte> bytes) {
  if (bytes.size() < kHeaderSize) throw FormatError(std::string(kModule), "truncated header");
  if (std::memcmp(bytes.data(), "WGRD", 4) != 0) throw FormatError(std::string(kModule), "bad magic");
  Reader in(bytes.subspan(4));
  const auto version = in.read<std::uint32_t>();
  if (version != kFormatVersion) {
    throw FormatError(std::string(kModule), fmt::format("unsupported version {}", version));
  }
  const auto n_time = in.read<std::uint32_t>();
  const auto n_lat = in.read<std::uint32_t>();
  const auto n_lon = in.read<std::uint32_t>();
  const auto t0 = in.read<std::int64_t>();
  const auto step = in.read<std::int64_t>();

  const std::uint64_t cells = std::uint64_t{n_time} * n_lat * n_lon;
  const std::uint64_t payload = (std::uint64_t{n_lat} + n_lon) * 8 + 4 * cells * 4;
  if (in.remaining() < payload) {
    throw FormatError(std::string(kModule),
                      fmt::format("truncated payload: {} bytes, header declares {}", in.remaining(), payload));
  }
  if (in.remaining() > payload) {
    throw FormatError(std::string(kModule),
                      fmt::format("size mismatch: {} trailing bytes", in.remaining() - payload));
  }

  std::vector<double> lats(n_lat);
  std::vector<double> lons(n_lon);
  for (auto& x : lats) x = in.read<double>();
  for (auto& x : lons) x = in.read<double>();
  std::array<std::vector<float>, 4> data;
  for (auto& arr : data) {
    arr.resize(static_cast<std::size_t>(cells));
    for (auto& x : arr) x = in.read<float>();
  }
  return WindGrid(std::move(lats), std::move(lons), t0, step, n_time, std::move(data));
}

std::vector<std::byte> encode_wgrd(const WindGrid& grid) {
  std::vector<std::byte> out;
  out.reserve(kHeaderSize + (grid.n_lat() + grid.n_lon()) * 8 + 16 * grid.n_time() * grid.slice_size());
  for (char c : std::string_view("WGRD")) out.push_back(static_cast<std::byte>(c));
  append(out, kFormatVersion);
  append(out, static_cast<std::uint32_t>(grid.n_time()));
  append(out, static_cast<std::uint32_t>(grid.n_lat()));
  append(out, static_cast<std::uint32_t>(grid.n_lon()));
  append(out, grid.t0());
  append(out, grid.step());
  for (double x : grid.lats()) append(out, x);
  for (double x : grid.lons()) append(out, x);
  for (Variable v : kVariables) {
    for (float x : grid.data(v)) append(out, x);
  }
  return out;
}

WindGrid load_windgrid(const std::string& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw DataError(std::string(kModule), "file not found");
  const auto size = static_cast<std::size_t>(in.tellg());
  in.seekg(0);
  std::vector<std::byte> bytes(size);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(size));
  if (!in) throw DataError(std::string(kModule), "read failed: " + path);
  return decode_wgrd(bytes);
}

void save_windgrid(const std::string& path, const WindGrid& grid) {
  const auto bytes = encode_wgrd(grid);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(std::string(kModule), "cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError(std::string(kModule), "write failed: " + path);
}

WindGrid windgrid_from_csv(std::string_view text, std::int64_t t0, std::int64_t step) {
  const auto table = csv::parse(text, kModule);
  const auto c_t = table.require_column(kModule, "time_index");
  const auto c_lat = table.require_column(kModule, "lat");
  const auto c_lon = table.require_column(kModule, "lon");
  const std::array<std::size_t, 4> c_var{
      table.require_column(kModule, "u10"), table.require_column(kModule, "v10"),
      table.require_column(kModule, "u100"), table.require_column(kModule, "v100")};
  if (table.rows.empty()) throw DataError(std::string(kModule), "no grid rows");

  struct Row {
    long long t;
    double lat, lon;
    std::array<float, 4> v;
  };
  std::vector<Row> rows;
  rows.reserve(table.rows.size());
  std::vector<double> lats, lons;
  long long max_t = -1;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    Row row;
    row.t = csv::integer(r[c_t], kModule, "time_index", i + 1);
    if (row.t < 0) throw ParseError(std::string(kModule), fmt::format("negative time_index, row {}", i + 1));
    row.lat = csv::number(r[c_lat], kModule, "lat", i + 1);
    row.lon = csv::number(r[c_lon], kModule, "lon", i + 1);
    for (std::size_t k = 0; k < 4; ++k) {
      row.v[k] = static_cast<float>(csv::number(r[c_var[k]], kModule, variable_name(kVariables[k]), i + 1));
    }
    lats.push_back(row.lat);
    lons.push_back(row.lon);
    max_t = std::max(max_t, row.t);
    rows.push_back(row);
  }
  std::sort(lats.begin(), lats.end());
  lats.erase(std::unique(lats.begin(), lats.end()), lats.end());
  std::sort(lons.begin(), lons.end());
  lons.erase(std::unique(lons.begin(), lons.end()), lons.end());
  const auto n_time = static_cast<std::size_t>(max_t + 1);
  const std::size_t cells = n_time * lats.size() * lons.size();
  if (rows.size() != cells) {
    throw DataError(std::string(kModule),
                    fmt::format("ragged grid: {} rows for {} time x {} lat x {} lon", rows.size(), n_time,
                                lats.size(), lons.size()));
  }
  std::array<std::vector<float>, 4> data;
  for (auto& arr : data) arr.assign(cells, 0.0f);
  std::vector<bool> seen(cells, false);
  for (const auto& row : rows) {
    const auto ilat = static_cast<std::size_t>(std::lower_bound(lats.begin(), lats.end(), row.lat) - lats.begin());
    const auto ilon = static_cast<std::size_t>(std::lower_bound(lons.begin(), lons.end(), row.lon) - lons.begin());
    const std::size_t idx = (static_cast<std::size_t>(row.t) * lats.size() + ilat) * lons.size() + ilon;
    if (seen[idx]) {
      throw DataError(std::string(kModule),
                      fmt::format("ragged grid: duplicate cell t={} lat={} lon={}", row.t, row.lat, row.lon));
    }
    seen[idx] = true;
    for (std::size_t k = 0; k < 4; ++k) data[k][idx] = row.v[k];
  }
  return WindGrid(std::move(lats), std::move(lons), t0, step, n_time, std::move(data));
}

CellWeights locate(const WindGrid& grid, double lon, double lat) {
  if (!grid.contains(lon, lat)) {
    throw DomainError(std::string(kModule), fmt::format("point ({}, {}) outside grid", lon, lat));
  }
  CellWeights w;
  const auto [ilat, flat] = bracket(grid.lats(), lat);
  const auto [ilon, flon] = bracket(grid.lons(), lon);
  w.ilat0 = ilat;
  w.ilat1 = grid.n_lat() == 1 ? ilat : ilat + 1;
  w.ilon0 = ilon;
  w.ilon1 = grid.n_lon() == 1 ? ilon : ilon + 1;
  w.flat = flat;
  w.flon = flon;
  return w;
}

double interpolate(const WindGrid& grid, Variable var, std::size_t t, const CellWeights& w) noexcept {
  const double v00 = grid.value(var, t, w.ilat0, w.ilon0);
  const double v01 = grid.value(var, t, w.ilat0, w.ilon1);
  const double v10 = grid.value(var, t, w.ilat1, w.ilon0);
  const double v11 = grid.value(var, t, w.ilat1, w.ilon1);
  // std::lerp is exact at the endpoints and stays within them
  return std::lerp(std::lerp(v00, v01, w.flon), std::lerp(v10, v11, w.flon), w.flat);
}

double bilinear(const WindGrid& grid, Variable var, std::size_t t, double lon, double lat) {
  if (t >= grid.n_time()) {
    throw DomainError(std::string(kModule), fmt::format("time index {} out of range", t));
  }
  return interpolate(grid, var, t, locate(grid, lon, lat));
}

double speed_from_components(double u, double v) noexcept { return std::hypot(u, v); }

Shear shear_exponent(double v10, double v100) noexcept {
  if (!(v10 > 0.0) || !(v100 > 0.0)) return {0.0, true};
  return {std::log(v100 / v10) / std::log(kHighHeight / kLowHeight), false};
}

double speed_at_height(double v100, double alpha, double h) {
  if (!(h > 0.0)) throw DomainError(std::string(kModule), "height must be > 0");
  return v100 * std::pow(h / kHighHeight, alpha);
}

double hub_height_speed(const WindGrid& grid, double lon, double lat, std::size_t t, double h) {
  if (t >= grid.n_time()) {
    throw DomainError(std::string(kModule), fmt::format("time index {} out of range", t));
  }
  const auto w = locate(grid, lon, lat);
  const double v10 = speed_from_components(interpolate(grid, Variable::U10, t, w),
                                           interpolate(grid, Variable::V10, t, w));
  const double v100 = speed_from_components(interpolate(grid, Variable::U100, t, w),
                                            interpolate(grid, Variable::V100, t, w));
  return speed_at_height(v100, shear_exponent(v10, v100).alpha, h);
}

}  // namespace windecomp::windgrid
