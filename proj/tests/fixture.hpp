#pragma once

#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include "windecomp/config.hpp"
#include "windecomp/csv.hpp"
#include "windecomp/fleet.hpp"
#include "windecomp/powerflux.hpp"
#include "windecomp/synth.hpp"

namespace testing {

inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("windecomp_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Writes turbines, grid and generation for `spec` into `dir` and returns a matching config.
inline windecomp::RunConfig write_fixture(const windecomp::synth::SynthSpec& spec, std::uint64_t seed,
                                          const std::filesystem::path& dir) {
  using namespace windecomp;
  const auto turbines = synth::generate_fleet(spec, seed);
  const auto grid = synth::generate_windgrid(spec, seed);
  const auto fl = fleet::preprocess(fleet::parse_turbine_csv(turbines), {});
  const auto gen = synth::generate_generation(fl, grid, spec.true_efficiency, spec.years, {spec.years});
  csv::write_file((dir / "turbines.csv").string(), turbines);
  windgrid::save_windgrid((dir / "grid.wgrd").string(), grid);
  csv::write_file((dir / "generation.csv").string(), powerflux::generation_to_csv(gen));
  RunConfig cfg;
  cfg.turbines = (dir / "turbines.csv").string();
  cfg.windgrid = (dir / "grid.wgrd").string();
  cfg.generation = (dir / "generation.csv").string();
  cfg.study = spec.years;
  cfg.out_dir = (dir / "out").string();
  return cfg;
}

}  // namespace testing

namespace testing {

inline void write_file_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

}  // namespace testing
