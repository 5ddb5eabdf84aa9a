#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "windecomp/calendar.hpp"

namespace windecomp {

/// Settings of one pipeline run. Paths may be empty when a subcommand does not need them.
struct RunConfig {
  std::string turbines;
  std::string extension;
  std::string exclusions;
  std::string windgrid;
  std::string generation;
  std::string reference;
  YearRange study{2010, 2019};
  double reference_height = 76.0;
  std::optional<int> base_year;  // defaults to the first study year
  std::vector<std::string> scenarios;  // empty: all default scenarios
  std::string out_dir = "out";
  unsigned workers = 1;

  int effective_base_year() const noexcept { return base_year.value_or(study.first); }

  /// Range checks only; paths are checked when opened.
  void validate() const;
};

/// Parses `key = value` lines; `#` starts a comment. Unknown keys are errors.
std::map<std::string, std::string> parse_key_values(std::string_view text);

/// Applies recognised keys on top of `base`.
RunConfig apply_settings(RunConfig base, const std::map<std::string, std::string>& settings);

}  // namespace windecomp
