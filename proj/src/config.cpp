#include "windecomp/config.hpp"

#include <charconv>
#include <set>

#include <fmt/format.h>

#include "windecomp/csv.hpp"
#include "windecomp/error.hpp"

namespace windecomp {

namespace {

constexpr std::string_view kModule = "config";

const std::set<std::string, std::less<>> kKeys{
    "turbines", "extension", "exclusions", "windgrid", "generation",       "reference", "start_year",
    "end_year", "base_year", "scenarios",  "out",      "reference_height", "workers"};

template <typename T>
T parse_as(const std::string& key, const std::string& value) {
  T v{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ConfigError(std::string(kModule), fmt::format("invalid value for {}: '{}'", key, value));
  }
  return v;
}

}  // namespace

void RunConfig::validate() const {
  if (study.first > study.last) throw ConfigError(std::string(kModule), "start_year must be <= end_year");
  if (!study.contains(effective_base_year())) throw ConfigError(std::string(kModule), "base_year must lie in the study period");
  if (!(reference_height > 0.0)) throw ConfigError(std::string(kModule), "reference_height must be > 0");
  if (workers < 1) throw ConfigError(std::string(kModule), "workers must be >= 1");
}

std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (csv::trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(std::string(kModule), fmt::format("expected key = value, line {}", line_no));
    }
    auto key = csv::trim(line.substr(0, eq));
    auto value = csv::trim(line.substr(eq + 1));
    if (!kKeys.contains(key)) throw ConfigError(std::string(kModule), fmt::format("unknown key '{}', line {}", key, line_no));
    out[key] = value;
  }
  return out;
}

RunConfig apply_settings(RunConfig cfg, const std::map<std::string, std::string>& settings) {
  for (const auto& [key, value] : settings) {
    if (key == "turbines") cfg.turbines = value;
    else if (key == "extension") cfg.extension = value;
    else if (key == "exclusions") cfg.exclusions = value;
    else if (key == "windgrid") cfg.windgrid = value;
    else if (key == "generation") cfg.generation = value;
    else if (key == "reference") cfg.reference = value;
    else if (key == "out") cfg.out_dir = value;
    else if (key == "start_year") cfg.study.first = parse_as<int>(key, value);
    else if (key == "end_year") cfg.study.last = parse_as<int>(key, value);
    else if (key == "base_year") cfg.base_year = parse_as<int>(key, value);
    else if (key == "reference_height") cfg.reference_height = parse_as<double>(key, value);
    else if (key == "workers") cfg.workers = parse_as<unsigned>(key, value);
    else if (key == "scenarios") {
      cfg.scenarios.clear();
      std::size_t p = 0;
      while (p <= value.size()) {
        auto c = value.find(',', p);
        if (c == std::string::npos) c = value.size();
        auto name = csv::trim(std::string_view(value).substr(p, c - p));
        if (!name.empty()) cfg.scenarios.push_back(std::move(name));
        p = c + 1;
      }
    } else {
      throw ConfigError(std::string(kModule), fmt::format("unknown key '{}'", key));
    }
  }
  return cfg;
}

}  // namespace windecomp
