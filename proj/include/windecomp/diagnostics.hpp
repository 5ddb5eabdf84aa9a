#pragma once

#include <string>
#include <vector>

namespace windecomp {

/// Collects non-fatal warnings raised while computing results.
class Diagnostics {
 public:
  void warn(std::string message) { warnings_.push_back(std::move(message)); }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }
  bool empty() const noexcept { return warnings_.empty(); }

 private:
  std::vector<std::string> warnings_;
};

}  // namespace windecomp
