#pragma once

// Canned scenario sets for the published figures (N = 20, centre spin 10).

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "lrising/scenario.hpp"

namespace lrising {

struct ReproduceOptions {
  std::filesystem::path out_dir = ".";
  unsigned threads = 0;
  bool svg = false;
  int steps = 0;  // 0: the figure's default grid
  std::ostream* log = nullptr;
};

struct ReproduceResult {
  std::vector<OutputRecord> outputs;  // manifest included last
};

/// "fig2", "fig3", "fig4" or "fig5".
const std::vector<std::string>& reproducible_figures();

/// Throws ContractViolation for an unknown figure name.
ReproduceResult reproduce(std::string_view figure, const ReproduceOptions& options);

}  // namespace lrising
