#pragma once

// File formats: metadata-prefixed CSV, key=value text (scenario files and
// run manifests), SHA-256 content hashes and throwaway SVG plots.

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lrising/coherence.hpp"
#include "lrising/spectrum.hpp"

namespace lrising::io {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// 17 significant digits, round-trip exact.
std::string format_number(double value);
/// Shortest round-trip form, for metadata and file names.
std::string format_short(double value);

/// `# key=value` lines, header `t,C` (or `t,C_norm`), one row per point.
std::string series_csv(const CoherenceSeries& series, const KeyValues& metadata);
/// Header `bin_left,bin_right,mass`.
std::string histogram_csv(const FrequencyHistogram& histogram, const KeyValues& metadata);
/// Generic table; cells are written verbatim.
std::string table_csv(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows,
                      const KeyValues& metadata);

/// Writes `content` byte-for-byte; throws IoError naming the path.
void write_file(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

std::string sha256_hex(std::string_view content);

struct Section {
  std::string name;  // empty for the leading unnamed section
  KeyValues entries;

  const std::string* find(std::string_view key) const;
};

/// Plain key=value lines; `#` starts a comment line; `[name]` opens a
/// section. Throws ContractViolation on malformed lines.
std::vector<Section> parse_key_values(std::string_view text);
std::string render_key_values(const std::vector<Section>& sections, std::string_view banner);

std::string series_svg(const CoherenceSeries& series, std::string_view title);
std::string histogram_svg(const FrequencyHistogram& histogram, std::string_view title);

}  // namespace lrising::io
