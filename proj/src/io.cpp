#include "lrising/io.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include <fmt/core.h>
#include <openssl/evp.h>

#include "lrising/errors.hpp"

namespace lrising::io {

namespace {

void append_metadata(std::string& out, const KeyValues& metadata) {
  for (const auto& [key, value] : metadata) out += fmt::format("# {}={}\n", key, value);
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::string format_number(double value) { return fmt::format("{:.17g}", value); }

std::string format_short(double value) { return fmt::format("{}", value); }

std::string series_csv(const CoherenceSeries& series, const KeyValues& metadata) {
  std::string out;
  append_metadata(out, metadata);
  out += series.normalized ? "t,C_norm\n" : "t,C\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    out += format_number(series.times[k]);
    out += ',';
    out += format_number(series.values[k]);
    out += '\n';
  }
  return out;
}

std::string histogram_csv(const FrequencyHistogram& histogram, const KeyValues& metadata) {
  std::string out;
  append_metadata(out, metadata);
  out += "bin_left,bin_right,mass\n";
  for (std::size_t b = 0; b < histogram.bins(); ++b) {
    out += fmt::format("{},{},{}\n", format_number(histogram.bin_edges[b]),
                       format_number(histogram.bin_edges[b + 1]),
                       format_number(histogram.mass[b]));
  }
  return out;
}

std::string table_csv(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows,
                      const KeyValues& metadata) {
  auto join = [](const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k) line += ',';
      line += cells[k];
    }
    return line + '\n';
  };
  std::string out;
  append_metadata(out, metadata);
  out += join(header);
  for (const auto& row : rows) out += join(row);
  return out;
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) {
    throw IoError(fmt::format("cannot create directory {}: {}", path.parent_path().string(),
                              ec.message()));
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError(fmt::format("cannot open {} for writing", path.string()));
  file.write(content.data(), static_cast<std::streamsize>(content.size()));
  file.close();
  if (!file) throw IoError(fmt::format("failed writing {}", path.string()));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError(fmt::format("cannot open {} for reading", path.string()));
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

std::string sha256_hex(std::string_view content) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(content.data(), content.size(), digest.data(), &length, EVP_sha256(),
                 nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  std::string hex;
  hex.reserve(2 * length);
  for (unsigned int k = 0; k < length; ++k) hex += fmt::format("{:02x}", digest[k]);
  return hex;
}

const std::string* Section::find(std::string_view key) const {
  for (const auto& [k, v] : entries) {
    if (k == key) return &v;
  }
  return nullptr;
}

std::vector<Section> parse_key_values(std::string_view text) {
  std::vector<Section> sections(1);
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    const std::string_view raw = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;

    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ContractViolation(fmt::format("line {}: malformed section header '{}'", line_no, line));
      }
      sections.push_back({std::string(trim(line.substr(1, line.size() - 2))), {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw ContractViolation(fmt::format("line {}: expected key=value, got '{}'", line_no, line));
    }
    sections.back().entries.emplace_back(std::string(trim(line.substr(0, eq))),
                                         std::string(trim(line.substr(eq + 1))));
  }
  return sections;
}

std::string render_key_values(const std::vector<Section>& sections, std::string_view banner) {
  std::string out;
  if (!banner.empty()) out += fmt::format("# {}\n", banner);
  for (const auto& section : sections) {
    if (!section.name.empty()) out += fmt::format("\n[{}]\n", section.name);
    for (const auto& [key, value] : section.entries) out += fmt::format("{}={}\n", key, value);
  }
  return out;
}

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 420.0;
constexpr double kMargin = 50.0;

struct Frame {
  double x_lo, x_hi, y_lo, y_hi;

  double px(double x) const {
    return kMargin + (x - x_lo) / (x_hi - x_lo) * (kWidth - 2 * kMargin);
  }
  double py(double y) const {
    return kHeight - kMargin - (y - y_lo) / (y_hi - y_lo) * (kHeight - 2 * kMargin);
  }
};

std::string svg_open(const Frame& f, std::string_view title) {
  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<text x=\"{2}\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">{3}</text>\n",
      kWidth, kHeight, kMargin, title);
  out += fmt::format(
      "<rect x=\"{0}\" y=\"{0}\" width=\"{1}\" height=\"{2}\" fill=\"none\" stroke=\"black\"/>\n",
      kMargin, kWidth - 2 * kMargin, kHeight - 2 * kMargin);
  const double bottom = kHeight - kMargin + 16;
  out += fmt::format(
      "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\">{:.4g}</text>\n"
      "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" "
      "text-anchor=\"end\">{:.4g}</text>\n"
      "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" "
      "text-anchor=\"end\">{:.4g}</text>\n"
      "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" "
      "text-anchor=\"end\">{:.4g}</text>\n",
      kMargin, bottom, f.x_lo, kWidth - kMargin, bottom, f.x_hi, kMargin - 4,
      kHeight - kMargin, f.y_lo, kMargin - 4, kMargin + 10, f.y_hi);
  return out;
}

}  // namespace

std::string series_svg(const CoherenceSeries& series, std::string_view title) {
  if (series.size() < 2) throw ContractViolation("plot needs at least two points");
  const double y_hi = std::max(*std::max_element(series.values.begin(), series.values.end()), 1e-12);
  const Frame f{series.times.front(), series.times.back(), 0.0, y_hi};
  std::string out = svg_open(f, title);
  out += "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"";
  for (std::size_t k = 0; k < series.size(); ++k) {
    out += fmt::format("{:.2f},{:.2f} ", f.px(series.times[k]), f.py(series.values[k]));
  }
  out += "\"/>\n</svg>\n";
  return out;
}

std::string histogram_svg(const FrequencyHistogram& histogram, std::string_view title) {
  if (histogram.bins() == 0) throw ContractViolation("plot needs at least one bin");
  const double y_hi = std::max(*std::max_element(histogram.mass.begin(), histogram.mass.end()), 1e-12);
  const Frame f{histogram.bin_edges.front(), histogram.bin_edges.back(), 0.0, y_hi};
  std::string out = svg_open(f, title);
  out += "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"";
  out += fmt::format("{:.2f},{:.2f} ", f.px(histogram.bin_edges.front()), f.py(0.0));
  for (std::size_t b = 0; b < histogram.bins(); ++b) {
    out += fmt::format("{:.2f},{:.2f} {:.2f},{:.2f} ", f.px(histogram.bin_edges[b]),
                       f.py(histogram.mass[b]), f.px(histogram.bin_edges[b + 1]),
                       f.py(histogram.mass[b]));
  }
  out += fmt::format("{:.2f},{:.2f}", f.px(histogram.bin_edges.back()), f.py(0.0));
  out += "\"/>\n</svg>\n";
  return out;
}

}  // namespace lrising::io
