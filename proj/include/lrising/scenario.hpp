#pragma once

// Scenario runs: configuration, CSV/SVG emission and the run manifest.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lrising/coherence.hpp"
#include "lrising/io.hpp"
#include "lrising/spectrum.hpp"

namespace lrising {

enum class Output { series, spectrum, relaxation, steady_state };

std::string to_string(Output output);
Output parse_output(std::string_view text);

struct Scenario {
  CouplingModel model{20, 1.0, 3.0};
  Target target = Spin{10};
  TimeGrid grid{10.0, 1000};
  std::set<Output> outputs{Output::series};
  bool normalize = false;
  Method method = Method::factorized;
  int bins = kDefaultBins;
  Normalization histogram_norm = Normalization::unit_sum;
  std::filesystem::path out_dir = ".";
  std::string stem;  // prefix for every file this scenario writes
  bool svg = false;

  /// Throws ContractViolation if the target does not fit the chain or a
  /// spectrum is requested for a block.
  void validate() const;
};

/// Keys understood in scenario files and manifest sections.
io::KeyValues to_key_values(const Scenario& scenario);

/// Applies the entries on top of `base`. Unknown keys are rejected except the
/// bookkeeping keys a manifest adds (kind, rows, sha256).
Scenario apply_key_values(Scenario base, const io::KeyValues& entries);

/// Loads a scenario file; `section` picks a named block (e.g. one entry of
/// a manifest), empty means the leading unnamed block.
Scenario load_scenario(const std::filesystem::path& path, const std::string& section = {},
                       Scenario base = {});

struct OutputRecord {
  std::string file;  // relative to the output directory
  std::string kind;  // series | spectrum | summary | table | svg
  std::size_t rows = 0;
  std::string sha256;
  io::KeyValues params;
};

struct RunResult {
  std::vector<OutputRecord> outputs;
  std::optional<CoherenceSeries> series;
  std::optional<FrequencyHistogram> histogram;
  std::optional<RelaxationReport> relaxation;
  std::optional<double> steady_state;  // mean of C/C(0) over the last quarter
  std::optional<double> endpoint;      // C/C(0) at the last grid point
};

struct RunOptions {
  unsigned threads = 0;
  std::ostream* log = nullptr;
};

RunResult run(const Scenario& scenario, const RunOptions& options = {});

struct ScanRow {
  double alpha;
  RelaxationReport relaxation;
  double steady_state;
};

struct ScanResult {
  std::vector<ScanRow> rows;
  std::vector<OutputRecord> outputs;
};

/// One series per alpha plus `<stem>scan_summary.csv`
/// (alpha, t_r or NotRelaxed, steady-state mean, ...).
ScanResult scan_alpha(const Scenario& base, const std::vector<double>& alphas,
                      const RunOptions& options = {});

/// Writes `manifest.txt` into `dir` listing every output with its hash and
/// parameters.
OutputRecord write_manifest(const std::filesystem::path& dir, const std::string& command,
                            const std::vector<OutputRecord>& outputs);

/// Writes `content` under `dir` and returns its record.
OutputRecord emit(const std::filesystem::path& dir, const std::string& file,
                  const std::string& kind, std::size_t rows, const std::string& content,
                  io::KeyValues params);

}  // namespace lrising
