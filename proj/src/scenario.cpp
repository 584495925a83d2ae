#include "lrising/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

#include <fmt/core.h>

#include "lrising/errors.hpp"

namespace lrising {

namespace {

double parse_double(const std::string& key, const std::string& text) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ContractViolation(fmt::format("{}: expected a number, got '{}'", key, text));
  }
  return value;
}

int parse_int(const std::string& key, const std::string& text) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ContractViolation(fmt::format("{}: expected an integer, got '{}'", key, text));
  }
  return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ContractViolation(fmt::format("{}: expected true or false, got '{}'", key, text));
}

std::string output_list(const std::set<Output>& outputs) {
  std::string s;
  for (Output o : outputs) {
    if (!s.empty()) s += ',';
    s += to_string(o);
  }
  return s;
}

std::string file_name(const Scenario& s, std::string_view base, std::string_view ext) {
  return fmt::format("{}{}.{}", s.stem, base, ext);
}

io::KeyValues csv_metadata(const Scenario& s) {
  io::KeyValues meta{
      {"n", std::to_string(s.model.n())},
      {"j", io::format_short(s.model.j())},
      {"alpha", io::format_short(s.model.alpha())},
      {"range", s.model.truncation().to_string()},
      {"target", describe(s.target)},
  };
  return meta;
}

}  // namespace

std::string to_string(Output output) {
  switch (output) {
    case Output::series: return "series";
    case Output::spectrum: return "spectrum";
    case Output::relaxation: return "relaxation";
    case Output::steady_state: return "steady-state";
  }
  return "series";
}

Output parse_output(std::string_view text) {
  if (text == "series") return Output::series;
  if (text == "spectrum") return Output::spectrum;
  if (text == "relaxation") return Output::relaxation;
  if (text == "steady-state") return Output::steady_state;
  throw ContractViolation(fmt::format(
      "output must be one of series, spectrum, relaxation, steady-state; got '{}'", text));
}

void Scenario::validate() const {
  if (const auto* spin = std::get_if<Spin>(&target)) {
    if (spin->index < 1 || spin->index > model.n()) {
      throw ContractViolation(fmt::format("spin {} outside 1..{}", spin->index, model.n()));
    }
  } else {
    std::get<BlockSpec>(target).validate(model.n());
    if (outputs.count(Output::spectrum)) {
      throw ContractViolation("frequency spectra are defined for single-spin targets only");
    }
  }
  (void)grid.points();
  if (bins < 1) throw ContractViolation(fmt::format("bins must be >= 1, got {}", bins));
  if (outputs.empty()) throw ContractViolation("scenario requests no outputs");
}

io::KeyValues to_key_values(const Scenario& s) {
  io::KeyValues kv{
      {"n", std::to_string(s.model.n())},
      {"j", io::format_short(s.model.j())},
      {"alpha", io::format_short(s.model.alpha())},
      {"range", s.model.truncation().to_string()},
  };
  if (const auto* spin = std::get_if<Spin>(&s.target)) {
    kv.emplace_back("spin", std::to_string(spin->index));
  } else {
    const auto& block = std::get<BlockSpec>(s.target);
    kv.emplace_back("block_start", std::to_string(block.start));
    kv.emplace_back("block_size", std::to_string(block.len));
  }
  kv.emplace_back("t_max", io::format_short(s.grid.t_max));
  kv.emplace_back("steps", std::to_string(s.grid.steps));
  kv.emplace_back("normalize", s.normalize ? "true" : "false");
  kv.emplace_back("method", to_string(s.method));
  kv.emplace_back("bins", std::to_string(s.bins));
  kv.emplace_back("histogram_norm", to_string(s.histogram_norm));
  kv.emplace_back("outputs", output_list(s.outputs));
  return kv;
}

Scenario apply_key_values(Scenario base, const io::KeyValues& entries) {
  int n = base.model.n();
  double j = base.model.j();
  double alpha = base.model.alpha();
  Truncation truncation = base.model.truncation();
  std::optional<int> spin;
  std::optional<int> block_start;
  std::optional<int> block_size;

  for (const auto& [key, value] : entries) {
    if (key == "n") {
      n = parse_int(key, value);
    } else if (key == "j") {
      j = parse_double(key, value);
    } else if (key == "alpha") {
      alpha = parse_double(key, value);
    } else if (key == "range") {
      truncation = Truncation::parse(value);
    } else if (key == "spin") {
      spin = parse_int(key, value);
    } else if (key == "block_start") {
      block_start = parse_int(key, value);
    } else if (key == "block_size") {
      block_size = parse_int(key, value);
    } else if (key == "t_max") {
      base.grid.t_max = parse_double(key, value);
    } else if (key == "steps") {
      base.grid.steps = parse_int(key, value);
    } else if (key == "normalize") {
      base.normalize = parse_bool(key, value);
    } else if (key == "method") {
      base.method = parse_method(value);
    } else if (key == "bins") {
      base.bins = parse_int(key, value);
    } else if (key == "histogram_norm") {
      base.histogram_norm = parse_normalization(value);
    } else if (key == "outputs") {
      base.outputs.clear();
      std::string_view rest = value;
      while (!rest.empty()) {
        const auto comma = rest.find(',');
        const auto item = rest.substr(0, comma);
        if (!item.empty()) base.outputs.insert(parse_output(item));
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      }
    } else if (key == "out") {
      base.out_dir = value;
    } else if (key == "svg") {
      base.svg = parse_bool(key, value);
    } else if (key == "kind" || key == "rows" || key == "sha256") {
      // manifest bookkeeping
    } else {
      throw ContractViolation(fmt::format("unknown scenario key '{}'", key));
    }
  }

  base.model = CouplingModel(n, j, alpha, truncation);
  if (spin && (block_start || block_size)) {
    throw ContractViolation("give either spin or block_start/block_size, not both");
  }
  if (spin) {
    base.target = Spin{*spin};
  } else if (block_start && block_size) {
    base.target = BlockSpec{*block_start, *block_size};
  } else if (block_size) {
    base.target = BlockSpec::centered(n, *block_size);
  } else if (block_start) {
    const auto* previous = std::get_if<BlockSpec>(&base.target);
    if (!previous) throw ContractViolation("block_start given without block_size");
    base.target = BlockSpec{*block_start, previous->len};
  }
  return base;
}

Scenario load_scenario(const std::filesystem::path& path, const std::string& section,
                       Scenario base) {
  const auto sections = io::parse_key_values(io::read_file(path));
  for (const auto& s : sections) {
    if (s.name == section) return apply_key_values(std::move(base), s.entries);
  }
  throw ContractViolation(fmt::format("{} has no section [{}]", path.string(), section));
}

OutputRecord emit(const std::filesystem::path& dir, const std::string& file,
                  const std::string& kind, std::size_t rows, const std::string& content,
                  io::KeyValues params) {
  io::write_file(dir / file, content);
  return OutputRecord{file, kind, rows, io::sha256_hex(content), std::move(params)};
}

RunResult run(const Scenario& s, const RunOptions& options) {
  s.validate();
  RunResult result;
  const io::KeyValues params = to_key_values(s);
  const double c0 = initial_coherence(s.target);
  auto log = [&](const std::string& line) {
    if (options.log) *options.log << line << '\n';
  };

  const bool needs_series = s.outputs.count(Output::series) ||
                            s.outputs.count(Output::relaxation) ||
                            s.outputs.count(Output::steady_state);
  if (needs_series) {
    const auto times = s.grid.points();
    SeriesOptions series_options;
    series_options.threads = options.threads;
    result.series = coherence_series(s.model, s.target, times, s.normalize, s.method,
                                     series_options);
  }

  if (s.outputs.count(Output::series)) {
    auto meta = csv_metadata(s);
    meta.emplace_back("method", to_string(s.method));
    meta.emplace_back("normalized", s.normalize ? "true" : "false");
    meta.emplace_back("C0", io::format_number(c0));
    const auto file = file_name(s, "series", "csv");
    result.outputs.push_back(emit(s.out_dir, file, "series", result.series->size(),
                                  io::series_csv(*result.series, meta), params));
    log(fmt::format("wrote {} ({} rows)", (s.out_dir / file).string(), result.series->size()));
    if (s.svg) {
      const auto svg = file_name(s, "series", "svg");
      result.outputs.push_back(
          emit(s.out_dir, svg, "svg", 0,
               io::series_svg(*result.series,
                              fmt::format("{} alpha={} range={}", describe(s.target),
                                          io::format_short(s.model.alpha()),
                                          s.model.truncation().to_string())),
               params));
    }
  }

  if (s.outputs.count(Output::spectrum)) {
    const int spin = std::get<Spin>(s.target).index;
    result.histogram = frequency_histogram(s.model, spin, s.bins, s.histogram_norm);
    auto meta = csv_metadata(s);
    meta.emplace_back("normalization", to_string(s.histogram_norm));
    meta.emplace_back("frequency_count", std::to_string(result.histogram->total_count));
    const auto file = file_name(s, "spectrum", "csv");
    result.outputs.push_back(emit(s.out_dir, file, "spectrum", result.histogram->bins(),
                                  io::histogram_csv(*result.histogram, meta), params));
    log(fmt::format("wrote {} ({} bins, {} frequencies)", (s.out_dir / file).string(),
                    result.histogram->bins(), result.histogram->total_count));
    if (s.svg) {
      const auto svg = file_name(s, "spectrum", "svg");
      result.outputs.push_back(emit(
          s.out_dir, svg, "svg", 0,
          io::histogram_svg(*result.histogram,
                            fmt::format("omega histogram, alpha={} range={}",
                                        io::format_short(s.model.alpha()),
                                        s.model.truncation().to_string())),
          params));
    }
  }

  if (needs_series) {
    const double scale = s.normalize ? 1.0 : c0;
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"C0", io::format_number(c0)});
    if (s.outputs.count(Output::relaxation)) {
      result.relaxation = relaxation_report(*result.series);
      const auto& r = *result.relaxation;
      rows.push_back({"threshold", io::format_number(r.threshold)});
      rows.push_back({"first_crossing",
                      r.first_crossing ? io::format_number(*r.first_crossing) : "none"});
      rows.push_back({"t_r", r.relaxation_time ? io::format_number(*r.relaxation_time)
                                               : "NotRelaxed"});
      rows.push_back({"relaxation_rate", r.relaxation_time
                                             ? io::format_number(1.0 / *r.relaxation_time)
                                             : "NotRelaxed"});
      rows.push_back({"max_revival", io::format_number(r.max_revival)});
    }
    if (s.outputs.count(Output::steady_state)) {
      result.steady_state = steady_state_mean(*result.series) / scale;
      result.endpoint = result.series->values.back() / scale;
      rows.push_back({"steady_state_mean_norm", io::format_number(*result.steady_state)});
      rows.push_back({"endpoint_norm", io::format_number(*result.endpoint)});
    }
    if (s.outputs.count(Output::relaxation) || s.outputs.count(Output::steady_state)) {
      const auto file = file_name(s, "summary", "csv");
      result.outputs.push_back(emit(s.out_dir, file, "summary", rows.size(),
                                    io::table_csv({"quantity", "value"}, rows, csv_metadata(s)),
                                    params));
      log(fmt::format("wrote {}", (s.out_dir / file).string()));
    }
  }
  return result;
}

ScanResult scan_alpha(const Scenario& base, const std::vector<double>& alphas,
                      const RunOptions& options) {
  if (alphas.empty()) throw ContractViolation("alpha scan needs at least one alpha");
  ScanResult result;
  std::vector<std::vector<std::string>> rows;
  for (double alpha : alphas) {
    Scenario s = base;
    s.model = base.model.with_alpha(alpha);
    s.stem = fmt::format("{}alpha{}_", base.stem, io::format_short(alpha));
    s.outputs = {Output::series, Output::relaxation, Output::steady_state};
    RunResult r = run(s, options);
    result.rows.push_back({alpha, *r.relaxation, *r.steady_state});
    for (auto& o : r.outputs) result.outputs.push_back(std::move(o));

    const auto& rel = *r.relaxation;
    rows.push_back({io::format_short(alpha),
                    rel.relaxation_time ? io::format_number(*rel.relaxation_time) : "NotRelaxed",
                    io::format_number(*r.steady_state),
                    rel.first_crossing ? io::format_number(*rel.first_crossing) : "none",
                    io::format_number(rel.max_revival)});
  }

  io::KeyValues meta{
      {"n", std::to_string(base.model.n())},
      {"j", io::format_short(base.model.j())},
      {"range", base.model.truncation().to_string()},
      {"target", describe(base.target)},
      {"t_max", io::format_short(base.grid.t_max)},
      {"steps", std::to_string(base.grid.steps)},
  };
  std::string alpha_list;
  for (double a : alphas) alpha_list += (alpha_list.empty() ? "" : ",") + io::format_short(a);
  io::KeyValues params = meta;
  params.emplace_back("alphas", alpha_list);

  const auto file = fmt::format("{}scan_summary.csv", base.stem);
  result.outputs.push_back(
      emit(base.out_dir, file, "table", rows.size(),
           io::table_csv({"alpha", "t_r", "steady_state_mean", "first_crossing", "max_revival"},
                         rows, meta),
           params));
  if (options.log) {
    *options.log << fmt::format("{:>8}  {:>22}  {:>22}\n", "alpha", "t_r", "steady_state_mean");
    for (const auto& row : rows) {
      *options.log << fmt::format("{:>8}  {:>22}  {:>22}\n", row[0], row[1], row[2]);
    }
  }
  return result;
}

OutputRecord write_manifest(const std::filesystem::path& dir, const std::string& command,
                            const std::vector<OutputRecord>& outputs) {
  std::vector<io::Section> sections(1);
  sections.front().entries = {{"command", command}, {"output_count", std::to_string(outputs.size())}};
  for (const auto& o : outputs) {
    io::Section section{o.file, {{"kind", o.kind}, {"rows", std::to_string(o.rows)},
                                 {"sha256", o.sha256}}};
    for (const auto& kv : o.params) section.entries.push_back(kv);
    sections.push_back(std::move(section));
  }
  const std::string content = io::render_key_values(sections, "lrising run manifest");
  io::write_file(dir / "manifest.txt", content);
  return OutputRecord{"manifest.txt", "manifest", outputs.size(), io::sha256_hex(content), {}};
}

}  // namespace lrising
