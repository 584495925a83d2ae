// lrising: coherence dynamics of the long-range Ising chain after a quench.
//
//   lrising run --n 20 --alpha 3 --range exact --spin 10 --t-max 10 --steps 1000 --out out/
//   lrising scan-alpha --alphas 3,2,1 --spin 10 --out scan/
//   lrising reproduce fig5 --out fig5/
//
// Exit codes: 0 success, 2 invalid arguments, 3 resource cap exceeded,
// 4 I/O error.

#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "lrising/errors.hpp"
#include "lrising/reproduce.hpp"
#include "lrising/scenario.hpp"

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitResource = 3;
constexpr int kExitIo = 4;

// Scenario flags mirror the scenario-file keys; only flags actually given on
// the command line are applied, on top of the file.
struct ScenarioFlags {
  std::string config;
  std::string section;
  std::optional<int> n;
  std::optional<double> j;
  std::optional<double> alpha;
  std::optional<std::string> range;
  std::optional<int> spin;
  std::optional<int> block_start;
  std::optional<int> block_size;
  std::optional<double> t_max;
  std::optional<int> steps;
  bool normalize = false;
  std::optional<std::string> method;
  std::optional<int> bins;
  std::optional<std::string> histogram_norm;
  std::optional<std::string> outputs;
  std::optional<std::string> out;
  bool svg = false;

  void attach(CLI::App& app) {
    app.add_option("--config", config, "Scenario file (key=value lines)");
    app.add_option("--section", section, "Named [section] of the scenario file, e.g. a manifest entry");
    app.add_option("--n", n, "Number of spins");
    app.add_option("--j", j, "Base coupling J");
    app.add_option("--alpha", alpha, "Power-law exponent");
    app.add_option("--range", range, "Truncation range: 1|2|3|...|exact");
    app.add_option("--spin", spin, "Observed spin (1-based)");
    app.add_option("--block-start", block_start, "First spin of the observed block (1-based)");
    app.add_option("--block-size", block_size, "Block length; centred when --block-start is omitted");
    app.add_option("--t-max", t_max, "End of the time grid, units of 1/J");
    app.add_option("--steps", steps, "Number of grid points");
    app.add_flag("--normalize", normalize, "Divide by C(0)");
    app.add_option("--method", method, "factorized|brute");
    app.add_option("--bins", bins, "Histogram bins");
    app.add_option("--histogram-norm", histogram_norm, "unit-sum|unit-max");
    app.add_option("--outputs", outputs, "Comma list of series,spectrum,relaxation,steady-state");
    app.add_option("--out", out, "Output directory");
    app.add_flag("--svg", svg, "Also write SVG plots");
  }

  lrising::Scenario resolve() const {
    lrising::Scenario scenario;
    if (!config.empty()) scenario = lrising::load_scenario(config, section);
    lrising::io::KeyValues kv;
    auto put = [&kv](const char* key, std::string value) { kv.emplace_back(key, std::move(value)); };
    if (n) put("n", std::to_string(*n));
    if (j) put("j", lrising::io::format_number(*j));
    if (alpha) put("alpha", lrising::io::format_number(*alpha));
    if (range) put("range", *range);
    if (spin) put("spin", std::to_string(*spin));
    if (block_start) put("block_start", std::to_string(*block_start));
    if (block_size) put("block_size", std::to_string(*block_size));
    if (t_max) put("t_max", lrising::io::format_number(*t_max));
    if (steps) put("steps", std::to_string(*steps));
    if (normalize) put("normalize", "true");
    if (method) put("method", *method);
    if (bins) put("bins", std::to_string(*bins));
    if (histogram_norm) put("histogram_norm", *histogram_norm);
    if (outputs) put("outputs", *outputs);
    if (out) put("out", *out);
    if (svg) put("svg", "true");
    return lrising::apply_key_values(scenario, kv);
  }
};

std::vector<double> parse_alpha_list(const std::string& text) {
  std::vector<double> alphas;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (!item.empty()) {
      try {
        std::size_t used = 0;
        alphas.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::logic_error&) {
        throw lrising::ContractViolation(fmt::format("--alphas: '{}' is not a number", item));
      }
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (alphas.empty()) throw lrising::ContractViolation("--alphas needs at least one value");
  return alphas;
}

void print_run_summary(const lrising::RunResult& r) {
  if (r.relaxation) {
    const auto& rel = *r.relaxation;
    std::cout << fmt::format("relaxation time t_r: {}\n",
                             rel.relaxation_time ? fmt::format("{:.6g}", *rel.relaxation_time)
                                                 : std::string("NotRelaxed"));
    std::cout << fmt::format("max revival after crossing: {:.6g} of C(0)\n", rel.max_revival);
  }
  if (r.steady_state) {
    std::cout << fmt::format("steady-state mean C/C(0): {:.6g}  endpoint: {:.6g}\n",
                             *r.steady_state, *r.endpoint);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coherence relaxation in the long-range Ising chain"};
  app.require_subcommand(1);
  app.fallthrough();
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads (0: all cores)");

  ScenarioFlags run_flags;
  auto* run_cmd = app.add_subcommand("run", "Evaluate one scenario");
  run_flags.attach(*run_cmd);

  ScenarioFlags scan_flags;
  std::string alpha_list;
  auto* scan_cmd = app.add_subcommand("scan-alpha", "One relaxation series per alpha plus a summary table");
  scan_flags.attach(*scan_cmd);
  scan_cmd->add_option("--alphas", alpha_list, "Comma-separated alpha values")->required();

  std::string figure;
  lrising::ReproduceOptions reproduce_options;
  std::string reproduce_out = ".";
  auto* reproduce_cmd = app.add_subcommand("reproduce", "Regenerate the data behind a figure");
  reproduce_cmd->add_option("figure", figure, "fig2|fig3|fig4|fig5")
      ->required()
      ->check(CLI::IsMember(lrising::reproducible_figures()));
  reproduce_cmd->add_option("--out", reproduce_out, "Output directory");
  reproduce_cmd->add_option("--steps", reproduce_options.steps, "Override the grid size");
  reproduce_cmd->add_flag("--svg", reproduce_options.svg, "Also write SVG plots");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*run_cmd) {
      const lrising::Scenario scenario = run_flags.resolve();
      auto result = lrising::run(scenario, {threads, &std::cout});
      lrising::write_manifest(scenario.out_dir, "run", result.outputs);
      print_run_summary(result);
    } else if (*scan_cmd) {
      lrising::Scenario scenario = scan_flags.resolve();
      auto result = lrising::scan_alpha(scenario, parse_alpha_list(alpha_list), {threads, &std::cout});
      lrising::write_manifest(scenario.out_dir, "scan-alpha", result.outputs);
    } else if (*reproduce_cmd) {
      reproduce_options.out_dir = reproduce_out;
      reproduce_options.threads = threads;
      reproduce_options.log = &std::cout;
      auto result = lrising::reproduce(figure, reproduce_options);
      std::cout << fmt::format("{} files written to {}\n", result.outputs.size(), reproduce_out);
    }
  } catch (const lrising::ContractViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const lrising::ResourceLimitError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitResource;
  } catch (const lrising::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
