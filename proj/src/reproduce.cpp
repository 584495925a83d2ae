#include "lrising/reproduce.hpp"

#include <ostream>

#include <fmt/core.h>

#include "lrising/errors.hpp"

namespace lrising {

namespace {

constexpr int kChain = 20;
constexpr int kCentre = 10;

const std::vector<Truncation>& truncations() {
  static const std::vector<Truncation> all{Truncation::range(1), Truncation::range(2),
                                           Truncation::range(3), Truncation::exact()};
  return all;
}

std::string truncation_tag(const Truncation& t) {
  return t.is_exact() ? "exact" : fmt::format("range{}", *t.max_distance());
}

Scenario base_scenario(const ReproduceOptions& options, double t_max, int default_steps) {
  Scenario s;
  s.model = CouplingModel(kChain, 1.0, 3.0);
  s.target = Spin{kCentre};
  s.grid = TimeGrid{t_max, options.steps > 0 ? options.steps : default_steps};
  s.out_dir = options.out_dir;
  s.svg = options.svg;
  return s;
}

void append(std::vector<OutputRecord>& into, std::vector<OutputRecord> from) {
  for (auto& o : from) into.push_back(std::move(o));
}

// Single-spin series for every truncation at one alpha.
void truncation_set(const std::string& prefix, double alpha, bool with_spectrum,
                    const ReproduceOptions& options, std::vector<OutputRecord>& outputs) {
  for (const auto& t : truncations()) {
    Scenario s = base_scenario(options, 10.0, 1000);
    s.model = CouplingModel(kChain, 1.0, alpha, t);
    s.stem = fmt::format("{}{}_", prefix, truncation_tag(t));
    s.outputs = {Output::series, Output::relaxation};
    if (with_spectrum) s.outputs.insert(Output::spectrum);
    append(outputs, run(s, {options.threads, options.log}).outputs);
  }
}

void fig2(const ReproduceOptions& options, std::vector<OutputRecord>& outputs) {
  truncation_set("fig2_", 3.0, true, options, outputs);
}

void fig3(const ReproduceOptions& options, std::vector<OutputRecord>& outputs) {
  for (double alpha : {2.0, 1.0, 0.1}) {
    truncation_set(fmt::format("fig3_alpha{}_", io::format_short(alpha)), alpha, false, options,
                   outputs);
  }
}

void fig4(const ReproduceOptions& options, std::vector<OutputRecord>& outputs) {
  const RunOptions run_options{options.threads, options.log};

  Scenario a = base_scenario(options, 10.0, 1000);
  a.stem = "fig4a_";
  append(outputs, scan_alpha(a, {3.0, 2.0, 1.0}, run_options).outputs);

  Scenario b = base_scenario(options, 2.5, 1000);
  b.stem = "fig4b_";
  append(outputs, scan_alpha(b, {0.1, 0.05, 0.0}, run_options).outputs);

  for (double alpha : {3.0, 2.0, 1.0, 0.5, 0.1, 0.05}) {
    Scenario h = base_scenario(options, 10.0, 1000);
    h.model = h.model.with_alpha(alpha);
    h.stem = fmt::format("fig4_hist_alpha{}_", io::format_short(alpha));
    h.outputs = {Output::spectrum};
    append(outputs, run(h, run_options).outputs);
  }
}

void fig5(const ReproduceOptions& options, std::vector<OutputRecord>& outputs) {
  constexpr double kFinalTime = 40.0;
  std::vector<std::vector<std::string>> rows;
  for (double alpha : {3.0, 2.0, 1.0}) {
    for (int inside : {4, 6, 8, 10}) {
      Scenario s = base_scenario(options, kFinalTime, 400);
      s.model = s.model.with_alpha(alpha);
      s.target = BlockSpec::centered(kChain, inside);
      s.normalize = true;
      s.outputs = {Output::series, Output::steady_state};
      s.stem = fmt::format("fig5_alpha{}_ni{}_", io::format_short(alpha), inside);
      RunResult r = run(s, {options.threads, options.log});
      rows.push_back({io::format_short(alpha), std::to_string(inside),
                      io::format_number(*r.endpoint), io::format_number(*r.steady_state)});
      append(outputs, std::move(r.outputs));
    }
  }
  const io::KeyValues meta{{"n", std::to_string(kChain)},
                           {"j", "1"},
                           {"range", "exact"},
                           {"t_f", io::format_short(kFinalTime)},
                           {"steps", std::to_string(options.steps > 0 ? options.steps : 400)}};
  outputs.push_back(emit(options.out_dir, "fig5_endpoints.csv", "table", rows.size(),
                         io::table_csv({"alpha", "n_inside", "C_norm_tf", "steady_state_mean"},
                                       rows, meta),
                         meta));
  if (options.log) {
    *options.log << fmt::format("{:>6}  {:>9}  {:>22}  {:>22}\n", "alpha", "n_inside",
                                "C_norm(t_f)", "steady_state_mean");
    for (const auto& row : rows) {
      *options.log << fmt::format("{:>6}  {:>9}  {:>22}  {:>22}\n", row[0], row[1], row[2],
                                  row[3]);
    }
  }
}

}  // namespace

const std::vector<std::string>& reproducible_figures() {
  static const std::vector<std::string> names{"fig2", "fig3", "fig4", "fig5"};
  return names;
}

ReproduceResult reproduce(std::string_view figure, const ReproduceOptions& options) {
  ReproduceResult result;
  if (figure == "fig2") {
    fig2(options, result.outputs);
  } else if (figure == "fig3") {
    fig3(options, result.outputs);
  } else if (figure == "fig4") {
    fig4(options, result.outputs);
  } else if (figure == "fig5") {
    fig5(options, result.outputs);
  } else {
    throw ContractViolation(
        fmt::format("unknown figure '{}' (expected fig2, fig3, fig4 or fig5)", figure));
  }
  result.outputs.push_back(
      write_manifest(options.out_dir, fmt::format("reproduce {}", figure), result.outputs));
  return result;
}

}  // namespace lrising
