#include "lrising/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>

#include <boost/math/tools/minima.hpp>
#include <fmt/core.h>

#include "lrising/errors.hpp"
#include "parallel.hpp"

namespace lrising {

namespace {

using Complex = std::complex<double>;

void check_spin(const CouplingModel& model, int spin) {
  if (spin < 1 || spin > model.n()) {
    throw ContractViolation(fmt::format("spin {} outside 1..{}", spin, model.n()));
  }
}

void check_brute_cap(const CouplingModel& model, const Limits& limits) {
  if (model.n() > limits.brute_max_n) {
    throw ResourceLimitError(fmt::format(
        "brute-force enumeration over 2^{} configurations exceeds the cap n <= {}", model.n(),
        limits.brute_max_n));
  }
}

void check_matrix_cap(const BlockSpec& block, const Limits& limits) {
  if (block.len > limits.matrix_max_len) {
    throw ResourceLimitError(
        fmt::format("reduced density matrix for {} inside spins exceeds the cap len <= {}",
                    block.len, limits.matrix_max_len));
  }
}

// Energy of a full configuration from the precomputed table.
double energy(const CouplingMatrix& couplings, std::uint64_t bits) {
  const int n = couplings.n();
  double e = 0.0;
  for (int i = 0; i < n; ++i) {
    const int si = (bits >> i) & 1U ? 1 : -1;
    for (int k = i + 1; k < n; ++k) {
      const int sk = (bits >> k) & 1U ? 1 : -1;
      e += couplings(i, k) * (si * sk);
    }
  }
  return e;
}

// Scatters `inside` onto the block bits and `outside` onto the remaining
// bits, both in ascending spin order.
std::uint64_t compose(std::uint64_t inside, std::uint64_t outside, const BlockSpec& block,
                      int n) {
  std::uint64_t bits = 0;
  int in_bit = 0;
  int out_bit = 0;
  for (int spin = 1; spin <= n; ++spin) {
    const std::uint64_t source = block.contains(spin) ? (inside >> in_bit++) : (outside >> out_bit++);
    bits |= (source & 1U) << (spin - 1);
  }
  return bits;
}

struct Partition {
  std::vector<int> inside;   // 0-based positions
  std::vector<int> outside;
};

Partition partition(const BlockSpec& block, int n) {
  Partition p;
  for (int spin = 1; spin <= n; ++spin) {
    (block.contains(spin) ? p.inside : p.outside).push_back(spin - 1);
  }
  return p;
}

// omega_l = E(spin up, s) - E(spin down, s) for every outside s, by direct
// energy evaluation.
std::vector<double> frequencies_from_energies(const CouplingModel& model, int spin) {
  const CouplingMatrix couplings(model);
  const BlockSpec single{spin, 1};
  const std::uint64_t count = std::uint64_t{1} << (model.n() - 1);
  std::vector<double> omega(count);
  for (std::uint64_t s = 0; s < count; ++s) {
    omega[s] = energy(couplings, compose(1, s, single, model.n())) -
               energy(couplings, compose(0, s, single, model.n()));
  }
  return omega;
}

double single_from_frequencies(const std::vector<double>& omega, double t) {
  Complex sum{0.0, 0.0};
  for (double w : omega) sum += Complex(std::cos(w * t), std::sin(w * t));
  return std::abs(sum) / static_cast<double>(omega.size());
}

// Single-spin couplings grouped by distance so that mirror-image spins see
// the same multiplication order.
struct SpinFactors {
  std::vector<double> couplings;  // in order of increasing distance, left first
};

SpinFactors single_factors(const CouplingModel& model, int spin) {
  SpinFactors f;
  for (int d = 1; d < model.n(); ++d) {
    if (spin - d >= 1) f.couplings.push_back(model.coupling(spin, spin - d));
    if (spin + d <= model.n()) f.couplings.push_back(model.coupling(spin, spin + d));
  }
  return f;
}

double single_factorized(const SpinFactors& f, double t) {
  double product = 1.0;
  for (double j : f.couplings) product *= std::abs(std::cos(2.0 * j * t));
  return product;
}

// Energies E(a, s) for every inside a and outside s, indexed [a][s].
class BlockEnergyTable {
 public:
  BlockEnergyTable(const CouplingModel& model, const BlockSpec& block)
      : inside_count_(std::uint64_t{1} << block.len),
        outside_count_(std::uint64_t{1} << (model.n() - block.len)),
        n_(model.n()),
        energies_(inside_count_ * outside_count_) {
    const CouplingMatrix couplings(model);
    for (std::uint64_t a = 0; a < inside_count_; ++a) {
      for (std::uint64_t s = 0; s < outside_count_; ++s) {
        energies_[a * outside_count_ + s] = energy(couplings, compose(a, s, block, n_));
      }
    }
  }

  ReducedDensityMatrix matrix(double t) const {
    ReducedDensityMatrix rho;
    const auto dim = static_cast<Eigen::Index>(inside_count_);
    rho.entries.resize(dim, dim);
    const double scale = std::ldexp(1.0, -n_);
    for (std::uint64_t a = 0; a < inside_count_; ++a) {
      for (std::uint64_t b = 0; b < inside_count_; ++b) {
        Complex sum{0.0, 0.0};
        const double* ea = &energies_[a * outside_count_];
        const double* eb = &energies_[b * outside_count_];
        for (std::uint64_t s = 0; s < outside_count_; ++s) {
          const double phase = -(ea[s] - eb[s]) * t;
          sum += Complex(std::cos(phase), std::sin(phase));
        }
        rho.entries(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = sum * scale;
      }
    }
    return rho;
  }

 private:
  std::uint64_t inside_count_;
  std::uint64_t outside_count_;
  int n_;
  std::vector<double> energies_;
};

// Inside/outside coupling tables for the factorized block paths.
struct BlockCouplings {
  int inside_len = 0;
  int outside_len = 0;
  std::vector<double> cross;        // [k * outside_len + m] = J(inside k, outside m)
  std::vector<double> inside_pair;  // [k * inside_len + q]

  BlockCouplings(const CouplingModel& model, const BlockSpec& block) {
    const CouplingMatrix couplings(model);
    const Partition p = partition(block, model.n());
    inside_len = static_cast<int>(p.inside.size());
    outside_len = static_cast<int>(p.outside.size());
    cross.resize(static_cast<std::size_t>(inside_len) * outside_len);
    inside_pair.resize(static_cast<std::size_t>(inside_len) * inside_len);
    for (int k = 0; k < inside_len; ++k) {
      for (int m = 0; m < outside_len; ++m) {
        cross[k * outside_len + m] = couplings(p.inside[k], p.outside[m]);
      }
      for (int q = 0; q < inside_len; ++q) {
        inside_pair[k * inside_len + q] = couplings(p.inside[k], p.inside[q]);
      }
    }
  }

  double inside_energy(std::uint64_t a) const {
    double e = 0.0;
    for (int k = 0; k < inside_len; ++k) {
      const int sk = (a >> k) & 1U ? 1 : -1;
      for (int q = k + 1; q < inside_len; ++q) {
        const int sq = (a >> q) & 1U ? 1 : -1;
        e += inside_pair[k * inside_len + q] * (sk * sq);
      }
    }
    return e;
  }
};

ReducedDensityMatrix factorized_matrix(const BlockCouplings& bc, double t) {
  const std::uint64_t count = std::uint64_t{1} << bc.inside_len;
  const double scale = std::ldexp(1.0, -bc.inside_len);
  std::vector<double> inside_energy(count);
  for (std::uint64_t a = 0; a < count; ++a) inside_energy[a] = bc.inside_energy(a);

  ReducedDensityMatrix rho;
  rho.entries.resize(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(count));
  std::vector<double> field(bc.outside_len);
  for (std::uint64_t a = 0; a < count; ++a) {
    for (std::uint64_t b = 0; b < count; ++b) {
      std::fill(field.begin(), field.end(), 0.0);
      for (int k = 0; k < bc.inside_len; ++k) {
        const int diff = ((a >> k) & 1U ? 1 : -1) - ((b >> k) & 1U ? 1 : -1);
        if (diff == 0) continue;
        for (int m = 0; m < bc.outside_len; ++m) {
          field[m] += bc.cross[k * bc.outside_len + m] * diff;
        }
      }
      double magnitude = scale;
      for (double h : field) magnitude *= std::cos(t * h);
      const double phase = -(inside_energy[a] - inside_energy[b]) * t;
      rho.entries(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          Complex(std::cos(phase), std::sin(phase)) * magnitude;
    }
  }
  return rho;
}

// Sum over difference patterns d in {-2, 0, +2}^len, d != 0. Only patterns
// whose first nonzero entry is +2 are visited; d and -d contribute equally.
class PatternSum {
 public:
  explicit PatternSum(const BlockCouplings& bc) : bc_(bc) {}

  double operator()(double t) const {
    const int len = bc_.inside_len;
    std::vector<double> fields(static_cast<std::size_t>(len + 1) * bc_.outside_len, 0.0);
    double total = 0.0;
    visit(0, false, 0, t, fields, total);
    return 2.0 * total * std::ldexp(1.0, -len);
  }

 private:
  void visit(int k, bool any_nonzero, int zeros, double t, std::vector<double>& fields,
             double& total) const {
    const int out = bc_.outside_len;
    const double* h = &fields[static_cast<std::size_t>(k) * out];
    if (k == bc_.inside_len) {
      if (!any_nonzero) return;
      double product = std::ldexp(1.0, zeros);
      for (int m = 0; m < out; ++m) product *= std::abs(std::cos(t * h[m]));
      total += product;
      return;
    }
    double* next = &fields[static_cast<std::size_t>(k + 1) * out];
    const double* row = &bc_.cross[static_cast<std::size_t>(k) * out];

    std::copy(h, h + out, next);
    visit(k + 1, any_nonzero, zeros + 1, t, fields, total);

    for (int m = 0; m < out; ++m) next[m] = h[m] + 2.0 * row[m];
    visit(k + 1, true, zeros, t, fields, total);

    if (any_nonzero) {
      for (int m = 0; m < out; ++m) next[m] = h[m] - 2.0 * row[m];
      visit(k + 1, true, zeros, t, fields, total);
    }
  }

  const BlockCouplings& bc_;
};

using Evaluator = std::function<double(double)>;

// Precomputes whatever the chosen path needs and returns C(t). All size caps
// are enforced here, before any evaluation.
Evaluator make_evaluator(const CouplingModel& model, const Target& target, Method method,
                         const Limits& limits) {
  if (const auto* spin = std::get_if<Spin>(&target)) {
    check_spin(model, spin->index);
    if (method == Method::brute) {
      check_brute_cap(model, limits);
      auto omega = std::make_shared<std::vector<double>>(
          frequencies_from_energies(model, spin->index));
      return [omega](double t) { return single_from_frequencies(*omega, t); };
    }
    auto factors = std::make_shared<SpinFactors>(single_factors(model, spin->index));
    return [factors](double t) { return single_factorized(*factors, t); };
  }

  const auto& block = std::get<BlockSpec>(target);
  block.validate(model.n());
  if (method == Method::brute) {
    check_brute_cap(model, limits);
    check_matrix_cap(block, limits);
    auto table = std::make_shared<BlockEnergyTable>(model, block);
    return [table](double t) { return coherence_from_matrix(table->matrix(t)); };
  }
  if (block.len > limits.pattern_max_len) {
    throw ResourceLimitError(
        fmt::format("difference-pattern sum for {} inside spins exceeds the cap len <= {}",
                    block.len, limits.pattern_max_len));
  }
  auto couplings = std::make_shared<BlockCouplings>(model, block);
  return [couplings](double t) { return PatternSum(*couplings)(t); };
}

}  // namespace

std::string to_string(Method method) {
  return method == Method::brute ? "brute" : "factorized";
}

Method parse_method(std::string_view text) {
  if (text == "brute") return Method::brute;
  if (text == "factorized") return Method::factorized;
  throw ContractViolation(fmt::format("method must be 'brute' or 'factorized', got '{}'", text));
}

std::string describe(const Target& target) {
  if (const auto* spin = std::get_if<Spin>(&target)) return fmt::format("spin {}", spin->index);
  const auto& block = std::get<BlockSpec>(target);
  return fmt::format("block {}..{}", block.start, block.last());
}

double initial_coherence(const Target& target) {
  if (std::holds_alternative<Spin>(target)) return 1.0;
  return std::ldexp(1.0, std::get<BlockSpec>(target).len) - 1.0;
}

double coherence_single_brute(const CouplingModel& model, int spin, double t,
                              const Limits& limits) {
  check_spin(model, spin);
  check_brute_cap(model, limits);
  return single_from_frequencies(frequencies_from_energies(model, spin), t);
}

double coherence_single_factorized(const CouplingModel& model, int spin, double t) {
  check_spin(model, spin);
  return single_factorized(single_factors(model, spin), t);
}

ReducedDensityMatrix reduced_density_matrix(const CouplingModel& model, const BlockSpec& block,
                                            double t, Method method, const Limits& limits) {
  block.validate(model.n());
  check_matrix_cap(block, limits);
  if (method == Method::brute) {
    check_brute_cap(model, limits);
    return BlockEnergyTable(model, block).matrix(t);
  }
  return factorized_matrix(BlockCouplings(model, block), t);
}

double coherence_from_matrix(const ReducedDensityMatrix& rho) {
  double sum = 0.0;
  for (Eigen::Index a = 0; a < rho.entries.rows(); ++a) {
    for (Eigen::Index b = 0; b < rho.entries.cols(); ++b) {
      if (a != b) sum += std::abs(rho.entries(a, b));
    }
  }
  return sum;
}

double coherence_block(const CouplingModel& model, const BlockSpec& block, double t,
                       Method method, const Limits& limits) {
  return make_evaluator(model, block, method, limits)(t);
}

double coherence(const CouplingModel& model, const Target& target, double t, Method method,
                 const Limits& limits) {
  return make_evaluator(model, target, method, limits)(t);
}

std::vector<double> TimeGrid::points() const {
  if (steps < 2) throw ContractViolation(fmt::format("grid needs >= 2 steps, got {}", steps));
  if (!(t_max > 0.0) || !std::isfinite(t_max)) {
    throw ContractViolation(fmt::format("grid needs t_max > 0, got {}", t_max));
  }
  std::vector<double> t(steps);
  for (int k = 0; k < steps; ++k) t[k] = t_max * k / (steps - 1);
  return t;
}

CoherenceSeries coherence_series(const CouplingModel& model, const Target& target,
                                 std::span<const double> times, bool normalized, Method method,
                                 const SeriesOptions& options) {
  if (times.empty()) throw ContractViolation("coherence series needs a non-empty time grid");
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1])) {
      throw ContractViolation(
          fmt::format("time grid must be strictly increasing (index {}: {} after {})", k,
                      times[k], times[k - 1]));
    }
  }
  const Evaluator evaluate = make_evaluator(model, target, method, options.limits);

  CoherenceSeries series;
  series.times.assign(times.begin(), times.end());
  series.values.resize(times.size());
  series.normalized = normalized;
  series.meta = SeriesMeta{model, target, method};

  const double scale = normalized ? initial_coherence(target) : 1.0;
  detail::parallel_for(times.size(), options.threads, [&](std::size_t k) {
    series.values[k] = evaluate(times[k]) / scale;
  });
  return series;
}

RelaxationReport relaxation_report(const CoherenceSeries& series,
                                   const RelaxationOptions& options) {
  if (series.size() < 2 || series.values.size() != series.times.size()) {
    throw ContractViolation("relaxation time needs a series with at least 2 points");
  }
  double reference = series.values.front();
  if (series.normalized) {
    reference = 1.0;
  } else if (series.meta) {
    reference = initial_coherence(series.meta->target);
  }

  RelaxationReport report;
  report.threshold = reference / std::numbers::e;

  const auto& v = series.values;
  const auto& t = series.times;
  const auto hit = std::find_if(v.begin(), v.end(), [&](double c) { return c <= report.threshold; });
  if (hit == v.end()) return report;

  const auto k = static_cast<std::size_t>(hit - v.begin());
  if (k == 0) {
    report.first_crossing = t.front();
  } else {
    const double fraction = (v[k - 1] - report.threshold) / (v[k - 1] - v[k]);
    report.first_crossing = t[k - 1] + fraction * (t[k] - t[k - 1]);
  }
  report.max_revival = *std::max_element(hit, v.end()) / reference;
  if (report.max_revival < options.revival_fraction) {
    report.relaxation_time = report.first_crossing;
  }
  return report;
}

std::optional<double> relaxation_time(const CoherenceSeries& series,
                                      const RelaxationOptions& options) {
  return relaxation_report(series, options).relaxation_time;
}

double steady_state_mean(const CoherenceSeries& series, double tail_fraction) {
  if (series.values.empty()) throw ContractViolation("steady state of an empty series");
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
    throw ContractViolation(fmt::format("tail fraction must be in (0, 1], got {}", tail_fraction));
  }
  const std::size_t n = series.values.size();
  auto start = static_cast<std::size_t>(std::floor(static_cast<double>(n) * (1.0 - tail_fraction)));
  start = std::min(start, n - 1);
  double sum = 0.0;
  for (std::size_t k = start; k < n; ++k) sum += series.values[k];
  return sum / static_cast<double>(n - start);
}

WindowMaximum window_maximum(const CouplingModel& model, const Target& target, double t_lo,
                             double t_hi, int samples) {
  if (!(t_hi > t_lo) || samples < 2) {
    throw ContractViolation(fmt::format("bad window [{}, {}] with {} samples", t_lo, t_hi, samples));
  }
  const Evaluator evaluate = make_evaluator(model, target, Method::factorized, Limits{});
  const double step = (t_hi - t_lo) / (samples - 1);
  WindowMaximum best{t_lo, evaluate(t_lo)};
  int best_k = 0;
  for (int k = 1; k < samples; ++k) {
    const double t = t_lo + step * k;
    const double c = evaluate(t);
    if (c > best.value) {
      best = {t, c};
      best_k = k;
    }
  }
  const double lo = std::max(t_lo, t_lo + step * (best_k - 1));
  const double hi = std::min(t_hi, t_lo + step * (best_k + 1));
  const auto refined = boost::math::tools::brent_find_minima(
      [&](double t) { return -evaluate(t); }, lo, hi, std::numeric_limits<double>::digits);
  if (-refined.second > best.value) best = {refined.first, -refined.second};
  return best;
}

}  // namespace lrising
