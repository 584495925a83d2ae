#include "lrising/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "lrising/errors.hpp"

namespace lrising {

std::vector<double> effective_frequencies(const CouplingModel& model, int spin, int max_n) {
  if (spin < 1 || spin > model.n()) {
    throw ContractViolation(fmt::format("spin {} outside 1..{}", spin, model.n()));
  }
  if (model.n() > max_n) {
    throw ResourceLimitError(fmt::format(
        "enumerating 2^{} effective frequencies exceeds the cap n <= {}", model.n() - 1, max_n));
  }
  std::vector<double> weights;  // J_i,spin for outside spins, ascending i
  weights.reserve(model.n() - 1);
  for (int i = 1; i <= model.n(); ++i) {
    if (i != spin) weights.push_back(model.coupling(i, spin));
  }
  const std::uint64_t count = std::uint64_t{1} << weights.size();
  std::vector<double> omega(count);
  for (std::uint64_t s = 0; s < count; ++s) {
    double field = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
      field += (s >> k) & 1U ? weights[k] : -weights[k];
    }
    omega[s] = 2.0 * field;
  }
  return omega;
}

std::string to_string(Normalization normalization) {
  return normalization == Normalization::unit_sum ? "unit-sum" : "unit-max";
}

Normalization parse_normalization(std::string_view text) {
  if (text == "unit-sum") return Normalization::unit_sum;
  if (text == "unit-max") return Normalization::unit_max;
  throw ContractViolation(
      fmt::format("histogram normalization must be 'unit-sum' or 'unit-max', got '{}'", text));
}

std::vector<double> symmetric_edges(double half_width, int bins) {
  if (bins < 1) throw ContractViolation(fmt::format("need at least one bin, got {}", bins));
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw ContractViolation(fmt::format("histogram half-width must be positive, got {}", half_width));
  }
  std::vector<double> edges(bins + 1);
  for (int k = 0; k <= bins; ++k) {
    edges[k] = half_width * static_cast<double>(2 * k - bins) / bins;
  }
  edges.front() = -half_width;
  edges.back() = half_width;
  return edges;
}

FrequencyHistogram histogram(std::span<const double> values, std::vector<double> edges,
                             Normalization normalization) {
  if (values.empty()) throw ContractViolation("histogram of an empty multiset");
  if (edges.size() < 2) throw ContractViolation("histogram needs at least two edges");
  for (std::size_t k = 1; k < edges.size(); ++k) {
    if (!(edges[k] > edges[k - 1])) {
      throw ContractViolation("histogram edges must be strictly increasing");
    }
  }

  FrequencyHistogram h;
  h.counts.assign(edges.size() - 1, 0);
  for (double v : values) {
    if (!(v >= edges.front() && v <= edges.back())) {
      throw ContractViolation(fmt::format("value {} outside histogram range [{}, {}]", v,
                                          edges.front(), edges.back()));
    }
    auto bin = static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), v) -
                                        edges.begin()) - 1;
    bin = std::min(bin, h.counts.size() - 1);
    ++h.counts[bin];
  }

  h.total_count = values.size();
  h.normalization = normalization;
  const double denominator =
      normalization == Normalization::unit_sum
          ? static_cast<double>(h.total_count)
          : static_cast<double>(*std::max_element(h.counts.begin(), h.counts.end()));
  h.mass.reserve(h.counts.size());
  for (auto c : h.counts) h.mass.push_back(static_cast<double>(c) / denominator);
  h.bin_edges = std::move(edges);
  return h;
}

FrequencyHistogram histogram(std::span<const double> values, int bins,
                             Normalization normalization) {
  if (values.empty()) throw ContractViolation("histogram of an empty multiset");
  double half_width = 0.0;
  for (double v : values) half_width = std::max(half_width, std::abs(v));
  if (half_width == 0.0) half_width = 1.0;
  return histogram(values, symmetric_edges(half_width, bins), normalization);
}

FrequencyHistogram frequency_histogram(const CouplingModel& model, int spin, int bins,
                                       Normalization normalization) {
  const auto omega = effective_frequencies(model, spin);
  auto h = histogram(omega, bins, normalization);
  h.meta = HistogramMeta{model, spin};
  return h;
}

std::vector<DistinctValue> distinct_values(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<DistinctValue> out;
  for (double v : sorted) {
    if (!out.empty() && out.back().value == v) {
      ++out.back().multiplicity;
    } else {
      out.push_back({v, 1});
    }
  }
  return out;
}

}  // namespace lrising
