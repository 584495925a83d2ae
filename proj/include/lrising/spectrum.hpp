#pragma once

// Effective frequencies omega_l = 2 sum_{i != j} J_ij s_i of one spin over
// all outside sign vectors, and their histograms.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lrising/model.hpp"

namespace lrising {

/// Default cap on n for frequency enumeration (2^(n-1) values).
inline constexpr int kSpectrumMaxN = 24;

/// All 2^(n-1) effective frequencies of `spin`, in outside-configuration
/// order (bit k of the index is the k-th outside spin, ascending).
std::vector<double> effective_frequencies(const CouplingModel& model, int spin,
                                          int max_n = kSpectrumMaxN);

/// unit_sum divides bin counts by the total; unit_max by the largest bin.
enum class Normalization { unit_sum, unit_max };

std::string to_string(Normalization normalization);
Normalization parse_normalization(std::string_view text);

struct HistogramMeta {
  CouplingModel model;
  int spin;
};

struct FrequencyHistogram {
  std::vector<double> bin_edges;  // B + 1, strictly increasing
  std::vector<double> mass;       // B
  std::vector<std::uint64_t> counts;
  Normalization normalization = Normalization::unit_sum;
  std::uint64_t total_count = 0;
  std::optional<HistogramMeta> meta;

  std::size_t bins() const { return mass.size(); }
};

inline constexpr int kDefaultBins = 201;

/// B bins spanning [-half_width, half_width]; edge k is exactly the
/// negation of edge B - k.
std::vector<double> symmetric_edges(double half_width, int bins);

/// Left-closed, right-open bins with the last bin closed. Values outside the
/// edges are a contract violation.
FrequencyHistogram histogram(std::span<const double> values, std::vector<double> edges,
                             Normalization normalization = Normalization::unit_sum);

/// Symmetric bins over [-max|v|, max|v|].
FrequencyHistogram histogram(std::span<const double> values, int bins = kDefaultBins,
                             Normalization normalization = Normalization::unit_sum);

FrequencyHistogram frequency_histogram(const CouplingModel& model, int spin,
                                       int bins = kDefaultBins,
                                       Normalization normalization = Normalization::unit_sum);

struct DistinctValue {
  double value;
  std::uint64_t multiplicity;
};

/// Sorted distinct values (exact comparison) with multiplicities.
std::vector<DistinctValue> distinct_values(std::span<const double> values);

}  // namespace lrising
