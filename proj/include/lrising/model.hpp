#pragma once

// Power-law Ising chain H = sum_{i<j} J_ij sx_i sx_j on an open line.
// Spins are 1-based on the public surface; bit (i-1) of a SpinConfig holds
// spin i, set for x-up.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lrising {

/// Either the full power law, or couplings cut to zero beyond a distance.
class Truncation {
 public:
  static Truncation exact() { return Truncation{}; }
  static Truncation range(int r);

  bool is_exact() const { return !range_; }
  std::optional<int> max_distance() const { return range_; }

  /// "exact" or the integer range.
  std::string to_string() const;
  /// Accepts "exact" (case-insensitive) or a positive integer.
  static Truncation parse(std::string_view text);

  friend bool operator==(const Truncation&, const Truncation&) = default;

 private:
  std::optional<int> range_;
};

class CouplingModel {
 public:
  /// Throws ContractViolation unless n >= 2, j > 0, alpha >= 0 and any
  /// truncation range lies in [1, n-1].
  CouplingModel(int n, double j, double alpha,
                Truncation truncation = Truncation::exact());

  int n() const { return n_; }
  double j() const { return j_; }
  double alpha() const { return alpha_; }
  const Truncation& truncation() const { return truncation_; }

  /// J / |i-k|^alpha, or 0 when the pair lies beyond the truncation range.
  double coupling(int i, int k) const;

  CouplingModel with_alpha(double alpha) const;
  CouplingModel with_truncation(Truncation truncation) const;

  friend bool operator==(const CouplingModel&, const CouplingModel&) = default;

 private:
  int n_;
  double j_;
  double alpha_;
  Truncation truncation_;
};

inline double coupling(const CouplingModel& model, int i, int k) {
  return model.coupling(i, k);
}

/// Dense 0-based coupling table, diagonal zero. Built once per model for
/// the inner loops.
class CouplingMatrix {
 public:
  explicit CouplingMatrix(const CouplingModel& model);

  int n() const { return n_; }
  double operator()(int row, int col) const { return data_[row * n_ + col]; }

 private:
  int n_;
  std::vector<double> data_;
};

/// N-bit x-basis product configuration.
struct SpinConfig {
  std::uint64_t bits = 0;

  static constexpr int kMaxSpins = 64;

  /// +1 for x-up, -1 for x-down; spin is 1-based.
  int spin_value(int spin) const { return (bits >> (spin - 1)) & 1U ? 1 : -1; }

  /// Bitwise complement restricted to the low n bits.
  SpinConfig flipped(int n) const;

  /// Throws ContractViolation if bits above n are set or n is too wide.
  void validate(int n) const;

  friend bool operator==(const SpinConfig&, const SpinConfig&) = default;
};

/// sum_{i<k} J_ik s_i s_k with s = 2 sigma - 1.
double eigenenergy(const CouplingModel& model, SpinConfig config);

/// Contiguous inside block [start, start + len - 1], 1-based.
struct BlockSpec {
  int start = 1;
  int len = 1;

  int last() const { return start + len - 1; }
  bool contains(int spin) const { return spin >= start && spin <= last(); }

  /// Block of the given length placed at the chain centre (left-biased for
  /// odd leftovers).
  static BlockSpec centered(int n, int len);

  void validate(int n) const;

  friend bool operator==(const BlockSpec&, const BlockSpec&) = default;
};

}  // namespace lrising
