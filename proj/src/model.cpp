#include "lrising/model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>

#include <fmt/core.h>

#include "lrising/errors.hpp"

namespace lrising {

Truncation Truncation::range(int r) {
  if (r < 1) {
    throw ContractViolation(fmt::format("truncation range must be >= 1, got {}", r));
  }
  Truncation t;
  t.range_ = r;
  return t;
}

std::string Truncation::to_string() const {
  return range_ ? std::to_string(*range_) : std::string("exact");
}

Truncation Truncation::parse(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "exact") return exact();
  int r = 0;
  auto [ptr, ec] = std::from_chars(lower.data(), lower.data() + lower.size(), r);
  if (ec != std::errc{} || ptr != lower.data() + lower.size()) {
    throw ContractViolation(
        fmt::format("range must be a positive integer or 'exact', got '{}'", text));
  }
  return range(r);
}

CouplingModel::CouplingModel(int n, double j, double alpha, Truncation truncation)
    : n_(n), j_(j), alpha_(alpha), truncation_(truncation) {
  if (n < 2) throw ContractViolation(fmt::format("chain needs n >= 2 spins, got {}", n));
  if (!(j > 0.0) || !std::isfinite(j)) {
    throw ContractViolation(fmt::format("coupling J must be positive and finite, got {}", j));
  }
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw ContractViolation(fmt::format("alpha must be >= 0 and finite, got {}", alpha));
  }
  if (auto r = truncation.max_distance(); r && *r > n - 1) {
    throw ContractViolation(fmt::format("truncation range {} exceeds n-1 = {}", *r, n - 1));
  }
}

double CouplingModel::coupling(int i, int k) const {
  if (i < 1 || i > n_ || k < 1 || k > n_) {
    throw ContractViolation(fmt::format("spin pair ({}, {}) outside 1..{}", i, k, n_));
  }
  if (i == k) throw ContractViolation(fmt::format("coupling of spin {} with itself", i));
  const int distance = std::abs(i - k);
  if (auto r = truncation_.max_distance(); r && distance > *r) return 0.0;
  return j_ / std::pow(static_cast<double>(distance), alpha_);
}

CouplingModel CouplingModel::with_alpha(double alpha) const {
  return CouplingModel(n_, j_, alpha, truncation_);
}

CouplingModel CouplingModel::with_truncation(Truncation truncation) const {
  return CouplingModel(n_, j_, alpha_, truncation);
}

CouplingMatrix::CouplingMatrix(const CouplingModel& model)
    : n_(model.n()), data_(static_cast<std::size_t>(model.n()) * model.n(), 0.0) {
  for (int i = 0; i < n_; ++i) {
    for (int k = i + 1; k < n_; ++k) {
      const double value = model.coupling(i + 1, k + 1);
      data_[i * n_ + k] = value;
      data_[k * n_ + i] = value;
    }
  }
}

SpinConfig SpinConfig::flipped(int n) const {
  const std::uint64_t mask = n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
  return SpinConfig{~bits & mask};
}

void SpinConfig::validate(int n) const {
  if (n < 1 || n > kMaxSpins) {
    throw ContractViolation(fmt::format("configurations hold 1..{} spins, got {}", kMaxSpins, n));
  }
  if (n < 64 && (bits >> n) != 0) {
    throw ContractViolation(fmt::format("configuration {:#x} has bits above spin {}", bits, n));
  }
}

double eigenenergy(const CouplingModel& model, SpinConfig config) {
  const int n = model.n();
  config.validate(n);
  double energy = 0.0;
  for (int i = 1; i <= n; ++i) {
    const int si = config.spin_value(i);
    for (int k = i + 1; k <= n; ++k) {
      energy += model.coupling(i, k) * (si * config.spin_value(k));
    }
  }
  return energy;
}

BlockSpec BlockSpec::centered(int n, int len) {
  BlockSpec block{(n - len) / 2 + 1, len};
  block.validate(n);
  return block;
}

void BlockSpec::validate(int n) const {
  if (len < 1) throw ContractViolation(fmt::format("block length must be >= 1, got {}", len));
  if (start < 1 || last() > n) {
    throw ContractViolation(
        fmt::format("block [{}, {}] does not fit in a chain of {} spins", start, last(), n));
  }
}

}  // namespace lrising
