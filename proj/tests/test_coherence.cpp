#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "lrising/coherence.hpp"
#include "lrising/errors.hpp"

using namespace lrising;
using Complex = std::complex<double>;

namespace {

// Reduced density matrix from the full 2^n state vector: psi_c =
// 2^{-n/2} exp(-i E_c t), then a partial trace over everything outside the
// block. Shares nothing with the library paths except eigenenergy().
Eigen::MatrixXcd state_vector_rdm(const CouplingModel& model, const BlockSpec& block, double t) {
  const int n = model.n();
  const std::uint64_t full = std::uint64_t{1} << n;
  std::vector<Complex> psi(full);
  const double amplitude = std::pow(2.0, -0.5 * n);
  for (std::uint64_t c = 0; c < full; ++c) {
    const double e = eigenenergy(model, SpinConfig{c});
    psi[c] = amplitude * std::exp(Complex(0.0, -e * t));
  }
  const std::uint64_t dim = std::uint64_t{1} << block.len;
  const std::uint64_t inside_mask = (dim - 1) << (block.start - 1);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::uint64_t c = 0; c < full; ++c) {
    const std::uint64_t a = (c & inside_mask) >> (block.start - 1);
    for (std::uint64_t b = 0; b < dim; ++b) {
      const std::uint64_t partner = (c & ~inside_mask) | (b << (block.start - 1));
      rho(a, b) += psi[c] * std::conj(psi[partner]);
    }
  }
  return rho;
}

double max_abs_diff(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) {
  return (x - y).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("single spin coherence starts at one") {
  const CouplingModel m(9, 1.0, 1.3);
  for (int j = 1; j <= 9; ++j) {
    CHECK(coherence_single_brute(m, j, 0.0) == 1.0);
    CHECK(coherence_single_factorized(m, j, 0.0) == 1.0);
  }
}

TEST_CASE("brute and factorized single-spin paths agree on the worked points") {
  const CouplingModel a(10, 1.0, 1.5);
  CHECK(std::abs(coherence_single_brute(a, 5, 0.7) - coherence_single_factorized(a, 5, 0.7)) <
        1e-10);
  const CouplingModel b(12, 1.0, 2.0);
  CHECK(std::abs(coherence_single_brute(b, 6, 1.3) - coherence_single_factorized(b, 6, 1.3)) <
        1e-10);
}

TEST_CASE("single-spin oracle equivalence over random draws") {
  std::mt19937_64 rng(20240917);
  std::uniform_real_distribution<double> alpha_dist(0.0, 3.0);
  std::uniform_real_distribution<double> time_dist(0.0, 10.0);
  for (int n : {4, 7, 9, 12}) {
    for (int draw = 0; draw < 20; ++draw) {
      const CouplingModel m(n, 1.0, alpha_dist(rng));
      const double t = time_dist(rng);
      const int j = 1 + draw % n;
      CHECK(std::abs(coherence_single_brute(m, j, t) - coherence_single_factorized(m, j, t)) <
            1e-10);
    }
  }
}

TEST_CASE("closed forms: nearest neighbour and uniform coupling") {
  const CouplingModel nearest(20, 1.0, 3.0, Truncation::range(1));
  const CouplingModel flat(20, 1.0, 0.0);
  for (double t = 0.0; t <= 10.0; t += 0.013) {
    const double c2 = std::cos(2.0 * t);
    CHECK(std::abs(coherence_single_factorized(nearest, 10, t) - c2 * c2) < 1e-12);
    CHECK(std::abs(coherence_single_factorized(flat, 10, t) - std::pow(std::abs(c2), 19)) < 1e-12);
  }
  CHECK(coherence_single_factorized(flat, 10, std::numbers::pi / 2) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mirror spins and negative times give identical coherence") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> time_dist(0.0, 10.0);
  for (double alpha : {0.0, 0.5, 1.0, 2.0, 3.0}) {
    const CouplingModel m(20, 1.0, alpha);
    for (int draw = 0; draw < 10; ++draw) {
      const double t = time_dist(rng);
      for (int j = 1; j <= 20; ++j) {
        CHECK(coherence_single_factorized(m, j, t) == coherence_single_factorized(m, 21 - j, t));
        CHECK(coherence_single_factorized(m, j, t) == coherence_single_factorized(m, j, -t));
      }
    }
  }
}

TEST_CASE("reduced density matrix at t = 0 is uniform") {
  const CouplingModel m(8, 1.0, 1.0);
  for (Method method : {Method::brute, Method::factorized}) {
    const auto rho = reduced_density_matrix(m, {3, 3}, 0.0, method);
    CHECK(rho.dim() == 8);
    for (int a = 0; a < 8; ++a) {
      for (int b = 0; b < 8; ++b) CHECK(rho.entries(a, b) == Complex(0.125, 0.0));
    }
  }
}

TEST_CASE("matrix paths agree with each other and with the state-vector oracle") {
  const CouplingModel m(8, 1.0, 1.0);
  const BlockSpec block{4, 2};
  const auto brute = reduced_density_matrix(m, block, 0.9, Method::brute);
  const auto fact = reduced_density_matrix(m, block, 0.9, Method::factorized);
  CHECK(max_abs_diff(brute.entries, fact.entries) < 1e-12);
  CHECK(max_abs_diff(brute.entries, state_vector_rdm(m, block, 0.9)) < 1e-12);

  const CouplingModel m2(7, 1.0, 0.4, Truncation::range(3));
  for (BlockSpec b : {BlockSpec{1, 3}, BlockSpec{3, 2}, BlockSpec{5, 3}, BlockSpec{1, 7}}) {
    const auto oracle = state_vector_rdm(m2, b, 2.3);
    CHECK(max_abs_diff(reduced_density_matrix(m2, b, 2.3, Method::factorized).entries, oracle) <
          1e-12);
    CHECK(max_abs_diff(reduced_density_matrix(m2, b, 2.3, Method::brute).entries, oracle) < 1e-12);
  }
}

TEST_CASE("single-spin block reproduces the single-spin coherence") {
  const CouplingModel m(11, 1.0, 1.7);
  for (double t : {0.3, 1.1, 4.2}) {
    for (int j : {1, 6, 11}) {
      const auto rho = reduced_density_matrix(m, {j, 1}, t, Method::factorized);
      const double single = coherence_single_factorized(m, j, t);
      CHECK(std::abs(std::abs(rho.entries(0, 1)) - 0.5 * single) < 1e-12);
      CHECK(std::abs(coherence_from_matrix(rho) - single) < 1e-12);
      CHECK(std::abs(coherence_block(m, {j, 1}, t) - single) < 1e-12);
    }
  }
}

TEST_CASE("block coherence at t = 0 equals 2^len - 1 exactly") {
  const CouplingModel m(20, 1.0, 2.0);
  for (int len = 1; len <= 10; ++len) {
    const BlockSpec block = BlockSpec::centered(20, len);
    CHECK(coherence_block(m, block, 0.0) == std::ldexp(1.0, len) - 1.0);
    CHECK(initial_coherence(block) == std::ldexp(1.0, len) - 1.0);
  }
  CHECK(coherence_block(m, BlockSpec::centered(20, 4), 0.0) == 15.0);
  const CouplingModel small(9, 1.0, 2.0);
  CHECK(coherence_block(small, {3, 4}, 0.0, Method::brute) == 15.0);
}

TEST_CASE("pattern aggregation matches the summed brute matrix") {
  const CouplingModel m(10, 1.0, 2.0);
  const BlockSpec block{4, 3};
  const double from_matrix =
      coherence_from_matrix(reduced_density_matrix(m, block, 1.7, Method::brute));
  CHECK(std::abs(coherence_block(m, block, 1.7, Method::factorized) - from_matrix) < 1e-10);
  CHECK(std::abs(coherence_block(m, block, 1.7, Method::brute) - from_matrix) < 1e-14);
}

TEST_CASE("block oracle equivalence and matrix invariants over random draws") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> alpha_dist(0.0, 3.0);
  std::uniform_real_distribution<double> time_dist(0.0, 10.0);
  for (int n : {5, 8, 10}) {
    for (int len = 1; len <= 4; ++len) {
      for (int draw = 0; draw < 3; ++draw) {
        const CouplingModel m(n, 1.0, alpha_dist(rng));
        const double t = time_dist(rng);
        const BlockSpec block{1 + (draw * 3) % (n - len + 1), len};
        const auto brute = reduced_density_matrix(m, block, t, Method::brute);
        const auto fact = reduced_density_matrix(m, block, t, Method::factorized);
        CHECK(max_abs_diff(brute.entries, fact.entries) < 1e-10);
        const double pattern = coherence_block(m, block, t);
        CHECK(std::abs(pattern - coherence_from_matrix(brute)) < 1e-10);
        CHECK(std::abs(pattern - coherence_from_matrix(fact)) < 1e-10);
        CHECK(pattern <= initial_coherence(block) + 1e-12);

        const double diag = std::ldexp(1.0, -len);
        for (const auto* rho : {&brute, &fact}) {
          const auto& e = rho->entries;
          CHECK((e - e.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
          CHECK(std::abs(e.trace() - Complex(1.0, 0.0)) < 1e-12);
          for (int a = 0; a < rho->dim(); ++a) CHECK(std::abs(e(a, a) - diag) < 1e-15);
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(e);
          CHECK(solver.eigenvalues().minCoeff() > -1e-10);
        }
        // Diagonal of the factorized path is exact.
        for (int a = 0; a < fact.dim(); ++a) CHECK(fact.entries(a, a) == Complex(diag, 0.0));
      }
    }
  }
}

TEST_CASE("caps raise resource errors") {
  const CouplingModel big(21, 1.0, 1.0);
  CHECK_THROWS_AS(coherence_single_brute(big, 10, 1.0), ResourceLimitError);
  CHECK_NOTHROW(coherence_single_factorized(big, 10, 1.0));
  CHECK_THROWS_AS(reduced_density_matrix(big, {1, 3}, 1.0, Method::brute), ResourceLimitError);
  CHECK_THROWS_AS(reduced_density_matrix(big, {1, 13}, 1.0, Method::factorized),
                  ResourceLimitError);
  CHECK_THROWS_AS(coherence_block(big, {1, 17}, 1.0), ResourceLimitError);
  Limits tight;
  tight.brute_max_n = 6;
  CHECK_THROWS_AS(coherence_single_brute(CouplingModel(7, 1.0, 1.0), 1, 1.0, tight),
                  ResourceLimitError);
  try {
    coherence_single_brute(big, 10, 1.0);
  } catch (const ResourceLimitError& e) {
    CHECK(std::string(e.what()).find("20") != std::string::npos);
  }
}

TEST_CASE("bad targets are contract violations") {
  const CouplingModel m(6, 1.0, 1.0);
  CHECK_THROWS_AS(coherence_single_factorized(m, 0, 1.0), ContractViolation);
  CHECK_THROWS_AS(coherence_single_brute(m, 7, 1.0), ContractViolation);
  CHECK_THROWS_AS(coherence_block(m, {5, 3}, 1.0), ContractViolation);
}

TEST_CASE("series evaluation") {
  const CouplingModel m(20, 1.0, 3.0);
  const std::vector<double> zero{0.0};
  const auto single = coherence_series(m, Spin{10}, zero, true);
  CHECK(single.values == std::vector<double>{1.0});

  const auto grid = TimeGrid{10.0, 1000}.points();
  CHECK(grid.size() == 1000);
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == 10.0);

  const auto block = coherence_series(m, BlockSpec::centered(20, 6), grid, true);
  CHECK(block.values.front() == 1.0);
  for (double v : block.values) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0 + 1e-12);
  }

  const std::vector<double> empty;
  CHECK_THROWS_AS(coherence_series(m, Spin{10}, empty, false), ContractViolation);
  const std::vector<double> backwards{0.0, 1.0, 1.0};
  CHECK_THROWS_AS(coherence_series(m, Spin{10}, backwards, false), ContractViolation);
  CHECK_THROWS_AS((TimeGrid{10.0, 1}.points()), ContractViolation);
  CHECK_THROWS_AS((TimeGrid{0.0, 10}.points()), ContractViolation);
}

TEST_CASE("series do not depend on the thread count") {
  const CouplingModel m(14, 1.0, 1.2);
  const auto grid = TimeGrid{10.0, 257}.points();
  for (const Target& target : {Target{Spin{7}}, Target{BlockSpec{5, 4}}}) {
    for (Method method : {Method::factorized, Method::brute}) {
      SeriesOptions one;
      one.threads = 1;
      SeriesOptions many;
      many.threads = 5;
      const auto a = coherence_series(m, target, grid, false, method, one);
      const auto b = coherence_series(m, target, grid, false, method, many);
      CHECK(a.values == b.values);
    }
  }
}

TEST_CASE("relaxation time of an exponential is one") {
  CoherenceSeries s;
  for (int k = 0; k <= 1000; ++k) {
    s.times.push_back(0.005 * k);
    s.values.push_back(std::exp(-0.005 * k));
  }
  const auto t_r = relaxation_time(s);
  REQUIRE(t_r.has_value());
  CHECK(std::abs(*t_r - 1.0) < 1e-5);
}

TEST_CASE("a series that never decays is not relaxed") {
  const CouplingModel flat(20, 1.0, 0.0);
  std::vector<double> revivals;
  for (int k = 0; k < 8; ++k) revivals.push_back(k * std::numbers::pi / 2);
  const auto s = coherence_series(flat, Spin{10}, revivals, false);
  for (double v : s.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(relaxation_time(s).has_value());
  CHECK_FALSE(relaxation_report(s).first_crossing.has_value());
}

TEST_CASE("a crossing followed by a full revival is not relaxation") {
  const CouplingModel nearest(20, 1.0, 3.0, Truncation::range(1));
  const auto grid = TimeGrid{10.0, 1000}.points();
  const auto s = coherence_series(nearest, Spin{10}, grid, false);
  const auto report = relaxation_report(s);
  REQUIRE(report.first_crossing.has_value());
  CHECK(report.max_revival > 0.99);
  CHECK_FALSE(report.relaxation_time.has_value());
}

TEST_CASE("raw block series use C(0)/e as the threshold") {
  const CouplingModel m(20, 1.0, 1.0);
  const auto grid = TimeGrid{10.0, 500}.points();
  const BlockSpec block = BlockSpec::centered(20, 4);
  const auto raw = coherence_series(m, block, grid, false);
  const auto norm = coherence_series(m, block, grid, true);
  const auto r_raw = relaxation_report(raw);
  const auto r_norm = relaxation_report(norm);
  CHECK(r_raw.threshold == doctest::Approx(15.0 / std::numbers::e));
  CHECK(r_norm.threshold == doctest::Approx(1.0 / std::numbers::e));
  REQUIRE(r_raw.relaxation_time.has_value());
  REQUIRE(r_norm.relaxation_time.has_value());
  CHECK(*r_raw.relaxation_time == doctest::Approx(*r_norm.relaxation_time).epsilon(1e-12));
}

TEST_CASE("relaxation needs two points") {
  CoherenceSeries s;
  s.times = {0.0};
  s.values = {1.0};
  CHECK_THROWS_AS(relaxation_time(s), ContractViolation);
}

TEST_CASE("steady state is the tail mean") {
  CoherenceSeries s;
  for (int k = 0; k < 8; ++k) {
    s.times.push_back(k);
    s.values.push_back(k < 6 ? 1.0 : 0.25);
  }
  CHECK(steady_state_mean(s) == 0.25);
  CHECK(steady_state_mean(s, 1.0) == doctest::Approx((6 + 0.5) / 8));
}

TEST_CASE("window maximum finds the exact revival of cos^2") {
  const CouplingModel nearest(20, 1.0, 3.0, Truncation::range(1));
  const auto peak = window_maximum(nearest, Spin{10}, 8.0, 10.0, 1000);
  CHECK(std::abs(peak.value - 1.0) < 1e-9);
  CHECK(std::abs(peak.time - 3 * std::numbers::pi) < 1e-6);
}
