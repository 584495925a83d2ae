#pragma once

// Coherence of a single spin or a contiguous block after the quench from the
// all-z-up state. Each quantity has a brute-force path that enumerates the
// traced-out configurations and a factorized path whose cost is polynomial in
// the number of outside spins.

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "lrising/model.hpp"

namespace lrising {

enum class Method { brute, factorized };

std::string to_string(Method method);
Method parse_method(std::string_view text);

/// Size caps for the exponential paths.
struct Limits {
  int brute_max_n = 20;       // 2^n enumeration
  int matrix_max_len = 12;    // 4^len matrix entries
  int pattern_max_len = 16;   // 3^len difference patterns
};

/// 1-based spin index, kept distinct from plain ints in Target.
struct Spin {
  int index = 1;
  friend bool operator==(const Spin&, const Spin&) = default;
};

using Target = std::variant<Spin, BlockSpec>;

std::string describe(const Target& target);

/// C(0): 1 for a single spin, 2^len - 1 for a block.
double initial_coherence(const Target& target);

struct ReducedDensityMatrix {
  // Basis ordered by the integer value of the inside configuration; bit k
  // is spin block.start + k.
  Eigen::MatrixXcd entries;

  int dim() const { return static_cast<int>(entries.rows()); }
};

double coherence_single_brute(const CouplingModel& model, int spin, double t,
                              const Limits& limits = {});

/// prod_{i != spin} |cos(2 J_i,spin t)|.
double coherence_single_factorized(const CouplingModel& model, int spin, double t);

ReducedDensityMatrix reduced_density_matrix(const CouplingModel& model, const BlockSpec& block,
                                            double t, Method method,
                                            const Limits& limits = {});

/// Sum of |off-diagonal| entries.
double coherence_from_matrix(const ReducedDensityMatrix& rho);

/// Brute: full matrix by enumeration, then summed. Factorized: aggregated
/// over the 3^len - 1 difference patterns without building the matrix.
double coherence_block(const CouplingModel& model, const BlockSpec& block, double t,
                       Method method = Method::factorized, const Limits& limits = {});

double coherence(const CouplingModel& model, const Target& target, double t,
                 Method method = Method::factorized, const Limits& limits = {});

/// Uniform grid t_k = t_max * k / (steps - 1).
struct TimeGrid {
  double t_max = 10.0;
  int steps = 1000;

  std::vector<double> points() const;
};

struct SeriesMeta {
  CouplingModel model;
  Target target;
  Method method;
};

struct CoherenceSeries {
  std::vector<double> times;
  std::vector<double> values;
  bool normalized = false;
  std::optional<SeriesMeta> meta;

  std::size_t size() const { return times.size(); }
};

struct SeriesOptions {
  Limits limits{};
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Evaluates the target on every grid point. The result does not depend on
/// the thread count. Normalized series are divided by the exact C(0).
CoherenceSeries coherence_series(const CouplingModel& model, const Target& target,
                                 std::span<const double> times, bool normalized,
                                 Method method = Method::factorized,
                                 const SeriesOptions& options = {});

struct RelaxationOptions {
  // A later sample at or above this fraction of C(0) counts as a full
  // resurrection and voids the crossing.
  double revival_fraction = 0.99;
};

struct RelaxationReport {
  double threshold = 0.0;                  // C(0)/e in series units
  std::optional<double> first_crossing;    // interpolated, if reached at all
  std::optional<double> relaxation_time;   // empty: NotRelaxed
  double max_revival = 0.0;                // max C/C(0) after the crossing
};

RelaxationReport relaxation_report(const CoherenceSeries& series,
                                   const RelaxationOptions& options = {});

/// First crossing of C(0)/e, or nullopt (NotRelaxed).
std::optional<double> relaxation_time(const CoherenceSeries& series,
                                      const RelaxationOptions& options = {});

/// Mean of the values over the trailing fraction of the grid.
double steady_state_mean(const CoherenceSeries& series, double tail_fraction = 0.25);

struct WindowMaximum {
  double time = 0.0;
  double value = 0.0;
};

/// Largest coherence on [t_lo, t_hi]: dense scan, then Brent refinement
/// around the best sample. Factorized path only.
WindowMaximum window_maximum(const CouplingModel& model, const Target& target, double t_lo,
                             double t_hi, int samples = 2001);

}  // namespace lrising
