#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "osc/objectives.hpp"
#include "osc/quantifiers.hpp"
#include "osc/trace.hpp"

namespace osc {

struct AggregatePoint {
  std::uint64_t t = 0;
  double mean_cum_regret = 0.0;
  /// Sample standard deviation (n - 1 denominator); NaN for a single trace.
  double std_cum_regret = 0.0;
  double mean_avg_regret = 0.0;
};

struct AggregateCurve {
  std::vector<AggregatePoint> points;
};

/// Mean and spread of cumulative regret across trials at each checkpoint.
/// Throws std::invalid_argument when traces disagree on config hash, when
/// there are no traces, or when a checkpoint is not a recorded round.
AggregateCurve aggregate(std::span<const RegretTrace> traces,
                         std::span<const std::uint64_t> checkpoints);

/// stride, 2 stride, ..., always ending with n.
std::vector<std::uint64_t> make_checkpoints(std::uint64_t n, std::uint64_t stride);

/// Largest depth near_opt_count will enumerate.
inline constexpr std::uint32_t kMaxDiagnosticDepth = 20;

/// Estimated supremum of the objective over one cell. Uses the objective's
/// exact hook when present; otherwise samples 512 points along every axis
/// through the centre, polishes each sampled local maximum by golden-section
/// search, and adds the corners and the centre.
double cell_supremum(const ObjectiveSpec& objective, const Cell& cell);

/// Number of depth-h cells whose supremum is at least f* - epsilon.
/// Throws std::domain_error when h exceeds kMaxDiagnosticDepth.
std::uint64_t near_opt_count(const ObjectiveSpec& objective, std::uint32_t h, double epsilon);

struct DimRow {
  std::uint32_t h = 0;
  double xi = 0.0;
  std::uint64_t count = 0;
  double bound = 0.0;
};

struct DimEstimate {
  double d = 0.0;
  double c = 0.0;
  std::vector<DimRow> rows;
};

/// Near-optimality dimension fit over [h_min, h_max] with xi(h) = phi(h) / scale:
/// d is the least-squares slope of log N_h against log(1 / xi(h)), clamped at
/// zero, and C is the smallest constant with N_h <= C xi(h)^(-d) on every row.
DimEstimate estimate_dim(const ObjectiveSpec& objective, const SmoothnessFn& smoothness,
                         double alpha, std::uint32_t h_min, std::uint32_t h_max);

/// Writes `h,xi_h,N_h,bound` rows.
void write_dim_csv(std::ostream& out, const DimEstimate& estimate);

}  // namespace osc
