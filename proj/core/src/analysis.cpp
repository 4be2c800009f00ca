#include "osc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "osc/csv.hpp"

namespace osc {

AggregateCurve aggregate(std::span<const RegretTrace> traces,
                         std::span<const std::uint64_t> checkpoints) {
  if (traces.empty()) throw std::invalid_argument("aggregate needs at least one trace");
  for (const RegretTrace& trace : traces) {
    if (trace.meta.config_hash != traces.front().meta.config_hash) {
      throw std::invalid_argument("aggregate: traces come from different configs (" +
                                  trace.meta.config_hash + " vs " +
                                  traces.front().meta.config_hash + ")");
    }
  }
  AggregateCurve curve;
  curve.points.reserve(checkpoints.size());
  const auto trials = static_cast<double>(traces.size());
  for (const std::uint64_t t : checkpoints) {
    for (const RegretTrace& trace : traces) {
      if (t == 0 || t > trace.records.size()) {
        throw std::invalid_argument("checkpoint " + std::to_string(t) +
                                    " is not a recorded round");
      }
    }
    // Deviations from the first trace, so identical traces give exactly zero spread.
    const double base = traces.front().records[t - 1].cum_regret;
    double shift = 0.0;
    for (const RegretTrace& trace : traces) shift += trace.records[t - 1].cum_regret - base;
    shift /= trials;
    double sq = 0.0;
    for (const RegretTrace& trace : traces) {
      const double d = trace.records[t - 1].cum_regret - base - shift;
      sq += d * d;
    }
    const double mean = base + shift;
    const double sd = traces.size() > 1 ? std::sqrt(sq / (trials - 1.0))
                                        : std::numeric_limits<double>::quiet_NaN();
    curve.points.push_back({t, mean, sd, mean / static_cast<double>(t)});
  }
  return curve;
}

std::vector<std::uint64_t> make_checkpoints(std::uint64_t n, std::uint64_t stride) {
  if (n == 0 || stride == 0) throw std::invalid_argument("checkpoints need n, stride >= 1");
  std::vector<std::uint64_t> out;
  for (std::uint64_t t = stride; t < n; t += stride) out.push_back(t);
  out.push_back(n);
  return out;
}

namespace {

// Golden-section maximisation of f along axis k of x over [lo, hi].
double refine_axis(const ObjectiveSpec& objective, std::vector<double> x, std::size_t k, double lo,
                   double hi) {
  constexpr double kInvPhi = 0.6180339887498949;
  auto f = [&](double v) {
    x[k] = v;
    return evaluate(objective, x);
  };
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a), d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 60 && b - a > 1e-15 * (1.0 + std::fabs(a)); ++it) {
    if (fc >= fd) {
      b = d, d = c, fd = fc;
      c = b - kInvPhi * (b - a), fc = f(c);
    } else {
      a = c, c = d, fc = fd;
      d = a + kInvPhi * (b - a), fd = f(d);
    }
  }
  return std::max(fc, fd);
}

}  // namespace

double cell_supremum(const ObjectiveSpec& objective, const Cell& cell) {
  if (objective.exact_cell_sup) return objective.exact_cell_sup(cell);
  constexpr int kSamplesPerAxis = 512;
  const std::size_t dim = cell.lower.size();
  const std::vector<double> centre = representative(cell);
  double best = evaluate(objective, centre);
  std::vector<double> x = centre;
  std::vector<double> line(kSamplesPerAxis);
  for (std::size_t k = 0; k < dim; ++k) {
    x = centre;
    const double step = (cell.upper[k] - cell.lower[k]) / (kSamplesPerAxis - 1);
    for (int s = 0; s < kSamplesPerAxis; ++s) {
      x[k] = cell.lower[k] + step * s;
      line[s] = evaluate(objective, x);
      best = std::max(best, line[s]);
    }
    // Sharp peaks fall between samples; polish every sampled local maximum.
    for (int s = 0; s < kSamplesPerAxis; ++s) {
      const bool left_ok = s == 0 || line[s] >= line[s - 1];
      const bool right_ok = s + 1 == kSamplesPerAxis || line[s] >= line[s + 1];
      const bool flat = (s == 0 || line[s] == line[s - 1]) &&
                        (s + 1 == kSamplesPerAxis || line[s] == line[s + 1]);
      if (!left_ok || !right_ok || flat) continue;
      const double lo = cell.lower[k] + step * std::max(s - 1, 0);
      const double hi = std::min(cell.upper[k], cell.lower[k] + step * (s + 1));
      best = std::max(best, refine_axis(objective, centre, k, lo, hi));
    }
  }
  if (dim < 20) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << dim); ++mask) {
      for (std::size_t k = 0; k < dim; ++k) x[k] = (mask >> k) & 1u ? cell.upper[k] : cell.lower[k];
      best = std::max(best, evaluate(objective, x));
    }
  }
  return best;
}

std::uint64_t near_opt_count(const ObjectiveSpec& objective, std::uint32_t h, double epsilon) {
  if (h > kMaxDiagnosticDepth) {
    throw std::domain_error("near_opt_count: depth " + std::to_string(h) +
                            " exceeds the brute-force limit of " +
                            std::to_string(kMaxDiagnosticDepth));
  }
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const double threshold = f_star_oracle(objective) - epsilon;
  std::uint64_t count = 0;
  const std::uint64_t width = std::uint64_t{1} << h;
  for (std::uint64_t i = 1; i <= width; ++i) {
    if (cell_supremum(objective, cell_of(objective.domain, {h, i})) >= threshold) ++count;
  }
  return count;
}

DimEstimate estimate_dim(const ObjectiveSpec& objective, const SmoothnessFn& smoothness,
                         double alpha, std::uint32_t h_min, std::uint32_t h_max) {
  if (h_min > h_max) throw std::invalid_argument("estimate_dim: empty depth range");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  DimEstimate est;
  for (std::uint32_t h = h_min; h <= h_max; ++h) {
    const double xi = smoothness(h) / smoothness.scale();
    est.rows.push_back({h, xi, near_opt_count(objective, h, alpha * xi), 0.0});
  }

  if (est.rows.size() > 1) {
    double sx = 0.0, sy = 0.0;
    for (const DimRow& r : est.rows) {
      sx += -std::log(r.xi);
      sy += std::log(static_cast<double>(std::max<std::uint64_t>(r.count, 1)));
    }
    const auto m = static_cast<double>(est.rows.size());
    const double mx = sx / m;
    const double my = sy / m;
    double sxy = 0.0, sxx = 0.0;
    for (const DimRow& r : est.rows) {
      const double dx = -std::log(r.xi) - mx;
      sxy += dx * (std::log(static_cast<double>(std::max<std::uint64_t>(r.count, 1))) - my);
      sxx += dx * dx;
    }
    est.d = sxx > 0.0 ? std::max(0.0, sxy / sxx) : 0.0;
  }

  for (const DimRow& r : est.rows) {
    est.c = std::max(est.c, static_cast<double>(r.count) * std::pow(r.xi, est.d));
  }
  // Round C up until every row satisfies the bound in floating point.
  for (bool ok = false; !ok;) {
    ok = true;
    for (DimRow& r : est.rows) {
      r.bound = est.c * std::pow(r.xi, -est.d);
      if (r.bound < static_cast<double>(r.count)) {
        est.c = std::nextafter(est.c, std::numeric_limits<double>::infinity());
        ok = false;
        break;
      }
    }
  }
  return est;
}

void write_dim_csv(std::ostream& out, const DimEstimate& estimate) {
  out << "h,xi_h,N_h,bound\n";
  for (const DimRow& r : estimate.rows) {
    out << r.h << ',' << format_double(r.xi) << ',' << r.count << ','
        << format_double(r.bound) << '\n';
  }
}

}  // namespace osc
