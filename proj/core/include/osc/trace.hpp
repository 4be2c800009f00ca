#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "osc/objectives.hpp"
#include "osc/partition.hpp"
#include "osc/rng.hpp"

namespace osc {

/// One evaluation made by an optimizer.
struct Pull {
  NodeId node;
  std::vector<double> x;
  double reward = 0.0;
  double f_value = 0.0;
};

/// Anything that makes exactly one pull per call to step().
class Optimizer {
 public:
  virtual ~Optimizer() = default;
  virtual Pull step(const ObjectiveSpec& objective, const NoiseModel& noise, Rng& rng) = 0;
};

struct TraceRecord {
  std::uint64_t t = 0;
  NodeId node;
  std::vector<double> x;
  double reward = 0.0;
  double f_value = 0.0;
  /// sum over s <= t of (f* - r_s)
  double cum_regret = 0.0;
  /// sum over s <= t of (f* - f(x_s))
  double cum_pseudo_regret = 0.0;
};

struct TraceMeta {
  std::string algorithm;
  std::string objective;
  double noise_half_width = 0.0;
  std::uint64_t seed = 0;
  std::string config_hash;
};

struct RegretTrace {
  TraceMeta meta;
  double f_star = 0.0;
  std::vector<TraceRecord> records;
};

/// Drives `optimizer` for n rounds and accumulates regret against f_star.
RegretTrace run_trace(Optimizer& optimizer, const ObjectiveSpec& objective,
                      const NoiseModel& noise, std::uint64_t n, Rng& rng, double f_star);

}  // namespace osc
