#include "osc/trace.hpp"

#include <stdexcept>

namespace osc {

RegretTrace run_trace(Optimizer& optimizer, const ObjectiveSpec& objective,
                      const NoiseModel& noise, std::uint64_t n, Rng& rng, double f_star) {
  if (n == 0) throw std::invalid_argument("budget n must be at least 1");
  RegretTrace trace;
  trace.meta.objective = objective.name;
  trace.meta.noise_half_width = noise.half_width;
  trace.f_star = f_star;
  trace.records.reserve(n);
  double regret = 0.0;
  double pseudo = 0.0;
  for (std::uint64_t t = 1; t <= n; ++t) {
    Pull pull = optimizer.step(objective, noise, rng);
    regret += f_star - pull.reward;
    pseudo += f_star - pull.f_value;
    trace.records.push_back(
        {t, pull.node, std::move(pull.x), pull.reward, pull.f_value, regret, pseudo});
  }
  return trace;
}

}  // namespace osc
