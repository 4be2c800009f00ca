#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "osc/partition.hpp"
#include "osc/rng.hpp"

namespace osc {

using RawFunction = std::function<double(std::span<const double>)>;
using CellSupremum = std::function<double(const Cell&)>;

/// A deterministic benchmark function on a box. `evaluate` returns
/// raw(x) / rescale_factor so that every registered objective stays in [-1, 1].
struct ObjectiveSpec {
  std::string name;
  Domain domain;
  RawFunction raw;
  double rescale_factor = 1.0;
  /// Known supremum of the rescaled function, if available in closed form.
  std::optional<double> known_f_star;
  /// Exact supremum of the rescaled function over a cell, for the piecewise
  /// linear fixtures used by the near-optimality diagnostic.
  CellSupremum exact_cell_sup;
};

/// Rescaled value at x. Throws std::domain_error when x is outside the domain.
double evaluate(const ObjectiveSpec& spec, std::span<const double> x);

/// Supremum of the rescaled objective: the closed form when known, otherwise a
/// dense-grid estimate refined locally. Estimates are cached by name.
double f_star_oracle(const ObjectiveSpec& spec);

/// Bounded zero-mean noise: Uniform(-half_width, half_width), with
/// half_width <= b / 2.
struct NoiseModel {
  double half_width = 0.0;
  double b = 1.0;

  /// Throws std::invalid_argument if the bounds are inconsistent.
  void validate() const;
};

/// evaluate(x) + epsilon, epsilon drawn from `rng`. No draw is made when the
/// noise half-width is zero.
double sample_reward(const ObjectiveSpec& spec, const NoiseModel& noise,
                     std::span<const double> x, Rng& rng);

double noise_sample(const NoiseModel& noise, Rng& rng);

// Benchmark suite.
ObjectiveSpec make_garland();
ObjectiveSpec make_doublesine();
ObjectiveSpec make_ackley2d();
ObjectiveSpec make_himmelblau();
ObjectiveSpec make_rastrigin(std::size_t dim);
ObjectiveSpec make_counterexample();

// Fixtures with exactly known structure.
/// f(x) = 1 - |2x - 1| on [0, 1].
ObjectiveSpec make_tent();
/// f(x) = 0 on [0, 1]^dim.
ObjectiveSpec make_constant(std::size_t dim = 1);

/// Registered names, in listing order.
const std::vector<std::string>& objective_names();

/// Throws std::out_of_range for unknown names.
ObjectiveSpec make_objective(const std::string& name);

}  // namespace osc
