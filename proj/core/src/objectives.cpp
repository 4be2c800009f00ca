#include "osc/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace osc {
namespace {

using std::numbers::pi;

// max |A cos(2 pi x) - x^2 - A| over [-1, 1] with A = 10, attained at x ~ +-0.50255.
constexpr double kRastriginPerDimScale = 20.251272990990113;
// max |ackley(x, y)| over [-1, 1]^2, attained near (-1, -0.5588).
constexpr double kAckleyScale = 4.675205304060036;
constexpr double kHimmelblauScale = 890.0;

double garland_raw(std::span<const double> x) {
  const double v = x[0];
  return 4.0 * v * (1.0 - v) * (0.75 + 0.25 * (1.0 - std::sqrt(std::fabs(std::sin(60.0 * v)))));
}

double doublesine_raw(std::span<const double> x) {
  constexpr double rho1 = 0.3;
  constexpr double rho2 = 0.8;
  constexpr double t_max = 0.5;
  static const double ep1 = -std::log2(rho1);
  static const double ep2 = -std::log2(rho2);
  const double u = 2.0 * std::fabs(x[0] - t_max);
  if (u == 0.0) return 0.0;
  const double envelope = std::pow(u, ep2) - std::pow(u, ep1);
  const double wave = 0.5 * (std::sin(pi * std::log2(u)) + 1.0);
  return wave * envelope - std::pow(u, ep2);
}

double ackley_raw(std::span<const double> x) {
  const double a = x[0];
  const double b = x[1];
  return 20.0 * std::exp(-0.2 * std::sqrt(0.5 * (a * a + b * b))) +
         std::exp(0.5 * (std::cos(2.0 * pi * a) + std::cos(2.0 * pi * b))) - std::numbers::e - 20.0;
}

double himmelblau_raw(std::span<const double> x) {
  const double a = x[0];
  const double b = x[1];
  const double p = a * a + b - 11.0;
  const double q = a + b * b - 7.0;
  return -(p * p) - q * q;
}

double rastrigin_raw(std::span<const double> x) {
  constexpr double A = 10.0;
  double sum = -A * static_cast<double>(x.size());
  for (double v : x) sum += A * std::cos(2.0 * pi * v) - v * v;
  return sum;
}

double counterexample_raw(std::span<const double> x) {
  if (x[0] == 0.0) return 0.0;
  return 1.0 + 1.0 / std::log(x[0]);
}

double grid_supremum(const ObjectiveSpec& spec) {
  const auto lo = spec.domain.lower();
  const auto hi = spec.domain.upper();
  const std::size_t dim = spec.domain.dim();
  // ~1e6 grid points in total, split evenly across dimensions.
  const auto per_dim = static_cast<std::size_t>(
      std::max(3.0, std::ceil(std::pow(1.0e6, 1.0 / static_cast<double>(dim)))));
  const std::size_t points_1d = dim == 1 ? (std::size_t{1} << 20) + 1 : per_dim;

  std::vector<double> x(dim), best_x(dim);
  std::vector<std::size_t> counter(dim, 0);
  double best = -std::numeric_limits<double>::infinity();
  for (;;) {
    for (std::size_t k = 0; k < dim; ++k) {
      x[k] = lo[k] + (hi[k] - lo[k]) * static_cast<double>(counter[k]) /
                         static_cast<double>(points_1d - 1);
    }
    const double v = evaluate(spec, x);
    if (v > best) {
      best = v;
      best_x = x;
    }
    std::size_t k = 0;
    while (k < dim && ++counter[k] == points_1d) counter[k++] = 0;
    if (k == dim) break;
  }

  // Coordinate-wise golden-section refinement inside one grid spacing.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int sweep = 0; sweep < 4; ++sweep) {
    for (std::size_t k = 0; k < dim; ++k) {
      const double step = (hi[k] - lo[k]) / static_cast<double>(points_1d - 1);
      double a = std::max(lo[k], best_x[k] - step);
      double b = std::min(hi[k], best_x[k] + step);
      auto at = [&](double v) {
        x = best_x;
        x[k] = v;
        return evaluate(spec, x);
      };
      double c = b - inv_phi * (b - a);
      double d = a + inv_phi * (b - a);
      double fc = at(c);
      double fd = at(d);
      for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
        if (fc > fd) {
          b = d;
          d = c;
          fd = fc;
          c = b - inv_phi * (b - a);
          fc = at(c);
        } else {
          a = c;
          c = d;
          fc = fd;
          d = a + inv_phi * (b - a);
          fd = at(d);
        }
      }
      for (double cand : {a, b, c, d}) {
        const double v = at(cand);
        if (v > best) {
          best = v;
          best_x = x;
        }
      }
    }
  }
  return best;
}

}  // namespace

double evaluate(const ObjectiveSpec& spec, std::span<const double> x) {
  if (!spec.domain.contains(x)) {
    throw std::domain_error("point outside the domain of objective '" + spec.name + "'");
  }
  return spec.raw(x) / spec.rescale_factor;
}

double f_star_oracle(const ObjectiveSpec& spec) {
  if (spec.known_f_star) return *spec.known_f_star;
  static std::mutex mutex;
  static std::map<std::string, double> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(spec.name); it != cache.end()) return it->second;
  }
  const double value = grid_supremum(spec);
  std::lock_guard lock(mutex);
  return cache.emplace(spec.name, value).first->second;
}

void NoiseModel::validate() const {
  if (!(half_width >= 0.0)) throw std::invalid_argument("noise half-width must be non-negative");
  if (!(b > 0.0)) throw std::invalid_argument("noise bound b must be positive");
  if (half_width > b / 2.0) {
    throw std::invalid_argument("noise half-width must not exceed b/2");
  }
}

double noise_sample(const NoiseModel& noise, Rng& rng) {
  if (noise.half_width == 0.0) return 0.0;
  return noise.half_width * (2.0 * rng.uniform01() - 1.0);
}

double sample_reward(const ObjectiveSpec& spec, const NoiseModel& noise,
                     std::span<const double> x, Rng& rng) {
  const double value = evaluate(spec, x);
  if (noise.half_width == 0.0) return value;
  return value + noise_sample(noise, rng);
}

ObjectiveSpec make_garland() {
  return {"garland", Domain::unit_interval(), garland_raw, 1.0, std::nullopt, {}};
}

ObjectiveSpec make_doublesine() {
  return {"doublesine", Domain::unit_interval(), doublesine_raw, 1.0, 0.0, {}};
}

ObjectiveSpec make_ackley2d() {
  return {"ackley2d", Domain({-1.0, -1.0}, {1.0, 1.0}), ackley_raw, kAckleyScale, 0.0, {}};
}

ObjectiveSpec make_himmelblau() {
  return {"himmelblau", Domain({-5.0, -5.0}, {5.0, 5.0}), himmelblau_raw, kHimmelblauScale, 0.0,
          {}};
}

ObjectiveSpec make_rastrigin(std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("rastrigin dimension must be positive");
  return {"rastrigin-" + std::to_string(dim) + "d",
          Domain(std::vector<double>(dim, -1.0), std::vector<double>(dim, 1.0)),
          rastrigin_raw,
          kRastriginPerDimScale * static_cast<double>(dim),
          0.0,
          {}};
}

ObjectiveSpec make_counterexample() {
  // Supremum 1 is approached as x -> 0+ but not attained.
  return {"counterexample", Domain({0.0}, {std::exp(-1.0)}), counterexample_raw, 1.0, 1.0, {}};
}

ObjectiveSpec make_tent() {
  auto raw = [](std::span<const double> x) { return 1.0 - std::fabs(2.0 * x[0] - 1.0); };
  auto sup = [](const Cell& cell) {
    const double nearest = std::clamp(0.5, cell.lower[0], cell.upper[0]);
    return 1.0 - std::fabs(2.0 * nearest - 1.0);
  };
  return {"tent", Domain::unit_interval(), raw, 1.0, 1.0, sup};
}

ObjectiveSpec make_constant(std::size_t dim) {
  return {"constant", Domain(std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0)),
          [](std::span<const double>) { return 0.0; }, 1.0, 0.0,
          [](const Cell&) { return 0.0; }};
}

const std::vector<std::string>& objective_names() {
  static const std::vector<std::string> names = {
      "garland",      "doublesine",   "ackley2d",      "himmelblau", "rastrigin-1d",
      "rastrigin-2d", "rastrigin-10d", "counterexample", "tent",      "constant"};
  return names;
}

ObjectiveSpec make_objective(const std::string& name) {
  if (name == "garland") return make_garland();
  if (name == "doublesine") return make_doublesine();
  if (name == "ackley2d") return make_ackley2d();
  if (name == "himmelblau") return make_himmelblau();
  if (name == "rastrigin-1d") return make_rastrigin(1);
  if (name == "rastrigin-2d") return make_rastrigin(2);
  if (name == "rastrigin-10d") return make_rastrigin(10);
  if (name == "counterexample") return make_counterexample();
  if (name == "tent") return make_tent();
  if (name == "constant") return make_constant(1);
  throw std::out_of_range("unknown objective '" + name + "'");
}

}  // namespace osc
