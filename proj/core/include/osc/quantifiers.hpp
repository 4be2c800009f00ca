#pragma once

#include <cstdint>
#include <functional>

namespace osc {

/// Resolution descriptor phi(h): how far f may fall below f* inside the
/// optimal cell at depth h.
class SmoothnessFn {
 public:
  enum class Kind { exponential, polynomial };

  /// phi(h) = nu1 * rho^h, nu1 > 0, rho in (0, 1).
  static SmoothnessFn exponential(double nu1, double rho);
  /// phi(h) = c_num / h^p for h >= 1, phi(0) = c_num.
  static SmoothnessFn polynomial(double c_num, double p);

  double operator()(std::uint32_t h) const noexcept;

  Kind kind() const noexcept { return kind_; }
  double nu1() const noexcept { return a_; }
  double rho() const noexcept { return b_; }
  double c_num() const noexcept { return a_; }
  double power() const noexcept { return b_; }

  /// Leading constant (nu1 or c_num); phi(h) / scale() is the shape xi(h).
  double scale() const noexcept { return a_; }

 private:
  SmoothnessFn(Kind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}

  Kind kind_;
  double a_;
  double b_;
};

/// Anytime confidence schedule: delta~(t) = min{1, c1 delta / t}, evaluated at
/// the doubling epoch t+ so the confidence level only moves at powers of two.
struct ConfidenceSchedule {
  double c = 3.0;
  double c1 = 1.0 / 3.0;
  double delta = 0.05;
  double b = 1.0;

  /// Throws std::invalid_argument on out-of-range constants.
  void validate() const;
};

/// 2^(floor(log2 t) + 1): the smallest power of two strictly above t.
std::uint64_t t_plus(std::uint64_t t);

bool is_power_of_two(std::uint64_t t) noexcept;

/// log(max{1, t+ / (c1 delta)}), natural log.
double log_confidence(const ConfidenceSchedule& sched, std::uint64_t t);

/// Variance floor used when solving for the VHCT threshold.
double variance_floor(const ConfidenceSchedule& sched) noexcept;

/// Non-adaptive quantifier b c sqrt(L / T); +inf for T = 0. `pulls` is a real
/// so the threshold solvers can evaluate it between integers.
double se_hct(const ConfidenceSchedule& sched, double pulls, double log_conf) noexcept;

/// Variance-adaptive quantifier c sqrt(2 V L / T) + 3 b c^2 L / T; +inf for T = 0.
double se_vhct(const ConfidenceSchedule& sched, double variance, double pulls,
               double log_conf) noexcept;

/// Positive root in T of se_vhct(T) = phi. Throws std::domain_error for
/// phi <= 0 or variance <= 0 (callers apply variance_floor first).
double tau_closed_form(double phi, const ConfidenceSchedule& sched, double variance,
                       double log_conf);

/// Fixed point of se_hct(T) = phi(h) for exponential phi:
/// b^2 c^2 L rho^(-2h) / nu1^2. Throws std::domain_error for polynomial phi.
double tau_hct(const SmoothnessFn& phi, const ConfidenceSchedule& sched, std::uint32_t h,
               double log_conf);

/// Smallest integer T >= 1 with se(T) <= phi, by doubling then bisection.
/// `se` must be non-increasing in T and tend to zero.
std::uint64_t tau_bruteforce(const std::function<double(std::uint64_t)>& se, double phi);

}  // namespace osc
