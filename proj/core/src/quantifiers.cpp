#include "osc/quantifiers.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace osc {

SmoothnessFn SmoothnessFn::exponential(double nu1, double rho) {
  if (!(nu1 > 0.0)) throw std::invalid_argument("nu1 must be positive");
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("rho must lie in (0, 1)");
  return SmoothnessFn(Kind::exponential, nu1, rho);
}

SmoothnessFn SmoothnessFn::polynomial(double c_num, double p) {
  if (!(c_num > 0.0)) throw std::invalid_argument("c_num must be positive");
  if (!(p > 0.0)) throw std::invalid_argument("p must be positive");
  return SmoothnessFn(Kind::polynomial, c_num, p);
}

double SmoothnessFn::operator()(std::uint32_t h) const noexcept {
  if (kind_ == Kind::exponential) return a_ * std::pow(b_, static_cast<double>(h));
  if (h == 0) return a_;
  return a_ / std::pow(static_cast<double>(h), b_);
}

void ConfidenceSchedule::validate() const {
  if (!(c > 0.0)) throw std::invalid_argument("c must be positive");
  if (!(c1 > 0.0)) throw std::invalid_argument("c1 must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (!(b > 0.0)) throw std::invalid_argument("b must be positive");
}

std::uint64_t t_plus(std::uint64_t t) {
  if (t == 0) throw std::domain_error("t_plus requires t >= 1");
  if (t >= (std::uint64_t{1} << 63)) throw std::overflow_error("t_plus overflows 64 bits");
  return std::uint64_t{1} << std::bit_width(t);
}

bool is_power_of_two(std::uint64_t t) noexcept { return std::has_single_bit(t); }

double log_confidence(const ConfidenceSchedule& sched, std::uint64_t t) {
  const double ratio = static_cast<double>(t_plus(t)) / (sched.c1 * sched.delta);
  return ratio > 1.0 ? std::log(ratio) : 0.0;
}

double variance_floor(const ConfidenceSchedule& sched) noexcept {
  return 1e-4 * sched.b * sched.b;
}

double se_hct(const ConfidenceSchedule& sched, double pulls, double log_conf) noexcept {
  if (pulls <= 0.0) return std::numeric_limits<double>::infinity();
  return sched.b * sched.c * std::sqrt(log_conf / pulls);
}

double se_vhct(const ConfidenceSchedule& sched, double variance, double pulls,
               double log_conf) noexcept {
  if (pulls <= 0.0) return std::numeric_limits<double>::infinity();
  const double c = sched.c;
  return c * std::sqrt(2.0 * variance * log_conf / pulls) + 3.0 * sched.b * c * c * log_conf / pulls;
}

double tau_closed_form(double phi, const ConfidenceSchedule& sched, double variance,
                       double log_conf) {
  if (!(phi > 0.0)) throw std::domain_error("tau requires a positive resolution phi(h)");
  if (!(variance > 0.0)) throw std::domain_error("tau requires a positive (floored) variance");
  const double root = 1.0 + std::sqrt(1.0 + 3.0 * sched.b * phi / (variance / 2.0));
  return root * root * (sched.c * sched.c / (2.0 * phi * phi)) * variance * log_conf;
}

double tau_hct(const SmoothnessFn& phi, const ConfidenceSchedule& sched, std::uint32_t h,
               double log_conf) {
  if (phi.kind() != SmoothnessFn::Kind::exponential) {
    throw std::domain_error("tau_hct is defined for exponential smoothness only");
  }
  const double bc = sched.b * sched.c;
  return bc * bc * log_conf * std::pow(phi.rho(), -2.0 * static_cast<double>(h)) /
         (phi.nu1() * phi.nu1());
}

std::uint64_t tau_bruteforce(const std::function<double(std::uint64_t)>& se, double phi) {
  if (se(1) <= phi) return 1;
  std::uint64_t hi = 2;
  while (se(hi) > phi) {
    if (hi >= (std::uint64_t{1} << 62)) throw std::overflow_error("tau search did not converge");
    hi *= 2;
  }
  // Invariant: se(lo) > phi >= se(hi).
  std::uint64_t lo = hi / 2;
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (se(mid) <= phi) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace osc
