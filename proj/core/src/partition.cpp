#include "osc/partition.hpp"

#include <stdexcept>
#include <string>

namespace osc {

Domain::Domain(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.empty() || lower_.size() != upper_.size()) {
    throw std::invalid_argument("domain bounds must be non-empty and of equal length");
  }
  for (std::size_t k = 0; k < lower_.size(); ++k) {
    if (!(lower_[k] < upper_[k])) {
      throw std::invalid_argument("domain lower bound must be below upper bound in dimension " +
                                  std::to_string(k));
    }
  }
}

bool Domain::contains(std::span<const double> x) const noexcept {
  if (x.size() != dim()) return false;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] >= lower_[k] && x[k] <= upper_[k])) return false;
  }
  return true;
}

bool Cell::contains_closed(std::span<const double> x) const noexcept {
  if (x.size() != lower.size()) return false;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] >= lower[k] && x[k] <= upper[k])) return false;
  }
  return true;
}

std::size_t split_dimension(std::span<const double> lower, std::span<const double> upper) noexcept {
  std::size_t best = 0;
  double best_side = upper[0] - lower[0];
  for (std::size_t k = 1; k < lower.size(); ++k) {
    const double side = upper[k] - lower[k];
    if (side > best_side) {
      best = k;
      best_side = side;
    }
  }
  return best;
}

Cell cell_of(const Domain& domain, NodeId id) {
  if (!is_valid(id)) {
    throw std::domain_error("invalid node id (" + std::to_string(id.h) + ", " +
                            std::to_string(id.i) + ")");
  }
  Cell cell{id, {domain.lower().begin(), domain.lower().end()},
            {domain.upper().begin(), domain.upper().end()}};
  // Bit (h-1-level) of i-1 selects the upper half at each level.
  const std::uint64_t offset = id.i - 1;
  for (std::uint32_t level = 0; level < id.h; ++level) {
    const std::size_t k = split_dimension(cell.lower, cell.upper);
    const double mid = cell.lower[k] + 0.5 * (cell.upper[k] - cell.lower[k]);
    const bool upper_half = (offset >> (id.h - 1 - level)) & 1u;
    if (upper_half) {
      cell.lower[k] = mid;
    } else {
      cell.upper[k] = mid;
    }
  }
  return cell;
}

std::vector<double> representative(const Cell& cell) {
  std::vector<double> x(cell.lower.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    x[k] = cell.lower[k] + 0.5 * (cell.upper[k] - cell.lower[k]);
  }
  return x;
}

bool owns_point(const Domain& domain, const Cell& cell, std::span<const double> x) noexcept {
  if (x.size() != cell.lower.size()) return false;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] < cell.lower[k]) return false;
    const bool closed = cell.upper[k] == domain.upper()[k];
    if (closed ? x[k] > cell.upper[k] : x[k] >= cell.upper[k]) return false;
  }
  return true;
}

NodeId locate(const Domain& domain, std::span<const double> x, std::uint32_t h) {
  if (!domain.contains(x)) throw std::domain_error("point outside domain");
  if (h > kMaxDepth) throw std::domain_error("depth exceeds maximum");
  std::vector<double> lo(domain.lower().begin(), domain.lower().end());
  std::vector<double> hi(domain.upper().begin(), domain.upper().end());
  NodeId id = kRootId;
  for (std::uint32_t level = 0; level < h; ++level) {
    const std::size_t k = split_dimension(lo, hi);
    const double mid = lo[k] + 0.5 * (hi[k] - lo[k]);
    const auto [left, right] = children(id);
    if (x[k] < mid) {
      hi[k] = mid;
      id = left;
    } else {
      lo[k] = mid;
      id = right;
    }
  }
  return id;
}

}  // namespace osc
