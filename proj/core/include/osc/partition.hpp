#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace osc {

/// Deepest level a tree may reach. Indices at depth h range over [1, 2^h],
/// so 63 keeps every index inside a 64-bit unsigned integer.
inline constexpr std::uint32_t kMaxDepth = 63;

/// Address of a partition cell: depth h and 1-based index i, 1 <= i <= 2^h.
struct NodeId {
  std::uint32_t h = 0;
  std::uint64_t i = 1;

  friend constexpr auto operator<=>(const NodeId&, const NodeId&) = default;
};

inline constexpr NodeId kRootId{0, 1};

constexpr bool is_valid(NodeId id) noexcept {
  return id.h <= kMaxDepth && id.i >= 1 && id.i <= (std::uint64_t{1} << id.h);
}

constexpr std::pair<NodeId, NodeId> children(NodeId id) noexcept {
  return {NodeId{id.h + 1, 2 * id.i - 1}, NodeId{id.h + 1, 2 * id.i}};
}

constexpr NodeId parent(NodeId id) noexcept { return NodeId{id.h - 1, (id.i + 1) / 2}; }

/// Axis-aligned box [lower, upper] with lower[k] < upper[k].
class Domain {
 public:
  Domain(std::vector<double> lower, std::vector<double> upper);

  static Domain unit_interval() { return Domain({0.0}, {1.0}); }

  std::size_t dim() const noexcept { return lower_.size(); }
  std::span<const double> lower() const noexcept { return lower_; }
  std::span<const double> upper() const noexcept { return upper_; }

  /// Closed-box membership.
  bool contains(std::span<const double> x) const noexcept;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

struct Cell {
  NodeId id;
  std::vector<double> lower;
  std::vector<double> upper;

  /// Closed-bounds membership, ignoring the half-open tie convention.
  bool contains_closed(std::span<const double> x) const noexcept;
};

/// Dimension bisected when splitting a cell with the given bounds: the longest
/// side, ties going to the lowest dimension index.
std::size_t split_dimension(std::span<const double> lower, std::span<const double> upper) noexcept;

/// Bounds of cell `id`, obtained by replaying the bisections from the root.
/// Throws std::domain_error when the index is out of range for the depth.
Cell cell_of(const Domain& domain, NodeId id);

/// Centroid of the cell.
std::vector<double> representative(const Cell& cell);

/// Membership under the half-open convention: [lo, hi) per dimension, except
/// that a side touching the domain's upper bound is closed. Exactly one cell
/// per depth contains any point of the domain.
bool owns_point(const Domain& domain, const Cell& cell, std::span<const double> x) noexcept;

/// The unique depth-h cell owning x. Throws std::domain_error if x is outside
/// the domain.
NodeId locate(const Domain& domain, std::span<const double> x, std::uint32_t h);

}  // namespace osc

template <>
struct std::hash<osc::NodeId> {
  std::size_t operator()(const osc::NodeId& id) const noexcept {
    return std::hash<std::uint64_t>{}(id.i * 0x9E3779B97F4A7C15ull ^ id.h);
  }
};
