#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "osc/objectives.hpp"
#include "osc/partition.hpp"
#include "osc/quantifiers.hpp"
#include "osc/rng.hpp"
#include "osc/trace.hpp"

namespace osc {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Internal-node B value: min(U, max(B_left, B_right)).
constexpr double backed_up_b(double u, double b_left, double b_right) noexcept {
  const double best_child = b_left < b_right ? b_right : b_left;
  return u < best_child ? u : best_child;
}

/// Which uncertainty quantifier the tree uses.
enum class Algorithm { vhct, hct };

struct NodeStats {
  NodeId id;
  std::uint64_t count = 0;
  double mean = 0.0;
  /// Sum of squared deviations from the running mean.
  double m2 = 0.0;
  double u = kInf;
  double b = kInf;
  /// Pull count at which the quantifier drops to phi(h).
  double tau = 1.0;
  bool is_leaf = true;

  /// Biased (1/T) variance estimate; nullopt while unvisited.
  std::optional<double> variance() const noexcept {
    if (count == 0) return std::nullopt;
    return m2 / static_cast<double>(count);
  }
};

struct ExpansionEvent {
  std::uint64_t t;
  NodeId id;
  std::uint64_t count;
  double tau;
};

/// Optimum-statistical collaboration tree: the complete VHCT loop, and HCT when
/// constructed with Algorithm::hct.
///
/// Each round refreshes every U/B value when t is a power of two greater than
/// one (the confidence level changes exactly there), then descends from the
/// root through children of larger B while the current node is internal and
/// has been pulled at least tau times, pulls the stopping node at its centroid,
/// updates B along the traversed path, and expands the pulled node if it is a
/// leaf that has reached its threshold.
class SearchTree final : public Optimizer {
 public:
  SearchTree(Algorithm algorithm, Domain domain, SmoothnessFn smoothness,
             ConfidenceSchedule schedule);

  Pull step(const ObjectiveSpec& objective, const NoiseModel& noise, Rng& rng) override;

  /// Descend, pull, update the path; returns the pulled node and its sample.
  Pull pull_update(const ObjectiveSpec& objective, const NoiseModel& noise, Rng& rng);

  /// Adds both children if `id` is a leaf with count >= tau below the depth
  /// cap. Returns whether the tree grew.
  bool maybe_expand(NodeId id);

  /// B = U for leaves, min(U, max(children B)) otherwise, and tau refreshed,
  /// for each node of `scope` in the given (children-first) order. Throws
  /// std::logic_error for ids not in the tree.
  void update_backward(std::span<const NodeId> scope);

  /// Recompute U for every node at the current round's confidence level, then
  /// B and tau bottom-up over the whole tree.
  void refresh_epoch();

  /// U = mean + phi(h) + SE, +inf when unvisited.
  double compute_u(const NodeStats& stats) const;

  /// Threshold for the node's current statistics (variance floored for VHCT).
  double compute_tau(const NodeStats& stats) const;

  /// Quantifier value used by the traversal guard, with the same variance
  /// floor as compute_tau.
  double guard_se(const NodeStats& stats) const;

  const NodeStats* find(NodeId id) const;
  std::vector<NodeStats> nodes() const;

  std::uint64_t round() const noexcept { return t_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  std::uint32_t depth() const noexcept { return max_depth_; }
  std::uint64_t refresh_count() const noexcept { return refreshes_; }
  double current_log_confidence() const noexcept { return log_conf_; }
  const std::vector<ExpansionEvent>& expansions() const noexcept { return expansions_; }
  /// Whether a leaf at the depth cap was ever eligible for expansion.
  bool depth_cap_hit() const noexcept { return depth_cap_hit_; }

  Algorithm algorithm() const noexcept { return algorithm_; }
  const Domain& domain() const noexcept { return domain_; }
  const SmoothnessFn& smoothness() const noexcept { return smoothness_; }
  const ConfidenceSchedule& schedule() const noexcept { return schedule_; }

 private:
  struct Node {
    NodeStats stats;
    std::int32_t parent = -1;
    std::int32_t left = -1;
    std::int32_t right = -1;
  };

  std::int32_t index_of(NodeId id) const;
  std::int32_t add_leaf(NodeId id, std::int32_t parent);
  void update_node(Node& node);
  void update_backward_indices(std::span<const std::int32_t> scope);

  Algorithm algorithm_;
  Domain domain_;
  SmoothnessFn smoothness_;
  ConfidenceSchedule schedule_;
  std::vector<Node> nodes_;
  std::uint64_t t_ = 1;
  double log_conf_ = 0.0;
  std::uint32_t max_depth_ = 1;
  std::uint64_t refreshes_ = 0;
  bool depth_cap_hit_ = false;
  std::vector<ExpansionEvent> expansions_;
  std::vector<std::int32_t> path_;
};

/// Runs VHCT or HCT for n rounds with a noise stream derived from `seed`.
RegretTrace run(Algorithm algorithm, const SmoothnessFn& smoothness,
                const ConfidenceSchedule& schedule, const ObjectiveSpec& objective,
                const NoiseModel& noise, std::uint64_t n, std::uint64_t seed);

}  // namespace osc
