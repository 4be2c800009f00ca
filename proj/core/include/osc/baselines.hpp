#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "osc/objectives.hpp"
#include "osc/quantifiers.hpp"
#include "osc/search_tree.hpp"
#include "osc/trace.hpp"

namespace osc {

/// HOO with an anytime depth cap D(t) = ceil(log2(t) / 2) + 1.
///
/// Every round descends by larger B (left on ties) until a leaf or the cap,
/// pulls that node, expands it when it is a leaf above the cap, and folds the
/// reward into every node on the path. Node statistics therefore summarise the
/// whole subtree, and U = mean + b c sqrt(L / T) + nu1 rho^h.
class TruncatedHoo final : public Optimizer {
 public:
  TruncatedHoo(Domain domain, SmoothnessFn smoothness, ConfidenceSchedule schedule,
               bool truncate = true);

  Pull step(const ObjectiveSpec& objective, const NoiseModel& noise, Rng& rng) override;

  /// Depth cap in force at round t (unbounded when truncation is disabled).
  std::uint32_t depth_cap(std::uint64_t t) const;

  /// Whether the most recently pulled node was a leaf when it was chosen.
  bool last_pull_was_leaf() const noexcept { return last_pull_was_leaf_; }

  std::uint64_t round() const noexcept { return t_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  std::vector<NodeStats> nodes() const;

 private:
  struct Node {
    NodeStats stats;
    std::int32_t left = -1;
    std::int32_t right = -1;
  };

  double compute_u(const NodeStats& stats) const;
  void update_node(Node& node);
  void refresh();
  std::int32_t add_leaf(NodeId id);

  Domain domain_;
  SmoothnessFn smoothness_;
  ConfidenceSchedule schedule_;
  bool truncate_;
  std::vector<Node> nodes_;
  std::vector<std::int32_t> path_;
  std::uint64_t t_ = 1;
  double log_conf_ = 0.0;
  bool last_pull_was_leaf_ = true;
};

RegretTrace thoo_run(const SmoothnessFn& smoothness, const ConfidenceSchedule& schedule,
                     const ObjectiveSpec& objective, const NoiseModel& noise, std::uint64_t n,
                     std::uint64_t seed);

enum class BaseKind { hct, vhct, thoo };

struct MetaConfig {
  double rho_max = 0.9;
  std::uint32_t num_instances = 4;
  BaseKind base = BaseKind::hct;
  double nu1 = 1.0;

  void validate() const;
};

/// Smoothness grid rho_max^(m / (j + 1)), j = 0..m-1: strictly increasing,
/// ending at rho_max.
std::vector<double> rho_grid(const MetaConfig& meta);

/// POO-style meta-tuner: one base instance per grid value, rounds shared
/// round-robin, so instance budgets differ by at most one.
class ParallelOptimistic final : public Optimizer {
 public:
  ParallelOptimistic(const MetaConfig& meta, const Domain& domain,
                     const ConfidenceSchedule& schedule);

  Pull step(const ObjectiveSpec& objective, const NoiseModel& noise, Rng& rng) override;

  std::size_t instance_count() const noexcept { return instances_.size(); }
  const std::vector<std::uint64_t>& instance_pulls() const noexcept { return pulls_; }
  const std::vector<double>& rhos() const noexcept { return rhos_; }

 private:
  std::vector<std::unique_ptr<Optimizer>> instances_;
  std::vector<std::uint64_t> pulls_;
  std::vector<double> rhos_;
  std::uint64_t t_ = 1;
};

RegretTrace poo_run(const MetaConfig& meta, const ConfidenceSchedule& schedule,
                    const ObjectiveSpec& objective, const NoiseModel& noise, std::uint64_t n,
                    std::uint64_t seed);

}  // namespace osc
