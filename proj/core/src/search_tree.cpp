#include "osc/search_tree.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace osc {

SearchTree::SearchTree(Algorithm algorithm, Domain domain, SmoothnessFn smoothness,
                       ConfidenceSchedule schedule)
    : algorithm_(algorithm),
      domain_(std::move(domain)),
      smoothness_(smoothness),
      schedule_(schedule) {
  schedule_.validate();
  log_conf_ = log_confidence(schedule_, t_);

  // The root is never pulled: forced count = tau = 1 keeps it passable.
  Node root;
  root.stats.id = kRootId;
  root.stats.count = 1;
  root.stats.tau = 1.0;
  root.stats.is_leaf = false;
  nodes_.push_back(root);
  const auto [left, right] = children(kRootId);
  nodes_[0].left = add_leaf(left, 0);
  nodes_[0].right = add_leaf(right, 0);
}

std::int32_t SearchTree::add_leaf(NodeId id, std::int32_t parent) {
  Node node;
  node.stats.id = id;
  node.parent = parent;
  node.stats.tau = compute_tau(node.stats);
  nodes_.push_back(node);
  max_depth_ = std::max(max_depth_, id.h);
  return static_cast<std::int32_t>(nodes_.size() - 1);
}

double SearchTree::guard_se(const NodeStats& stats) const {
  const auto pulls = static_cast<double>(stats.count);
  if (algorithm_ == Algorithm::hct) return se_hct(schedule_, pulls, log_conf_);
  const double v = std::max(stats.variance().value_or(0.0), variance_floor(schedule_));
  return se_vhct(schedule_, v, pulls, log_conf_);
}

double SearchTree::compute_u(const NodeStats& stats) const {
  if (stats.id == kRootId || stats.count == 0) return kInf;
  const auto pulls = static_cast<double>(stats.count);
  const double se = algorithm_ == Algorithm::hct
                        ? se_hct(schedule_, pulls, log_conf_)
                        : se_vhct(schedule_, *stats.variance(), pulls, log_conf_);
  return stats.mean + smoothness_(stats.id.h) + se;
}

double SearchTree::compute_tau(const NodeStats& stats) const {
  if (stats.id == kRootId) return 1.0;
  const double phi = smoothness_(stats.id.h);
  if (algorithm_ == Algorithm::hct) {
    const double bc = schedule_.b * schedule_.c;
    return bc * bc * log_conf_ / (phi * phi);
  }
  const double v = std::max(stats.variance().value_or(0.0), variance_floor(schedule_));
  return tau_closed_form(phi, schedule_, v, log_conf_);
}

void SearchTree::update_node(Node& node) {
  if (node.left < 0) {
    node.stats.b = node.stats.u;
  } else {
    node.stats.b = backed_up_b(node.stats.u, nodes_[node.left].stats.b, nodes_[node.right].stats.b);
  }
  node.stats.tau = compute_tau(node.stats);
}

void SearchTree::update_backward_indices(std::span<const std::int32_t> scope) {
  for (const std::int32_t idx : scope) update_node(nodes_[idx]);
}

void SearchTree::update_backward(std::span<const NodeId> scope) {
  std::vector<std::int32_t> indices;
  indices.reserve(scope.size());
  for (const NodeId id : scope) {
    const std::int32_t idx = index_of(id);
    if (idx < 0) {
      throw std::logic_error("update_backward scope references a node not in the tree: (" +
                             std::to_string(id.h) + ", " + std::to_string(id.i) + ")");
    }
    indices.push_back(idx);
  }
  update_backward_indices(indices);
}

std::int32_t SearchTree::index_of(NodeId id) const {
  if (!is_valid(id)) return -1;
  std::int32_t idx = 0;
  const std::uint64_t offset = id.i - 1;
  for (std::uint32_t level = 0; level < id.h; ++level) {
    const Node& node = nodes_[idx];
    if (node.left < 0) return -1;
    idx = ((offset >> (id.h - 1 - level)) & 1u) ? node.right : node.left;
  }
  return idx;
}

const NodeStats* SearchTree::find(NodeId id) const {
  const std::int32_t idx = index_of(id);
  return idx < 0 ? nullptr : &nodes_[idx].stats;
}

std::vector<NodeStats> SearchTree::nodes() const {
  std::vector<NodeStats> out;
  out.reserve(nodes_.size());
  for (const Node& node : nodes_) out.push_back(node.stats);
  return out;
}

void SearchTree::refresh_epoch() {
  log_conf_ = log_confidence(schedule_, t_);
  for (Node& node : nodes_) node.stats.u = compute_u(node.stats);
  // Children are always appended after their parent.
  for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) update_node(*it);
  ++refreshes_;
}

Pull SearchTree::pull_update(const ObjectiveSpec& objective, const NoiseModel& noise, Rng& rng) {
  path_.clear();
  std::int32_t cur = 0;
  path_.push_back(cur);
  for (;;) {
    const Node& node = nodes_[cur];
    if (node.left < 0 || static_cast<double>(node.stats.count) < node.stats.tau) break;
    cur = nodes_[node.right].stats.b > nodes_[node.left].stats.b ? node.right : node.left;
    path_.push_back(cur);
  }

  Node& node = nodes_[cur];
  const Cell cell = cell_of(domain_, node.stats.id);
  Pull pull{node.stats.id, representative(cell), 0.0, 0.0};
  pull.f_value = evaluate(objective, pull.x);
  pull.reward = noise.half_width == 0.0 ? pull.f_value : pull.f_value + noise_sample(noise, rng);

  NodeStats& s = node.stats;
  ++s.count;
  const double delta = pull.reward - s.mean;
  s.mean += delta / static_cast<double>(s.count);
  s.m2 += delta * (pull.reward - s.mean);
  s.u = compute_u(s);

  std::reverse(path_.begin(), path_.end());
  update_backward_indices(path_);
  return pull;
}

bool SearchTree::maybe_expand(NodeId id) {
  const std::int32_t idx = index_of(id);
  if (idx < 0) throw std::logic_error("maybe_expand on a node not in the tree");
  const NodeStats& s = nodes_[idx].stats;
  if (nodes_[idx].left >= 0 || static_cast<double>(s.count) < s.tau) return false;
  if (id.h >= kMaxDepth) {
    depth_cap_hit_ = true;
    return false;
  }
  expansions_.push_back({t_, id, s.count, s.tau});
  const auto [left, right] = children(id);
  const std::int32_t l = add_leaf(left, idx);
  const std::int32_t r = add_leaf(right, idx);
  nodes_[idx].left = l;
  nodes_[idx].right = r;
  nodes_[idx].stats.is_leaf = false;
  // With both children at B = +inf, min(U, max(B_l, B_r)) = U: B is unchanged.
  return true;
}

Pull SearchTree::step(const ObjectiveSpec& objective, const NoiseModel& noise, Rng& rng) {
  if (t_ > 1 && is_power_of_two(t_)) refresh_epoch();
  Pull pull = pull_update(objective, noise, rng);
  maybe_expand(pull.node);
  ++t_;
  return pull;
}

RegretTrace run(Algorithm algorithm, const SmoothnessFn& smoothness,
                const ConfidenceSchedule& schedule, const ObjectiveSpec& objective,
                const NoiseModel& noise, std::uint64_t n, std::uint64_t seed) {
  SearchTree tree(algorithm, objective.domain, smoothness, schedule);
  Rng rng(seed, Stream::noise);
  RegretTrace trace = run_trace(tree, objective, noise, n, rng, f_star_oracle(objective));
  trace.meta.algorithm = algorithm == Algorithm::vhct ? "vhct" : "hct";
  trace.meta.seed = seed;
  return trace;
}

}  // namespace osc
