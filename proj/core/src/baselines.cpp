#include "osc/baselines.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace osc {

TruncatedHoo::TruncatedHoo(Domain domain, SmoothnessFn smoothness, ConfidenceSchedule schedule,
                           bool truncate)
    : domain_(std::move(domain)),
      smoothness_(smoothness),
      schedule_(schedule),
      truncate_(truncate) {
  if (smoothness_.kind() != SmoothnessFn::Kind::exponential) {
    throw std::invalid_argument("T-HOO requires exponential smoothness");
  }
  schedule_.validate();
  log_conf_ = log_confidence(schedule_, t_);
  Node root;
  root.stats.id = kRootId;
  root.stats.is_leaf = false;
  nodes_.push_back(root);
  const auto [left, right] = children(kRootId);
  nodes_[0].left = add_leaf(left);
  nodes_[0].right = add_leaf(right);
}

std::int32_t TruncatedHoo::add_leaf(NodeId id) {
  Node node;
  node.stats.id = id;
  nodes_.push_back(node);
  return static_cast<std::int32_t>(nodes_.size() - 1);
}

std::uint32_t TruncatedHoo::depth_cap(std::uint64_t t) const {
  if (!truncate_) return kMaxDepth;
  // ceil(log2(t) / 2) on integers, with w = floor(log2 t). For a power of two
  // log2 t = w; otherwise it lies strictly inside (w, w + 1).
  const auto w = static_cast<std::uint32_t>(std::bit_width(t) - 1);
  const std::uint32_t half = is_power_of_two(t) ? (w + 1) / 2 : w / 2 + 1;
  return std::min<std::uint32_t>(half + 1, kMaxDepth);
}

double TruncatedHoo::compute_u(const NodeStats& stats) const {
  if (stats.id == kRootId || stats.count == 0) return kInf;
  return stats.mean + se_hct(schedule_, static_cast<double>(stats.count), log_conf_) +
         smoothness_(stats.id.h);
}

void TruncatedHoo::update_node(Node& node) {
  node.stats.b = node.left < 0 ? node.stats.u
                               : backed_up_b(node.stats.u, nodes_[node.left].stats.b,
                                             nodes_[node.right].stats.b);
}

void TruncatedHoo::refresh() {
  log_conf_ = log_confidence(schedule_, t_);
  for (Node& node : nodes_) node.stats.u = compute_u(node.stats);
  for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) update_node(*it);
}

Pull TruncatedHoo::step(const ObjectiveSpec& objective, const NoiseModel& noise, Rng& rng) {
  if (t_ > 1 && is_power_of_two(t_)) refresh();
  const std::uint32_t cap = depth_cap(t_);

  path_.clear();
  std::int32_t cur = 0;
  path_.push_back(cur);
  while (nodes_[cur].left >= 0 && nodes_[cur].stats.id.h < cap) {
    const Node& node = nodes_[cur];
    cur = nodes_[node.right].stats.b > nodes_[node.left].stats.b ? node.right : node.left;
    path_.push_back(cur);
  }
  last_pull_was_leaf_ = nodes_[cur].left < 0;

  const NodeId id = nodes_[cur].stats.id;
  Pull pull{id, representative(cell_of(domain_, id)), 0.0, 0.0};
  pull.f_value = evaluate(objective, pull.x);
  pull.reward = noise.half_width == 0.0 ? pull.f_value : pull.f_value + noise_sample(noise, rng);

  if (nodes_[cur].left < 0 && id.h < cap) {
    const auto [left, right] = children(id);
    const std::int32_t l = add_leaf(left);
    const std::int32_t r = add_leaf(right);
    nodes_[cur].left = l;
    nodes_[cur].right = r;
    nodes_[cur].stats.is_leaf = false;
  }

  for (auto it = path_.rbegin(); it != path_.rend(); ++it) {
    Node& node = nodes_[*it];
    NodeStats& s = node.stats;
    if (s.id != kRootId) {
      ++s.count;
      const double delta = pull.reward - s.mean;
      s.mean += delta / static_cast<double>(s.count);
      s.m2 += delta * (pull.reward - s.mean);
    }
    s.u = compute_u(s);
    update_node(node);
  }
  ++t_;
  return pull;
}

std::vector<NodeStats> TruncatedHoo::nodes() const {
  std::vector<NodeStats> out;
  out.reserve(nodes_.size());
  for (const Node& node : nodes_) out.push_back(node.stats);
  return out;
}

RegretTrace thoo_run(const SmoothnessFn& smoothness, const ConfidenceSchedule& schedule,
                     const ObjectiveSpec& objective, const NoiseModel& noise, std::uint64_t n,
                     std::uint64_t seed) {
  TruncatedHoo hoo(objective.domain, smoothness, schedule);
  Rng rng(seed, Stream::noise);
  RegretTrace trace = run_trace(hoo, objective, noise, n, rng, f_star_oracle(objective));
  trace.meta.algorithm = "thoo";
  trace.meta.seed = seed;
  return trace;
}

void MetaConfig::validate() const {
  if (!(rho_max > 0.0 && rho_max < 1.0)) throw std::invalid_argument("rho_max must lie in (0, 1)");
  if (num_instances == 0) throw std::invalid_argument("POO needs at least one instance");
  if (!(nu1 > 0.0)) throw std::invalid_argument("nu1 must be positive");
}

std::vector<double> rho_grid(const MetaConfig& meta) {
  meta.validate();
  const auto m = static_cast<double>(meta.num_instances);
  std::vector<double> grid(meta.num_instances);
  for (std::uint32_t j = 0; j < meta.num_instances; ++j) {
    grid[j] = std::pow(meta.rho_max, m / static_cast<double>(j + 1));
  }
  return grid;
}

ParallelOptimistic::ParallelOptimistic(const MetaConfig& meta, const Domain& domain,
                                       const ConfidenceSchedule& schedule)
    : rhos_(rho_grid(meta)) {
  for (const double rho : rhos_) {
    const SmoothnessFn phi = SmoothnessFn::exponential(meta.nu1, rho);
    switch (meta.base) {
      case BaseKind::hct:
        instances_.push_back(std::make_unique<SearchTree>(Algorithm::hct, domain, phi, schedule));
        break;
      case BaseKind::vhct:
        instances_.push_back(std::make_unique<SearchTree>(Algorithm::vhct, domain, phi, schedule));
        break;
      case BaseKind::thoo:
        instances_.push_back(std::make_unique<TruncatedHoo>(domain, phi, schedule));
        break;
    }
  }
  pulls_.assign(instances_.size(), 0);
}

Pull ParallelOptimistic::step(const ObjectiveSpec& objective, const NoiseModel& noise, Rng& rng) {
  const std::size_t k = (t_ - 1) % instances_.size();
  ++pulls_[k];
  ++t_;
  return instances_[k]->step(objective, noise, rng);
}

RegretTrace poo_run(const MetaConfig& meta, const ConfidenceSchedule& schedule,
                    const ObjectiveSpec& objective, const NoiseModel& noise, std::uint64_t n,
                    std::uint64_t seed) {
  ParallelOptimistic poo(meta, objective.domain, schedule);
  Rng rng(seed, Stream::noise);
  RegretTrace trace = run_trace(poo, objective, noise, n, rng, f_star_oracle(objective));
  switch (meta.base) {
    case BaseKind::hct: trace.meta.algorithm = "poo-hct"; break;
    case BaseKind::vhct: trace.meta.algorithm = "poo-vhct"; break;
    case BaseKind::thoo: trace.meta.algorithm = "poo-thoo"; break;
  }
  trace.meta.seed = seed;
  return trace;
}

}  // namespace osc
