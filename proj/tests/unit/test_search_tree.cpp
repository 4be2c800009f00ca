#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "osc/search_tree.hpp"

using namespace osc;

namespace {

// log_confidence(t = 1) == 1 exactly enough for arithmetic examples:
// t+ = 2 and c1 delta = 2 / e.
ConfidenceSchedule unit_log_schedule() {
  ConfidenceSchedule s;
  s.b = 1.0;
  s.c = 1.0;
  s.delta = 0.5;
  s.c1 = 4.0 / std::numbers::e;
  return s;
}

ObjectiveSpec constant_objective() { return make_constant(1); }

struct Log {
  std::map<NodeId, std::vector<double>> rewards;
};

void check_tree_invariants(const SearchTree& tree) {
  const auto nodes = tree.nodes();
  std::size_t leaves = 0;
  for (const NodeStats& s : nodes) {
    if (s.id == kRootId) continue;
    CHECK(s.b <= s.u);
    if (s.count == 0) {
      CHECK(std::isinf(s.u));
      CHECK(!s.variance().has_value());
    } else {
      CHECK(*s.variance() >= 0.0);
    }
    if (s.is_leaf) {
      ++leaves;
      CHECK(s.b == s.u);
    } else {
      const NodeStats* l = tree.find(children(s.id).first);
      const NodeStats* r = tree.find(children(s.id).second);
      REQUIRE(l != nullptr);
      REQUIRE(r != nullptr);
      CHECK(s.b <= std::max(l->b, r->b));
    }
    REQUIRE(tree.find(parent(s.id)) != nullptr);

    // Guard equivalence: T >= tau  <=>  SE(T) <= phi(h), away from exact ties.
    const double phi = tree.smoothness()(s.id.h);
    const auto pulls = static_cast<double>(s.count);
    if (std::fabs(pulls - s.tau) > 1e-9 * s.tau) {
      CHECK((pulls >= s.tau) == (tree.guard_se(s) <= phi));
    }
  }
  // Expansion legality and tree-size bound.
  for (const ExpansionEvent& e : tree.expansions()) CHECK(static_cast<double>(e.count) >= e.tau);
  CHECK(tree.size() == 3 + 2 * tree.expansions().size());
  CHECK(leaves == tree.expansions().size() + 2);
}

}  // namespace

TEST_CASE("initial tree") {
  const SearchTree tree(Algorithm::vhct, Domain::unit_interval(),
                        SmoothnessFn::exponential(1.0, 0.5), ConfidenceSchedule{});
  CHECK(tree.size() == 3);
  CHECK(tree.depth() == 1);
  CHECK(tree.round() == 1);
  const NodeStats* root = tree.find(kRootId);
  REQUIRE(root != nullptr);
  CHECK(root->count == 1);
  CHECK(root->tau == 1.0);
  CHECK_FALSE(root->is_leaf);
  for (NodeId id : {NodeId{1, 1}, NodeId{1, 2}}) {
    const NodeStats* s = tree.find(id);
    REQUIRE(s != nullptr);
    CHECK(s->is_leaf);
    CHECK(s->count == 0);
    CHECK(std::isinf(s->u));
    CHECK(std::isinf(s->b));
  }
  CHECK(tree.find({2, 1}) == nullptr);
}

TEST_CASE("compute_u") {
  const auto sched = unit_log_schedule();
  const SearchTree vhct(Algorithm::vhct, Domain::unit_interval(),
                        SmoothnessFn::exponential(1.0, 0.5), sched);
  CHECK(vhct.current_log_confidence() == doctest::Approx(1.0).epsilon(1e-15));

  NodeStats unvisited;
  unvisited.id = {2, 1};
  CHECK(std::isinf(vhct.compute_u(unvisited)));

  NodeStats zero_var;
  zero_var.id = {2, 1};
  zero_var.count = 3;
  CHECK(vhct.compute_u(zero_var) == doctest::Approx(1.25).epsilon(1e-14));

  // U is mean + phi + SE for HCT too: 0.3 + 0.25 + 0.5 with T = 4, L = 1.
  const SearchTree hct(Algorithm::hct, Domain::unit_interval(),
                       SmoothnessFn::exponential(1.0, 0.5), sched);
  NodeStats s;
  s.id = {2, 3};
  s.count = 4;
  s.mean = 0.3;
  CHECK(hct.compute_u(s) == doctest::Approx(1.05).epsilon(1e-14));
}

TEST_CASE("backed-up B values") {
  CHECK(backed_up_b(5.0, 3.0, 7.0) == 5.0);
  CHECK(backed_up_b(5.0, kInf, 2.0) == 5.0);
  CHECK(backed_up_b(5.0, 1.0, 2.0) == 2.0);
  CHECK(backed_up_b(kInf, kInf, kInf) == kInf);

  SearchTree tree(Algorithm::vhct, Domain::unit_interval(), SmoothnessFn::exponential(1.0, 0.5),
                  ConfidenceSchedule{});
  const std::vector<NodeId> scope = {{1, 1}, {1, 2}, kRootId};
  CHECK_NOTHROW(tree.update_backward(scope));
  const std::vector<NodeId> missing = {{3, 1}, kRootId};
  CHECK_THROWS_AS(tree.update_backward(missing), std::logic_error);
}

TEST_CASE("first pull goes to the left child on a tie") {
  SearchTree tree(Algorithm::vhct, Domain::unit_interval(), SmoothnessFn::exponential(1.0, 0.5),
                  ConfidenceSchedule{});
  Rng rng(1, Stream::noise);
  const Pull pull = tree.pull_update(make_garland(), {0.05, 1.0}, rng);
  CHECK(pull.node == NodeId{1, 1});
  CHECK(pull.x == std::vector{0.25});
  const NodeStats* s = tree.find({1, 1});
  CHECK(s->count == 1);
  CHECK(s->b == s->u);
  CHECK(std::isfinite(s->u));
}

TEST_CASE("traversal stops at an internal node whose count fell below tau") {
  // HCT with phi(1) = 1: tau(1,1) = L, with L(1) ~ 0.694 and L(2) ~ 1.387.
  ConfidenceSchedule s;
  s.b = 1.0;
  s.c = 1.0;
  s.c1 = 1.0;
  s.delta = 0.999;
  SearchTree tree(Algorithm::hct, Domain::unit_interval(), SmoothnessFn::exponential(2.0, 0.5), s);
  const auto objective = constant_objective();
  Rng rng(1, Stream::noise);

  Pull p1 = tree.step(objective, {}, rng);
  CHECK(p1.node == NodeId{1, 1});
  CHECK_FALSE(tree.find({1, 1})->is_leaf);

  // Round 2 refreshes: tau(1,1) rises above its count, and (1,2) is unvisited.
  Pull p2 = tree.step(objective, {}, rng);
  CHECK(p2.node == NodeId{1, 2});
  CHECK(tree.find({1, 1})->tau > 1.0);
  CHECK(tree.find({1, 2})->is_leaf);

  // Round 3: equal B on both sides; the left child is internal but under-sampled.
  Pull p3 = tree.step(objective, {}, rng);
  CHECK(p3.node == NodeId{1, 1});
  CHECK(tree.find({1, 1})->count == 2);
}

TEST_CASE("maybe_expand") {
  SearchTree tree(Algorithm::hct, Domain::unit_interval(), SmoothnessFn::exponential(1.0, 0.5),
                  ConfidenceSchedule{});
  CHECK_FALSE(tree.maybe_expand({1, 1}));
  CHECK_FALSE(tree.maybe_expand(kRootId));
  CHECK(tree.size() == 3);
  CHECK_THROWS_AS(tree.maybe_expand({5, 1}), std::logic_error);

  // Pull (1,1) until it reaches ceil(tau), then expansion adds two leaves.
  const auto objective = constant_objective();
  Rng rng(1, Stream::noise);
  const double tau = tree.find({1, 1})->tau;
  while (static_cast<double>(tree.find({1, 1})->count) < tau) tree.pull_update(objective, {}, rng);
  CHECK(tree.find({1, 1})->count == static_cast<std::uint64_t>(std::ceil(tau)));
  CHECK(tree.maybe_expand({1, 1}));
  CHECK(tree.size() == 5);
  CHECK(tree.find({2, 1})->count == 0);
  CHECK(std::isinf(tree.find({2, 2})->b));
  CHECK_FALSE(tree.maybe_expand({1, 1}));
}

TEST_CASE("refreshes happen exactly at powers of two") {
  SearchTree tree(Algorithm::vhct, Domain::unit_interval(), SmoothnessFn::exponential(1.0, 0.75),
                  ConfidenceSchedule{});
  const auto objective = make_garland();
  Rng rng(3, Stream::noise);
  for (std::uint64_t t = 1; t <= 32; ++t) {
    const std::uint64_t before = tree.refresh_count();
    tree.step(objective, {0.05, 1.0}, rng);
    CHECK((tree.refresh_count() - before == 1) == (t > 1 && is_power_of_two(t)));
  }
  CHECK(tree.refresh_count() == 5);

  for (std::uint64_t t = 33; t <= 1024; ++t) tree.step(objective, {0.05, 1.0}, rng);
  CHECK(tree.refresh_count() == 10);
  CHECK(tree.refresh_count() <= 11);
}

TEST_CASE("a refresh never lowers U when statistics are unchanged") {
  SearchTree tree(Algorithm::vhct, Domain::unit_interval(), SmoothnessFn::exponential(1.0, 0.75),
                  ConfidenceSchedule{});
  const auto objective = make_garland();
  Rng rng(4, Stream::noise);
  while (tree.round() < 255) tree.step(objective, {0.05, 1.0}, rng);
  tree.step(objective, {0.05, 1.0}, rng);  // round 255; the next round is 256
  const auto before = tree.nodes();
  const double l_before = tree.current_log_confidence();
  tree.refresh_epoch();
  CHECK(tree.current_log_confidence() > l_before);
  const auto after = tree.nodes();
  REQUIRE(before.size() == after.size());
  for (std::size_t k = 0; k < before.size(); ++k) {
    CHECK(after[k].count == before[k].count);
    CHECK(after[k].mean == before[k].mean);
    CHECK(after[k].u >= before[k].u);
  }
}

TEST_CASE("zero-variance rewards keep the bias-only threshold") {
  const ConfidenceSchedule sched;
  const auto phi = SmoothnessFn::exponential(1.0, 0.75);
  SearchTree tree(Algorithm::vhct, Domain::unit_interval(), phi, sched);
  const auto objective = constant_objective();
  Rng rng(5, Stream::noise);
  for (int t = 0; t < 100; ++t) tree.step(objective, {}, rng);
  const double l = tree.current_log_confidence();
  for (const NodeStats& s : tree.nodes()) {
    if (s.id == kRootId) continue;
    if (s.count > 0) CHECK(*s.variance() == 0.0);
    const double bias_only = 3.0 * sched.b * sched.c * sched.c * l / phi(s.id.h);
    CHECK(s.tau == doctest::Approx(tau_closed_form(phi(s.id.h), sched, variance_floor(sched), l))
                       .epsilon(1e-12));
    CHECK(s.tau >= bias_only);
    CHECK(s.tau <= bias_only * 1.01);
  }
}

TEST_CASE("one pull per step and deterministic replay") {
  for (Algorithm algo : {Algorithm::vhct, Algorithm::hct}) {
    auto make = [&] {
      return SearchTree(algo, Domain({-5.0, -5.0}, {5.0, 5.0}), SmoothnessFn::exponential(1.0, 0.75),
                        ConfidenceSchedule{0.1, 1.0 / 3.0, 0.05, 1.0});
    };
    SearchTree a = make();
    SearchTree b = make();
    Rng ra(42, Stream::noise);
    Rng rb(42, Stream::noise);
    const auto objective = make_himmelblau();
    for (int t = 0; t < 500; ++t) {
      const Pull pa = a.step(objective, {0.05, 1.0}, ra);
      const Pull pb = b.step(objective, {0.05, 1.0}, rb);
      REQUIRE(pa.node == pb.node);
      REQUIRE(pa.reward == pb.reward);
    }
    std::uint64_t pulls = 0;
    for (const NodeStats& s : a.nodes()) {
      if (s.id != kRootId) pulls += s.count;
    }
    CHECK(pulls == 500);
  }
}

TEST_CASE("invariants hold after every step") {
  for (Algorithm algo : {Algorithm::vhct, Algorithm::hct}) {
    for (double c : {0.1, 3.0}) {
      ConfidenceSchedule sched;
      sched.c = c;
      SearchTree tree(algo, Domain::unit_interval(), SmoothnessFn::exponential(1.0, 0.75), sched);
      const auto objective = make_garland();
      Rng rng(6, Stream::noise);
      Log log;
      for (int t = 0; t < 600; ++t) {
        const Pull pull = tree.step(objective, {0.5, 1.0}, rng);
        log.rewards[pull.node].push_back(pull.reward);
        check_tree_invariants(tree);
      }
      // Streaming moments agree with batch recomputation.
      for (const auto& [id, rewards] : log.rewards) {
        const NodeStats* s = tree.find(id);
        REQUIRE(s != nullptr);
        REQUIRE(s->count == rewards.size());
        double sum = 0.0;
        for (double r : rewards) sum += r;
        const double mean = sum / static_cast<double>(rewards.size());
        double sq = 0.0;
        for (double r : rewards) sq += (r - mean) * (r - mean);
        const double var = sq / static_cast<double>(rewards.size());
        CHECK(s->mean == doctest::Approx(mean).epsilon(1e-12));
        CHECK(*s->variance() == doctest::Approx(var).epsilon(1e-12).scale(1e-12));
      }
    }
  }
}

TEST_CASE("streaming moments on long reward streams") {
  SearchTree tree(Algorithm::hct, Domain::unit_interval(), SmoothnessFn::exponential(1.0, 0.5),
                  ConfidenceSchedule{});
  // With b c large, tau(1,1) is far above 100, so (1,1) absorbs many pulls.
  const auto objective = make_garland();
  Rng rng(8, Stream::noise);
  std::vector<double> rewards;
  for (int t = 0; t < 100; ++t) {
    const Pull p = tree.pull_update(objective, {0.5, 1.0}, rng);
    if (p.node == NodeId{1, 1}) rewards.push_back(p.reward);
  }
  const NodeStats* s = tree.find({1, 1});
  REQUIRE(s->count == rewards.size());
  REQUIRE(rewards.size() >= 30);
  double mean = 0.0;
  for (double r : rewards) mean += r;
  mean /= static_cast<double>(rewards.size());
  double var = 0.0;
  for (double r : rewards) var += (r - mean) * (r - mean);
  var /= static_cast<double>(rewards.size());
  CHECK(s->mean == doctest::Approx(mean).epsilon(1e-12));
  CHECK(*s->variance() == doctest::Approx(var).epsilon(1e-12));
}

TEST_CASE("noiseless optimism on the tent function") {
  const auto objective = make_tent();
  for (Algorithm algo : {Algorithm::vhct, Algorithm::hct}) {
    SearchTree tree(algo, objective.domain, SmoothnessFn::exponential(2.0, 0.5),
                    ConfidenceSchedule{0.1, 1.0 / 3.0, 0.05, 1.0});
    Rng rng(1, Stream::noise);
    for (int t = 0; t < 300; ++t) {
      tree.step(objective, {}, rng);
      for (const NodeStats& s : tree.nodes()) {
        if (s.id == kRootId || s.count == 0) continue;
        if (cell_of(objective.domain, s.id).contains_closed(std::vector{0.5})) {
          REQUIRE(s.u >= 1.0 - 1e-12);
        }
      }
    }
  }
}

TEST_CASE("run records regret") {
  const auto objective = make_garland();
  const auto phi = SmoothnessFn::exponential(1.0, 0.75);
  const ConfidenceSchedule sched;
  const RegretTrace quiet = run(Algorithm::vhct, phi, sched, objective, {}, 400, 3);
  REQUIRE(quiet.records.size() == 400);
  double prev = 0.0;
  for (const TraceRecord& r : quiet.records) {
    CHECK(r.cum_regret == r.cum_pseudo_regret);
    CHECK(r.cum_pseudo_regret >= prev);
    prev = r.cum_pseudo_regret;
  }

  const RegretTrace noisy = run(Algorithm::hct, phi, sched, objective, {0.5, 1.0}, 400, 3);
  double sum_r = 0.0;
  double prev_pseudo = 0.0;
  for (const TraceRecord& r : noisy.records) {
    sum_r += r.reward;
    const double direct = static_cast<double>(r.t) * noisy.f_star - sum_r;
    CHECK(r.cum_regret == doctest::Approx(direct).epsilon(1e-9).scale(1.0));
    CHECK(r.cum_pseudo_regret >= prev_pseudo);
    prev_pseudo = r.cum_pseudo_regret;
  }

  const RegretTrace single = run(Algorithm::vhct, phi, sched, objective, {0.05, 1.0}, 1, 9);
  REQUIRE(single.records.size() == 1);
  CHECK(single.records[0].cum_regret == single.f_star - single.records[0].reward);
  CHECK(single.records[0].node == NodeId{1, 1});
}
