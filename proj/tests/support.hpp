#pragma once

// Generators and brute-force oracles shared by the unit tests and the
// acceptance runner.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "eaog/andor_graph.hpp"
#include "eaog/benchmarks.hpp"
#include "eaog/geometric_world.hpp"
#include "eaog/graph_net_search.hpp"
#include "eaog/scenario.hpp"

namespace eaog::testing {

inline Fact F(const std::string& text) { return *parse_fact(text); }

// ---------------------------------------------------------------------------
// Random AND/OR graphs

struct RandomGraph {
  GraphTemplate tmpl;
  std::map<NodeId, bool> truth;
};

/// At most 12 nodes and 8 arcs, weights are multiples of 0.25 in [0,10],
/// every arc carries an action. Leaf labels are `t(lN)`.
inline RandomGraph random_graph(std::mt19937_64& rng) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  RandomGraph g;
  g.tmpl.name = "random";
  const int internals = pick(0, 4);
  const int leaves = pick(1, 12 - 2 - internals);
  g.tmpl.nodes.push_back({0, NodeKind::Root, "root", {}});
  g.tmpl.nodes.push_back({1, NodeKind::Failure, "failure", {}});
  std::vector<std::uint32_t> parents{0};
  for (int i = 0; i < internals; ++i) {
    const auto id = static_cast<std::uint32_t>(2 + i);
    g.tmpl.nodes.push_back({id, NodeKind::Internal, "n" + std::to_string(id), {}});
    parents.push_back(id);
  }
  for (int i = 0; i < leaves; ++i) {
    const auto id = static_cast<std::uint32_t>(2 + internals + i);
    const std::string name = "l" + std::to_string(id);
    g.tmpl.nodes.push_back({id, NodeKind::Leaf, "t(" + name + ")", {Fact{"t", {name}}}});
    g.truth[NodeId{id}] = std::bernoulli_distribution(0.75)(rng);
  }
  const auto total = static_cast<std::uint32_t>(g.tmpl.nodes.size());
  int next_arc = 1;
  auto add_arc = [&](std::uint32_t parent) {
    // children come from later nodes (parents are ordered), failure now and then
    std::set<std::uint32_t> kids;
    const int want = pick(1, 3);
    for (int k = 0; k < want; ++k) {
      const std::uint32_t lo = parent == 0 ? 2 : parent + 1;
      if (lo >= total) break;
      kids.insert(static_cast<std::uint32_t>(pick(static_cast<int>(lo), static_cast<int>(total) - 1)));
    }
    if (std::bernoulli_distribution(0.05)(rng)) kids.insert(1);
    if (kids.empty()) kids.insert(total - 1);
    ArcDecl a;
    a.id = next_arc++;
    a.parent = parent;
    a.children.assign(kids.begin(), kids.end());
    a.weight = 0.25 * pick(0, 40);
    a.actions = {Fact{"act", {"a" + std::to_string(a.id)}}};
    g.tmpl.arcs.push_back(a);
  };
  for (auto p : parents) add_arc(p);
  while (next_arc <= 8 && std::bernoulli_distribution(0.6)(rng)) {
    add_arc(parents[static_cast<std::size_t>(pick(0, static_cast<int>(parents.size()) - 1))]);
  }
  return g;
}

/// Exhaustive enumeration of solution subgraphs: every non-leaf node picks
/// one of its arcs (a policy); the cost of a node under a policy is the sum of
/// weights over the tree it spans, infinite when the tree hits a false leaf
/// or the failure node.
struct PolicyOracle {
  const GraphTemplate* tmpl = nullptr;
  std::map<std::uint32_t, bool> truth;
  std::map<std::uint32_t, std::vector<const ArcDecl*>> arcs;
  std::map<std::uint32_t, NodeKind> kinds;
  std::vector<std::uint32_t> choosers;  // nodes with at least one arc

  PolicyOracle(const GraphTemplate& t, const std::map<NodeId, bool>& assignment) : tmpl(&t) {
    for (const auto& [id, v] : assignment) truth[id.value] = v;
    for (const auto& n : t.nodes) kinds[n.id] = n.kind;
    for (const auto& a : t.arcs) arcs[a.parent].push_back(&a);
    for (const auto& [id, list] : arcs) choosers.push_back(id);
  }

  using Policy = std::map<std::uint32_t, const ArcDecl*>;

  double tree_cost(std::uint32_t node, const Policy& pi) const {
    const NodeKind k = kinds.at(node);
    if (k == NodeKind::Leaf) return truth.at(node) ? 0.0 : kInfiniteCost;
    auto it = pi.find(node);
    if (k == NodeKind::Failure || it == pi.end()) return kInfiniteCost;
    double c = it->second->weight;
    for (auto ch : it->second->children) c += tree_cost(ch, pi);
    return c;
  }

  void in_tree(std::uint32_t node, const Policy& pi, std::set<std::uint32_t>& out) const {
    out.insert(node);
    auto it = pi.find(node);
    if (it == pi.end()) return;
    for (auto ch : it->second->children) in_tree(ch, pi, out);
  }

  void for_each_policy(const std::function<void(const Policy&)>& f) const {
    Policy pi;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == choosers.size()) {
        f(pi);
        return;
      }
      for (const ArcDecl* a : arcs.at(choosers[i])) {
        pi[choosers[i]] = a;
        rec(i + 1);
      }
    };
    rec(0);
  }

  double min_cost(std::uint32_t node) const {
    double best = kInfiniteCost;
    for_each_policy([&](const Policy& pi) { best = std::min(best, tree_cost(node, pi)); });
    return best;
  }

  /// True when some root policy of cost `target` uses `arc` at `node`.
  bool on_min_solution(std::uint32_t node, int arc, double target) const {
    bool found = false;
    for_each_policy([&](const Policy& pi) {
      if (found || pi.at(node)->id != arc) return;
      if (tree_cost(0, pi) != target) return;
      std::set<std::uint32_t> nodes;
      in_tree(0, pi, nodes);
      found = nodes.contains(node);
    });
    return found;
  }
};

/// Wraps a random graph in a scenario so the search layer can run on it.
inline Scenario graph_scenario(const RandomGraph& g) {
  Scenario s;
  s.name = "random";
  s.predicates = {{"act", 1}, {"t", 1}};
  for (const auto& n : g.tmpl.nodes) {
    if (n.kind != NodeKind::Leaf) continue;
    ObjectDecl o;
    o.id = n.facts[0].args[0];
    o.kind = "token";
    o.footprint.radius = 0.01;
    s.objects.push_back(o);
    if (g.truth.at(NodeId{n.id})) s.init.insert(n.facts[0]);
  }
  s.goal.required_facts.insert(Fact{"t", {s.objects.front().id}});
  s.graph = g.tmpl;
  canonicalize(s);
  return s;
}

// ---------------------------------------------------------------------------
// Blocked-query worlds

struct QueryCase {
  World world;
  MotionQuery query;
  bool out_of_reach = false;
};

/// One arm at the origin facing +y (reach 0.7, clearance 0.05), a target block,
/// a goal slot, and up to six tall movable boxes scattered near the straight
/// lines between rest, target and goal. One case in ten puts the goal out of reach.
inline QueryCase random_query_case(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto polar = [&](double r0, double r1) {
    const double r = r0 + (r1 - r0) * U(rng);
    const double a = std::numbers::pi * (0.15 + 0.7 * U(rng));
    return Vec2{r * std::cos(a), r * std::sin(a)};
  };
  Scenario s;
  s.name = "query";
  AgentDecl arm;
  arm.id = "arm";
  arm.position = {0.0, 0.0};
  arm.yaw = std::numbers::pi / 2;
  arm.reach = 0.7;
  arm.clearance = 0.05;
  s.agents.push_back(arm);

  QueryCase c;
  c.out_of_reach = U(rng) < 0.1;
  const Vec2 target = polar(0.3, 0.65);
  const Vec2 site = c.out_of_reach ? polar(0.8, 1.1) : polar(0.3, 0.65);
  ObjectDecl t;
  t.id = "target";
  t.kind = "block";
  t.position = target;
  t.footprint.radius = 0.02;
  t.height = 0.04;
  t.movable = true;
  s.objects.push_back(t);
  ObjectDecl g;
  g.id = "site";
  g.kind = "slot";
  g.position = site;
  g.footprint.radius = 0.02;
  s.objects.push_back(g);

  const Vec2 rest{0.0, kRestDistance};
  const Vec2 anchors[3] = {rest, target, site};
  const int boxes = 1 + static_cast<int>(U(rng) * 6);
  for (int i = 0; i < boxes; ++i) {
    for (int tries = 0; tries < 50; ++tries) {
      const int seg = static_cast<int>(U(rng) * 2);
      const double u = U(rng);
      Vec2 p{anchors[seg].x + u * (anchors[seg + 1].x - anchors[seg].x) + 0.12 * (U(rng) - 0.5),
             anchors[seg].y + u * (anchors[seg + 1].y - anchors[seg].y) + 0.12 * (U(rng) - 0.5)};
      // keep the start configuration and the two ends free
      if (distance(p, rest) < 0.1 || point_segment_distance(p, {0, 0}, rest) < 0.08) continue;
      if (distance(p, target) < 0.08 || distance(p, site) < 0.08) continue;
      ObjectDecl b;
      b.id = "box" + std::to_string(i + 1);
      b.kind = "box";
      b.position = p;
      b.footprint.shape = Footprint::Shape::Box;
      b.footprint.hx = 0.02 + 0.02 * U(rng);
      b.footprint.hy = 0.02 + 0.02 * U(rng);
      b.height = 0.1;
      b.movable = true;
      s.objects.push_back(b);
      break;
    }
  }
  canonicalize(s);
  c.world = make_world(s, 0);
  const Agent& a = c.world.agent("arm");
  c.query.agent = "arm";
  c.query.motion_class = MotionClass::Transfer;
  c.query.mode = TransferMode::PickPlace;
  c.query.start = a.config;
  c.query.goal = site;
  c.query.goal_region = Box{site, kRegionTolerance, kRegionTolerance};
  c.query.manipulated = "target";
  c.query.goal_entity = "site";
  return c;
}

inline World without(World w, const std::vector<std::string>& ids) {
  for (const auto& id : ids) w.objects.erase(id);
  return w;
}

// ---------------------------------------------------------------------------
// Random scenarios for the DSL round trip

inline Scenario random_scenario(std::mt19937_64& rng, int index) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  // awkward numbers on purpose: long fractions, tiny and large magnitudes
  auto num = [&](double scale) {
    switch (pick(0, 4)) {
      case 0: return 0.0;
      case 1: return std::round(U(rng) * scale * 100) / 100;
      case 2: return U(rng) * scale * 1e-6;
      default: return U(rng) * scale;
    }
  };
  auto signed_num = [&](double scale) { return (pick(0, 1) ? -1.0 : 1.0) * num(scale); };

  Scenario s;
  s.name = "fuzz" + std::to_string(index);
  const std::vector<std::string> kinds{"block", "slot", "station", "handover", "fixture", "peg"};
  const int nobj = pick(1, 7);
  for (int i = 0; i < nobj; ++i) {
    ObjectDecl o;
    o.id = "o" + std::to_string(i);
    o.kind = kinds[static_cast<std::size_t>(pick(0, static_cast<int>(kinds.size()) - 1))];
    o.position = {signed_num(5), signed_num(5)};
    o.yaw = signed_num(3);
    if (pick(0, 1)) {
      o.footprint.shape = Footprint::Shape::Box;
      o.footprint.hx = 0.01 + num(1);
      o.footprint.hy = 0.01 + num(1);
    } else {
      o.footprint.radius = 0.01 + num(1);
    }
    o.height = num(2);
    o.movable = pick(0, 1) == 1;
    if (o.movable && i > 0 && pick(0, 1)) o.support = "o" + std::to_string(pick(0, i - 1));
    s.objects.push_back(o);
  }
  AgentDecl base;
  base.id = "mover";
  base.kind = AgentKind::Base;
  base.position = {signed_num(3), signed_num(3)};
  base.yaw = signed_num(3);
  base.radius = 0.05 + num(1);
  const bool with_base = pick(0, 1) == 1;
  if (with_base) s.agents.push_back(base);
  const int narms = pick(1, 3);
  for (int i = 0; i < narms; ++i) {
    AgentDecl a;
    a.id = "arm" + std::to_string(i);
    a.position = {signed_num(2), signed_num(2)};
    a.yaw = signed_num(3);
    a.reach = 0.1 + num(2);
    a.clearance = num(0.5);
    if (with_base && pick(0, 1)) a.mount = "mover";
    s.agents.push_back(a);
  }

  s.predicates = {{"clear", 1}, {"on", 2}, {"p", 1}, {"q", 2}, {"obstructs", 2}};
  std::vector<std::string> entities;
  for (const auto& o : s.objects) entities.push_back(o.id);
  for (const auto& a : s.agents) entities.push_back(a.id);
  auto entity = [&] { return entities[static_cast<std::size_t>(pick(0, static_cast<int>(entities.size()) - 1))]; };
  auto ground_fact = [&](bool symbolic_only) {
    const int which = pick(symbolic_only ? 0 : 0, symbolic_only ? 2 : 4);
    switch (which) {
      case 0: return Fact{"p", {entity()}};
      case 1: return Fact{"q", {entity(), entity()}};
      case 2: return Fact{"obstructs", {entity(), entity()}};
      case 3: return Fact{"on", {entity(), entity()}};
      default: return Fact{"clear", {entity()}};
    }
  };

  const int nact = pick(1, 3);
  for (int i = 0; i < nact; ++i) {
    ActionTemplate a;
    a.name = "act" + std::to_string(i);
    a.params = {{"?x", "any"}, {"?y", s.objects.front().kind}};
    switch (pick(0, 4)) {
      case 0:
        a.motion_class = MotionClass::Transfer;
        a.object_slot = "?x";
        a.goal_slot = pick(0, 1) ? "?y" : "hand";
        break;
      case 1:
        a.motion_class = MotionClass::Handover;
        a.object_slot = "?y";
        a.goal_slot = "?x";
        break;
      case 2:
        a.motion_class = MotionClass::Transit;
        a.goal_slot = "?y";
        break;
      case 3:
        a.motion_class = MotionClass::Wait;
        a.duration = num(600);
        break;
      default:
        break;
    }
    a.preconditions = {Fact{"p", {"?x"}}};
    if (pick(0, 1)) a.preconditions.push_back(Fact{"q", {"?x", "?y"}});
    a.effects_add = {Fact{"q", {"?y", pick(0, 1) ? "$agent" : "?x"}}};
    a.effects_del = {Fact{"p", {"?x"}}, Fact{"q", {"*", "?y"}}};
    s.actions.push_back(a);
  }
  for (int i = pick(0, 4); i > 0; --i) s.init.insert(ground_fact(true));
  for (int i = pick(1, 3); i > 0; --i) s.goal.required_facts.insert(ground_fact(false));

  auto call = [&](const std::string& x, const std::string& y) {
    return Fact{s.actions[static_cast<std::size_t>(pick(0, nact - 1))].name, {x, y}};
  };
  auto label = [&](int i) {
    const char* pieces[] = {"step ", "\"quoted\" ", "back\\slash ", "plain", " spaced  out "};
    return std::string(pieces[pick(0, 4)]) + std::to_string(i);
  };

  // main graph: random DAG like random_graph, ground facts and calls
  RandomGraph rg = random_graph(rng);
  s.graph = rg.tmpl;
  s.graph.name = "main";
  for (auto& n : s.graph.nodes) {
    if (n.kind == NodeKind::Leaf) {
      n.facts = {ground_fact(false)};
      if (pick(0, 1)) n.facts.push_back(ground_fact(false));
    }
    if (n.kind == NodeKind::Internal) n.label = label(static_cast<int>(n.id));
  }
  for (auto& a : s.graph.arcs) {
    a.weight = pick(0, 1) ? num(10) : a.weight;
    a.actions.clear();
    for (int k = pick(0, 2); k > 0; --k) a.actions.push_back(call(entity(), entity()));
  }

  if (pick(0, 1)) {
    GraphTemplate st;
    st.name = pick(0, 1) ? std::string(kRearrangeStage) : "extra";
    st.params = {{"?o", "any"}, {"?t", s.objects.front().kind}};
    st.nodes = {{0, NodeKind::Root, "done", {}},
                {1, NodeKind::Failure, "failure", {}},
                {2, NodeKind::Leaf, "obstructs(?o,?t)", {Fact{"obstructs", {"?o", "?t"}}}},
                {3, NodeKind::Leaf, "p(?o)", {Fact{"p", {"?o"}}}},
                {4, NodeKind::Internal, label(4), {}}};
    st.arcs = {{1, 4, {2, 3}, num(3), {Fact{"q", {"?o", "?t"}}}, {call("?o", "?t")}},
               {2, 0, {4}, 0.0, {}, {}}};
    s.stages.push_back(st);
  }
  canonicalize(s);
  return s;
}

}  // namespace eaog::testing
