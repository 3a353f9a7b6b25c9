#include <doctest.h>

#include <regex>
#include <set>
#include <sstream>

#include "eaog/errors.hpp"
#include "support.hpp"

using namespace eaog;
using namespace eaog::testing;

namespace {

GraphTemplate minimal() {
  return {"mini",
          {},
          {{0, NodeKind::Root, "R", {}},
           {1, NodeKind::Failure, "F", {}},
           {2, NodeKind::Leaf, "L1", {F("a(x)")}},
           {3, NodeKind::Leaf, "L2", {F("b(x)")}}},
          {{1, 0, {2, 3}, 1.0, {}, {}}}};
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::ConfigInvalid;
}

// every edge endpoint must be declared; what a DOT processor would warn about
bool dot_well_formed(const std::string& dot) {
  std::set<std::string> declared;
  std::regex decl(R"(^\s+(\w+) \[)"), edge(R"(^\s+(\w+) -> (\w+))");
  std::istringstream in(dot);
  std::string line;
  int depth = 0;
  std::vector<std::pair<std::string, std::string>> edges;
  while (std::getline(in, line)) {
    for (char ch : line) depth += ch == '{' ? 1 : ch == '}' ? -1 : 0;
    std::smatch m;
    if (std::regex_search(line, m, edge)) {
      edges.emplace_back(m[1], m[2]);
    } else if (std::regex_search(line, m, decl)) {
      declared.insert(m[1]);
    }
  }
  for (const auto& [a, b] : edges) {
    if (!declared.contains(a) || !declared.contains(b)) return false;
  }
  return depth == 0 && dot.rfind("digraph", 0) == 0;
}

}  // namespace

TEST_CASE("minimal template builds a four node graph") {
  const AndOrGraph g = build_graph(minimal());
  CHECK(g.nodes().size() == 4);
  CHECK(g.root() == NodeId{0});
  CHECK(g.failure() == NodeId{1});
  CHECK(g.leaves().size() == 2);
  CHECK_FALSE(solved(g, g.root()));
  CHECK(node_cost(g, g.failure()) == kInfiniteCost);
}

TEST_CASE("malformed templates are rejected") {
  auto t = minimal();
  t.arcs[0].children.push_back(9);
  CHECK(code_of([&] { build_graph(t); }) == ErrorCode::DanglingReference);

  t = minimal();
  t.nodes.push_back({2, NodeKind::Leaf, "dup", {}});
  CHECK(code_of([&] { build_graph(t); }) == ErrorCode::DuplicateNodeId);

  t = minimal();
  t.nodes.erase(t.nodes.begin());
  CHECK(code_of([&] { build_graph(t); }) == ErrorCode::MissingRoot);

  t = minimal();
  t.nodes.erase(t.nodes.begin() + 1);
  CHECK(code_of([&] { build_graph(t); }) == ErrorCode::MissingFailure);

  t = minimal();
  t.arcs.push_back({2, 2, {3}, 1.0, {}, {}});
  CHECK(code_of([&] { build_graph(t); }) == ErrorCode::InvalidArc);

  t = minimal();
  t.nodes.push_back({4, NodeKind::Internal, "A", {}});
  t.nodes.push_back({5, NodeKind::Internal, "B", {}});
  t.arcs.push_back({2, 4, {5}, 1.0, {}, {}});
  t.arcs.push_back({3, 5, {4}, 1.0, {}, {}});
  CHECK(code_of([&] { build_graph(t); }) == ErrorCode::CycleDetected);

  t = minimal();
  t.arcs.push_back({2, 0, {0}, 1.0, {}, {}});
  CHECK_THROWS_AS(build_graph(t), Error);

  t = minimal();
  t.arcs.push_back({2, 0, {3}, -1.0, {}, {}});
  CHECK(code_of([&] { build_graph(t); }) == ErrorCode::InvalidArc);

  const AndOrGraph g = build_graph(minimal());
  CHECK(code_of([&] { set_leaf_truth(g, {{NodeId{0}, true}}); }) == ErrorCode::NotALeaf);
  CHECK(code_of([&] { g.node(NodeId{42}); }) == ErrorCode::UnknownNode);
}

TEST_CASE("AND semantics and costs") {
  AndOrGraph g = build_graph(minimal());
  g = set_leaf_truth(g, {{NodeId{2}, true}, {NodeId{3}, false}});
  CHECK(solved(g, NodeId{2}));
  CHECK_FALSE(solved(g, g.root()));
  CHECK(node_cost(g, g.root()) == kInfiniteCost);
  g = set_leaf_truth(g, {{NodeId{3}, true}});
  CHECK(solved(g, g.root()));
  CHECK(node_cost(g, g.root()) == 1.0);
  g = set_leaf_truth(g, {{NodeId{2}, false}, {NodeId{3}, false}});
  CHECK(node_cost(g, g.root()) == kInfiniteCost);
}

TEST_CASE("cheapest alternative wins") {
  auto t = minimal();
  t.arcs.push_back({2, 0, {2}, 3.0, {}, {}});
  auto g = set_leaf_truth(build_graph(t), {{NodeId{2}, true}, {NodeId{3}, true}});
  CHECK(node_cost(g, g.root()) == 1.0);

  GraphTemplate chain{"chain",
                      {},
                      {{0, NodeKind::Root, "R", {}},
                       {1, NodeKind::Failure, "F", {}},
                       {2, NodeKind::Internal, "M", {}},
                       {3, NodeKind::Leaf, "L", {F("a(x)")}}},
                      {{1, 0, {2}, 2.0, {}, {}}, {2, 2, {3}, 2.0, {}, {}}}};
  g = set_leaf_truth(build_graph(chain), {{NodeId{3}, true}});
  CHECK(node_cost(g, g.root()) == 4.0);
}

TEST_CASE("random graphs agree with policy enumeration") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const RandomGraph rg = random_graph(rng);
    const AndOrGraph g = set_leaf_truth(build_graph(rg.tmpl), rg.truth);
    const PolicyOracle oracle(rg.tmpl, rg.truth);
    for (const auto& n : g.nodes()) {
      if (n.kind == NodeKind::Leaf || n.kind == NodeKind::Failure) continue;
      const double want = oracle.min_cost(n.id.value);
      CHECK(node_cost(g, n.id) == want);
      CHECK(solved(g, n.id) == (want < kInfiniteCost));
    }
  }
}

TEST_CASE("augmentation adds the virtual node once") {
  const AugmentedGraph a = augment(build_graph(minimal()));
  CHECK(a.base.nodes().size() + 1 == 5);
  CHECK(a.virtual_arcs.size() == 2);
  CHECK(code_of([&] { augment(a); }) == ErrorCode::AlreadyAugmented);
}

TEST_CASE("dot export is deterministic and well formed") {
  const AndOrGraph g = build_graph(minimal());
  const std::string dot = to_dot(g);
  CHECK(dot == to_dot(g));
  CHECK(dot_well_formed(dot));
  std::size_t nodes = 0, junctions = 0;
  std::istringstream in(dot);
  for (std::string line; std::getline(in, line);) {
    if (line.find("  n") == 0 && line.find("[label") != std::string::npos) ++nodes;
    if (line.find("shape=point") != std::string::npos) ++junctions;
  }
  CHECK(nodes == 4);
  CHECK(junctions == 1);

  const Scenario hanoi = gen_hanoi(3, default_hanoi_layout(false));
  const std::string hdot = to_dot(augment(build_graph(hanoi.graph)));
  CHECK(hdot.find("n^v") != std::string::npos);
  CHECK(dot_well_formed(hdot));
}
