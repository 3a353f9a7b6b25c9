#include "eaog/andor_graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <sstream>

#include "eaog/errors.hpp"
#include "eaog/scenario_dsl.hpp"

namespace eaog {

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Leaf: return "leaf";
    case NodeKind::Internal: return "internal";
    case NodeKind::Root: return "root";
    case NodeKind::Failure: return "failure";
    case NodeKind::Virtual: return "virtual";
  }
  return "internal";
}

std::optional<NodeKind> node_kind_from_string(std::string_view s) {
  if (s == "leaf") return NodeKind::Leaf;
  if (s == "internal") return NodeKind::Internal;
  if (s == "root") return NodeKind::Root;
  if (s == "failure") return NodeKind::Failure;
  if (s == "virtual") return NodeKind::Virtual;
  return std::nullopt;
}

namespace {

std::string node_name(std::uint32_t id) { return "node " + std::to_string(id); }

}  // namespace

bool AndOrGraph::contains(NodeId id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                             [](const Node& n, NodeId v) { return n.id < v; });
  return it != nodes_.end() && it->id == id;
}

std::size_t AndOrGraph::index_of(NodeId id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                             [](const Node& n, NodeId v) { return n.id < v; });
  if (it == nodes_.end() || it->id != id) {
    throw Error(ErrorCode::UnknownNode, node_name(id.value),
                "unknown " + node_name(id.value));
  }
  return static_cast<std::size_t>(it - nodes_.begin());
}

const Node& AndOrGraph::node(NodeId id) const { return nodes_[index_of(id)]; }

std::vector<const HyperArc*> AndOrGraph::arcs_into(NodeId parent) const {
  std::vector<const HyperArc*> out;
  for (std::size_t a : arcs_by_parent_[index_of(parent)]) out.push_back(&arcs_[a]);
  return out;
}

std::vector<NodeId> AndOrGraph::leaves() const {
  std::vector<NodeId> out;
  for (const auto& n : nodes_) {
    if (n.kind == NodeKind::Leaf) out.push_back(n.id);
  }
  return out;
}

void AndOrGraph::recompute() {
  for (NodeId id : topo_) {
    Node& n = nodes_[index_of(id)];
    switch (n.kind) {
      case NodeKind::Leaf:
        n.solved = n.truth;
        n.cost = n.truth ? 0.0 : kInfiniteCost;
        continue;
      case NodeKind::Failure:
      case NodeKind::Virtual:
        n.solved = false;
        n.cost = kInfiniteCost;
        continue;
      default:
        break;
    }
    n.solved = false;
    n.cost = kInfiniteCost;
    for (std::size_t a : arcs_by_parent_[index_of(id)]) {
      const HyperArc& arc = arcs_[a];
      bool all = true;
      double c = arc.weight;
      for (NodeId child : arc.children) {
        const Node& cn = nodes_[index_of(child)];
        all = all && cn.solved;
        c += cn.cost;
      }
      n.solved = n.solved || all;
      if (c < n.cost) n.cost = c;
    }
  }
}

AndOrGraph build_graph(const GraphTemplate& tmpl) {
  AndOrGraph g;
  std::set<std::uint32_t> ids;
  std::optional<NodeId> root, failure;
  for (const auto& decl : tmpl.nodes) {
    if (!ids.insert(decl.id).second) {
      throw Error(ErrorCode::DuplicateNodeId, node_name(decl.id),
                  "duplicate " + node_name(decl.id));
    }
    if (decl.kind == NodeKind::Virtual) {
      throw Error(ErrorCode::InvalidNode, node_name(decl.id),
                  "virtual nodes are added by augmentation only (" + node_name(decl.id) + ")");
    }
    if (decl.kind == NodeKind::Root) {
      if (root) {
        throw Error(ErrorCode::InvalidNode, node_name(decl.id),
                    "second root " + node_name(decl.id));
      }
      root = NodeId{decl.id};
    }
    if (decl.kind == NodeKind::Failure) {
      if (failure) {
        throw Error(ErrorCode::InvalidNode, node_name(decl.id),
                    "second failure node " + node_name(decl.id));
      }
      failure = NodeId{decl.id};
    }
    Node n;
    n.id = NodeId{decl.id};
    n.label = decl.label;
    n.kind = decl.kind;
    n.facts = decl.facts;
    g.nodes_.push_back(std::move(n));
  }
  if (!root) throw Error(ErrorCode::MissingRoot, "root", "graph " + tmpl.name + " has no root");
  if (!failure) {
    throw Error(ErrorCode::MissingFailure, "failure", "graph " + tmpl.name + " has no failure node");
  }
  std::sort(g.nodes_.begin(), g.nodes_.end(), [](const Node& a, const Node& b) { return a.id < b.id; });
  g.root_ = *root;
  g.failure_ = *failure;
  g.arcs_by_parent_.assign(g.nodes_.size(), {});

  std::set<int> arc_ids;
  for (const auto& decl : tmpl.arcs) {
    const std::string arc_name = "arc " + std::to_string(decl.id);
    if (!arc_ids.insert(decl.id).second) {
      throw Error(ErrorCode::InvalidArc, arc_name, "duplicate " + arc_name);
    }
    auto check = [&](std::uint32_t id) {
      if (!ids.contains(id)) {
        throw Error(ErrorCode::DanglingReference, node_name(id),
                    arc_name + " references undefined " + node_name(id));
      }
    };
    check(decl.parent);
    if (decl.children.empty()) throw Error(ErrorCode::InvalidArc, arc_name, arc_name + " has no children");
    for (auto c : decl.children) check(c);
    if (!(decl.weight >= 0.0) || !std::isfinite(decl.weight)) {
      throw Error(ErrorCode::InvalidArc, arc_name, arc_name + " has an invalid weight");
    }
    const std::size_t pi = g.index_of(NodeId{decl.parent});
    if (g.nodes_[pi].kind == NodeKind::Leaf) {
      throw Error(ErrorCode::InvalidArc, arc_name, arc_name + " has a leaf as parent");
    }
    std::set<std::uint32_t> seen;
    HyperArc arc;
    arc.id = decl.id;
    arc.parent = NodeId{decl.parent};
    for (auto c : decl.children) {
      if (c == decl.parent) {
        throw Error(ErrorCode::CycleDetected, node_name(c), arc_name + " is a self-loop on " + node_name(c));
      }
      if (NodeId{c} == g.root_) {
        throw Error(ErrorCode::InvalidArc, arc_name, arc_name + " uses the root as a child");
      }
      if (seen.insert(c).second) arc.children.push_back(NodeId{c});
    }
    arc.actions = decl.actions;
    arc.weight = decl.weight;
    g.arcs_by_parent_[pi].push_back(g.arcs_.size());
    g.arcs_.push_back(std::move(arc));
  }

  // Kahn's algorithm on parent -> child edges, emitting children first.
  const std::size_t n = g.nodes_.size();
  std::vector<std::size_t> pending(n, 0);  // unprocessed children per node
  std::vector<std::vector<std::size_t>> parents_of(n);
  for (std::size_t p = 0; p < n; ++p) {
    std::set<std::size_t> kids;
    for (std::size_t a : g.arcs_by_parent_[p]) {
      for (NodeId c : g.arcs_[a].children) kids.insert(g.index_of(c));
    }
    pending[p] = kids.size();
    for (std::size_t k : kids) parents_of[k].push_back(p);
  }
  std::deque<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (pending[i] == 0) ready.push_back(i);
  }
  while (!ready.empty()) {
    const std::size_t i = ready.front();
    ready.pop_front();
    g.topo_.push_back(g.nodes_[i].id);
    for (std::size_t p : parents_of[i]) {
      if (--pending[p] == 0) ready.push_back(p);
    }
  }
  if (g.topo_.size() != n) {
    for (std::size_t i = 0; i < n; ++i) {
      if (pending[i] != 0) {
        throw Error(ErrorCode::CycleDetected, node_name(g.nodes_[i].id.value),
                    "cycle through " + node_name(g.nodes_[i].id.value));
      }
    }
  }

  // the root must reach at least one leaf
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{g.index_of(g.root_)};
  bool leaf_found = false;
  while (!stack.empty() && !leaf_found) {
    const std::size_t i = stack.back();
    stack.pop_back();
    if (seen[i]) continue;
    seen[i] = true;
    if (g.nodes_[i].kind == NodeKind::Leaf) leaf_found = true;
    for (std::size_t a : g.arcs_by_parent_[i]) {
      for (NodeId c : g.arcs_[a].children) stack.push_back(g.index_of(c));
    }
  }
  if (!leaf_found) {
    throw Error(ErrorCode::RootUnreachable, node_name(g.root_.value),
                "no leaf reaches the root of graph " + tmpl.name);
  }
  g.recompute();
  return g;
}

AndOrGraph set_leaf_truth(AndOrGraph graph, const std::map<NodeId, bool>& assignment) {
  for (const auto& [id, value] : assignment) {
    Node& n = graph.nodes_[graph.index_of(id)];
    if (n.kind != NodeKind::Leaf) {
      throw Error(ErrorCode::NotALeaf, node_name(id.value), node_name(id.value) + " is not a leaf");
    }
    n.truth = value;
  }
  graph.recompute();
  return graph;
}

bool solved(const AndOrGraph& graph, NodeId node) { return graph.node(node).solved; }

double node_cost(const AndOrGraph& graph, NodeId node) { return graph.node(node).cost; }

AugmentedGraph augment(const AndOrGraph& graph) {
  AugmentedGraph out{graph, NodeId{graph.nodes().back().id.value + 1}, {}};
  int next_arc = 0;
  for (const auto& a : graph.arcs()) next_arc = std::max(next_arc, a.id + 1);
  for (NodeId from : {graph.failure(), graph.root()}) {
    HyperArc arc;
    arc.id = next_arc++;
    arc.parent = out.virtual_node;
    arc.children = {from};
    arc.weight = 0.0;
    out.virtual_arcs.push_back(std::move(arc));
  }
  return out;
}

AugmentedGraph augment(const AugmentedGraph& graph) {
  throw Error(ErrorCode::AlreadyAugmented, node_name(graph.virtual_node.value),
              "graph is already augmented");
}

namespace {

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string arc_label(const HyperArc& arc) {
  std::string label = "h" + std::to_string(arc.id) + " w=" + format_number(arc.weight);
  for (const auto& a : arc.actions) label += "\\n" + escape(a.str());
  return label;
}

void write_body(std::ostringstream& os, const AndOrGraph& g) {
  for (const auto& n : g.nodes()) {
    os << "  n" << n.id.value << " [label=\"" << escape(n.label) << "\"";
    switch (n.kind) {
      case NodeKind::Root: os << ", shape=doublecircle, style=bold"; break;
      case NodeKind::Failure: os << ", shape=octagon, color=red"; break;
      case NodeKind::Leaf:
        os << ", shape=box, style=filled, fillcolor=" << (n.truth ? "palegreen" : "white");
        break;
      default: os << ", shape=ellipse"; break;
    }
    os << "];\n";
  }
  for (const auto& arc : g.arcs()) {
    os << "  h" << arc.id << " [shape=point, label=\"\"];\n";
    for (NodeId c : arc.children) os << "  n" << c.value << " -> h" << arc.id << " [arrowhead=none];\n";
    os << "  h" << arc.id << " -> n" << arc.parent.value << " [label=\"" << arc_label(arc) << "\"];\n";
  }
}

}  // namespace

std::string to_dot(const AndOrGraph& graph) {
  std::ostringstream os;
  os << "digraph andor {\n  rankdir=BT;\n";
  write_body(os, graph);
  os << "}\n";
  return os.str();
}

std::string to_dot(const AugmentedGraph& graph) {
  std::ostringstream os;
  os << "digraph andor {\n  rankdir=BT;\n";
  write_body(os, graph.base);
  os << "  n" << graph.virtual_node.value << " [label=\"n^v\", shape=diamond, style=dashed];\n";
  for (const auto& arc : graph.virtual_arcs) {
    os << "  h" << arc.id << " [shape=point, label=\"\"];\n";
    for (NodeId c : arc.children) {
      os << "  n" << c.value << " -> h" << arc.id << " [arrowhead=none, style=dashed];\n";
    }
    os << "  h" << arc.id << " -> n" << arc.parent.value << " [style=dashed];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace eaog
