#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eaog/domain_model.hpp"

namespace eaog {

struct NodeId {
  std::uint32_t value = 0;
  auto operator<=>(const NodeId&) const = default;
  bool operator==(const NodeId&) const = default;
};

enum class NodeKind { Leaf, Internal, Root, Failure, Virtual };

std::string_view to_string(NodeKind kind);
std::optional<NodeKind> node_kind_from_string(std::string_view s);

inline constexpr double kInfiniteCost = std::numeric_limits<double>::infinity();

struct Node {
  NodeId id;
  std::string label;
  NodeKind kind = NodeKind::Internal;
  std::vector<Fact> facts;  // Leaf: conjunction that makes it true
  bool truth = false;       // Leaf only
  bool solved = false;      // derived
  double cost = kInfiniteCost;  // derived
};

struct HyperArc {
  int id = 0;
  NodeId parent;
  std::vector<NodeId> children;  // the AND set
  std::vector<Fact> actions;     // action calls, e.g. move(d1,pegA,pegC)
  double weight = 1.0;
};

// Template form of a graph, as read from a scenario file. Arcs may carry
// guard facts and `?var` placeholders; build_graph takes ground templates.
struct NodeDecl {
  std::uint32_t id = 0;
  NodeKind kind = NodeKind::Internal;
  std::string label;
  std::vector<Fact> facts;
  bool operator==(const NodeDecl&) const = default;
};

struct ArcDecl {
  int id = 0;
  std::uint32_t parent = 0;
  std::vector<std::uint32_t> children;
  double weight = 1.0;
  std::vector<Fact> guards;
  std::vector<Fact> actions;
  bool operator==(const ArcDecl&) const = default;
};

struct GraphTemplate {
  std::string name;
  std::vector<Param> params;
  std::vector<NodeDecl> nodes;
  std::vector<ArcDecl> arcs;
  bool operator==(const GraphTemplate&) const = default;
};

class AndOrGraph {
 public:
  std::span<const Node> nodes() const { return nodes_; }
  std::span<const HyperArc> arcs() const { return arcs_; }
  NodeId root() const { return root_; }
  NodeId failure() const { return failure_; }

  bool contains(NodeId id) const;
  const Node& node(NodeId id) const;  // throws UnknownNode
  std::vector<const HyperArc*> arcs_into(NodeId parent) const;
  std::vector<NodeId> leaves() const;

  /// Children-before-parents order over all nodes.
  std::span<const NodeId> topological_order() const { return topo_; }

 private:
  friend AndOrGraph build_graph(const GraphTemplate&);
  friend AndOrGraph set_leaf_truth(AndOrGraph, const std::map<NodeId, bool>&);

  std::size_t index_of(NodeId id) const;
  void recompute();

  std::vector<Node> nodes_;  // sorted by id
  std::vector<HyperArc> arcs_;
  std::vector<std::vector<std::size_t>> arcs_by_parent_;  // node index -> arc indices
  std::vector<NodeId> topo_;
  NodeId root_;
  NodeId failure_;
};

struct AugmentedGraph {
  AndOrGraph base;
  NodeId virtual_node;
  std::vector<HyperArc> virtual_arcs;
};

/// Validates the template and returns a graph with derived fields computed
/// for all-false leaves.
AndOrGraph build_graph(const GraphTemplate& tmpl);

AndOrGraph set_leaf_truth(AndOrGraph graph, const std::map<NodeId, bool>& assignment);

bool solved(const AndOrGraph& graph, NodeId node);
double node_cost(const AndOrGraph& graph, NodeId node);

AugmentedGraph augment(const AndOrGraph& graph);
AugmentedGraph augment(const AugmentedGraph& graph);  // always AlreadyAugmented

std::string to_dot(const AndOrGraph& graph);
std::string to_dot(const AugmentedGraph& graph);

}  // namespace eaog
