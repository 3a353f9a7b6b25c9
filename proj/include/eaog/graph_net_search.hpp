#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "eaog/andor_graph.hpp"
#include "eaog/geometric_world.hpp"
#include "eaog/scenario.hpp"

namespace eaog {

enum class TransitionReason { MotionFailure, NoFeasibleState, StageComplete };
std::string_view to_string(TransitionReason r);

struct Transition {
  std::size_t from_graph = 0;
  std::size_t to_graph = 0;
  TransitionReason reason = TransitionReason::StageComplete;
  std::vector<Fact> carried_knowledge;
  double timestamp = 0.0;  // simulated clock
  std::string template_name;
};

struct Candidate {
  NodeId node;
  std::string label;
  HyperArc arc;
  std::vector<std::string> agents;
  double est_cost = kInfiniteCost;

  /// Identity used for failure memoization: label plus action calls.
  std::string key() const;
};

/// Instantiates a graph template. Template parameters are bound positionally
/// from each knowledge fact; remaining variables are bound by matching arc
/// guards against `facts` and then by enumerating entities of the declared
/// type. Ground templates are returned unchanged.
GraphTemplate instantiate_template(const GraphTemplate& tmpl, const FactSet& facts,
                                   const std::vector<Fact>& knowledge, const Scenario& scenario);

struct NetworkOptions {
  std::size_t depth_cap = 512;  // maximum number of expansions
};

class GraphNetwork {
 public:
  /// Bootstraps the network with the scenario's main graph (depth 1).
  GraphNetwork(Scenario scenario, const WorldState& world, NetworkOptions options = {});

  const Scenario& scenario() const { return scenario_; }
  const std::vector<AugmentedGraph>& graphs() const { return graphs_; }
  const std::vector<Transition>& transitions() const { return transitions_; }
  const std::vector<std::string>& graph_templates() const { return template_names_; }
  std::size_t active() const { return active_; }
  const AugmentedGraph& active_graph() const { return graphs_[active_]; }
  const std::vector<Fact>& knowledge(std::size_t graph) const { return knowledge_[graph]; }
  const NetworkOptions& options() const { return options_; }

  /// Sets the active graph's leaf truths from world facts plus the graph's knowledge.
  void sync_leaves(const WorldState& world);

  void suppress(const Candidate& candidate, const std::string& world_signature);
  bool is_suppressed(const Candidate& candidate, const std::string& world_signature) const;
  std::size_t suppressed_count(const std::string& world_signature) const;

  /// Appends a graph; used by expand_network.
  std::size_t add_graph(const GraphTemplate& tmpl, const WorldState& world,
                        TransitionReason reason, std::vector<Fact> knowledge);

 private:
  Scenario scenario_;
  NetworkOptions options_;
  std::vector<AugmentedGraph> graphs_;
  std::vector<std::string> template_names_;
  std::vector<std::vector<Fact>> knowledge_;
  std::vector<Transition> transitions_;
  std::size_t active_ = 0;
  std::set<std::pair<std::string, std::string>> suppressed_;
};

/// Nodes of the active graph that are already reached: true leaves, and
/// nodes with an action-free arc whose children are all reached.
std::vector<bool> reached_nodes(const AndOrGraph& graph);

std::vector<Candidate> next_feasible_states(GraphNetwork& net, const WorldState& world);
Candidate next_optimal_state(const std::vector<Candidate>& candidates);
std::size_t expand_network(GraphNetwork& net, const WorldState& world, TransitionReason reason,
                           const std::vector<Fact>& knowledge);
std::size_t network_depth(const GraphNetwork& net);

/// One JSON object per line: index, from, to, reason, facts, timestamp.
std::string transition_log(const GraphNetwork& net);

}  // namespace eaog
