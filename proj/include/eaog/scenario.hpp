#pragma once

#include <string>
#include <vector>

#include "eaog/andor_graph.hpp"
#include "eaog/domain_model.hpp"
#include "eaog/geometry.hpp"

namespace eaog {

// Object kinds with built-in meaning.
inline constexpr std::string_view kStationKind = "station";
inline constexpr std::string_view kHandoverKind = "handover";
inline constexpr std::string_view kFixtureKind = "fixture";

struct ObjectDecl {
  std::string id;
  std::string kind;
  Vec2 position;
  double yaw = 0.0;
  Footprint footprint;
  double height = 0.0;
  bool movable = false;
  std::string support;  // empty when resting on the floor / table surface

  bool operator==(const ObjectDecl&) const = default;
};

enum class AgentKind { Arm, Base };

struct AgentDecl {
  std::string id;
  AgentKind kind = AgentKind::Arm;
  Vec2 position;  // arm anchor, base pose, or mount offset in the base frame
  double yaw = 0.0;
  double reach = 0.0;      // Arm
  double clearance = 0.0;  // Arm: objects taller than this block the arm
  double radius = 0.0;     // Base footprint
  std::string mount;       // Arm mounted on this base, if any

  bool operator==(const AgentDecl&) const = default;
};

struct PredicateDecl {
  std::string name;
  int arity = 0;
  bool operator==(const PredicateDecl&) const = default;
};

/// File embodiment of a task-motion planning domain plus its problem.
/// Every entity list is kept sorted by id.
struct Scenario {
  std::string name;
  std::vector<ObjectDecl> objects;
  std::vector<AgentDecl> agents;
  std::vector<PredicateDecl> predicates;
  std::vector<ActionTemplate> actions;
  FactSet init;
  GoalSpec goal;
  GraphTemplate graph;
  std::vector<GraphTemplate> stages;

  bool operator==(const Scenario&) const = default;

  const ObjectDecl* find_object(std::string_view id) const;
  const AgentDecl* find_agent(std::string_view id) const;
  const ActionTemplate* find_action(std::string_view name) const;
  const GraphTemplate* find_stage(std::string_view name) const;
  bool has_entity(std::string_view id) const;
  /// Kind of an object, "arm"/"base" for agents, empty if unknown.
  std::string entity_kind(std::string_view id) const;
  std::vector<std::string> entity_ids() const;

  /// Resolves an action call such as `move(d1,pegA,pegC)`.
  Action resolve_action(const Fact& call) const;
};

/// Sorts every entity list and template by id, the canonical order.
void canonicalize(Scenario& scenario);

/// Name of the stage template used when a motion failure reveals obstructors.
inline constexpr std::string_view kRearrangeStage = "rearrange";

}  // namespace eaog
