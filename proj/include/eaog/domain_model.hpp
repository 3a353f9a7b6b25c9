#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "eaog/geometry.hpp"

namespace eaog {

/// A ground (or pattern) predicate such as `on(d1,pegA)`. Arguments starting
/// with `?` are variables; `$agent` is bound when an agent is assigned.
struct Fact {
  std::string predicate;
  std::vector<std::string> args;

  auto operator<=>(const Fact&) const = default;
  bool operator==(const Fact&) const = default;

  std::string str() const;
  bool is_ground() const;
};

using FactSet = std::set<Fact>;

/// Parses `name(a,b,c)` (no spaces). Returns nullopt on malformed text.
std::optional<Fact> parse_fact(std::string_view text);

/// Predicates whose truth is derived from geometry by the perception stub.
bool is_derived_predicate(std::string_view predicate);

struct SymbolicState {
  FactSet facts;
  bool operator==(const SymbolicState&) const = default;
};

struct GoalSpec {
  FactSet required_facts;
  bool operator==(const GoalSpec&) const = default;
};

enum class MotionClass { Transit, Transfer, Handover, Symbolic, Wait };

std::string_view to_string(MotionClass c);
std::optional<MotionClass> motion_class_from_string(std::string_view s);

struct Param {
  std::string name;  // "?d"
  std::string type;  // entity kind, or "any"
  bool operator==(const Param&) const = default;
};

struct ActionTemplate {
  std::string name;
  std::vector<Param> params;
  std::vector<Fact> preconditions;
  std::vector<Fact> effects_add;
  std::vector<Fact> effects_del;
  MotionClass motion_class = MotionClass::Symbolic;
  std::string object_slot;  // Transfer: manipulated object parameter
  std::string goal_slot;    // Transfer: goal site, or "hand"; Transit: station
  double duration = 0.0;    // Wait only, seconds

  bool operator==(const ActionTemplate&) const = default;
};

/// A fully ground action. `agent` is empty until grounding assigns one.
struct Action {
  std::string name;
  std::vector<std::string> args;
  std::vector<Fact> preconditions;
  std::vector<Fact> effects_add;
  std::vector<Fact> effects_del;
  MotionClass motion_class = MotionClass::Symbolic;
  std::string object;  // manipulated object (Transfer)
  std::string goal;    // goal entity; "hand" means pick only
  double duration = 0.0;
  std::string agent;

  /// `name(arg,...)`, the form used in graph templates.
  std::string str() const;
  bool operator==(const Action&) const = default;
};

/// Substitutes `args` into the template; `agent` may be empty.
Action instantiate(const ActionTemplate& tmpl, const std::vector<std::string>& args,
                   const std::string& agent = {});

/// Binds `$agent` patterns once an agent is known.
Action bind_agent(Action action, const std::string& agent);

Fact substitute(const Fact& pattern, const std::map<std::string, std::string>& binding);

/// Returns state minus deletes plus adds. Wildcard `*` in a delete argument
/// matches anything. Throws PreconditionViolated naming the first failing fact.
SymbolicState apply_action(const SymbolicState& state, const Action& action);

bool is_goal(const SymbolicState& state, const GoalSpec& goal);

struct MotionBinding {
  MotionClass motion_class = MotionClass::Symbolic;
  std::string object;
  std::string goal;
  std::string agent;
  double duration = 0.0;
  bool geometric() const {
    return motion_class == MotionClass::Transit || motion_class == MotionClass::Transfer ||
           motion_class == MotionClass::Handover;
  }
};

MotionBinding action_motion_class(const Action& action);

struct Scenario;

/// One geometric constraint implied by a symbolic fact.
struct RegionConstraint {
  enum class Kind { PoseBox, AttachedTo, AgentBox };
  std::string entity;
  Kind kind = Kind::PoseBox;
  Box box;            // PoseBox / AgentBox
  double z = 0.0;     // PoseBox: base height implied by the stack below
  std::string frame;  // AttachedTo: agent id whose end effector carries entity
  bool operator==(const RegionConstraint&) const = default;
};

struct ConfigRegion {
  std::vector<RegionConstraint> constraints;  // empty = unconstrained
  bool unconstrained() const { return constraints.empty(); }
  const RegionConstraint* find(std::string_view entity) const;
};

/// Half size of a placement goal region, meters. Alternate goal samples stay
/// inside it, so state_region boxes use the same tolerance.
inline constexpr double kRegionTolerance = 0.01;

ConfigRegion state_region(const SymbolicState& state, const Scenario& scenario);

}  // namespace eaog
