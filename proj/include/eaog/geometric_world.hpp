#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eaog/domain_model.hpp"
#include "eaog/geometry.hpp"
#include "eaog/scenario.hpp"

namespace eaog {

inline constexpr double kDefaultResolution = 0.02;  // grid cell, m
inline constexpr double kClearance = 0.01;          // footprint inflation, m
inline constexpr int kDefaultBudget = 50000;        // A* expansions
inline constexpr double kLinkRadius = 0.02;         // arm link half width, m
inline constexpr double kGripperRadius = 0.02;      // empty end effector, m
inline constexpr double kRestDistance = 0.15;       // arm rest point ahead of the anchor, m
inline constexpr double kPenetrationTolerance = 1e-9;

struct Object {
  std::string id;
  std::string kind;
  Vec2 position;
  double yaw = 0.0;
  Footprint footprint;
  double height = 0.0;
  bool movable = false;
  std::optional<std::string> stack_on;

  bool operator==(const Object&) const = default;
};

struct Agent {
  std::string id;
  AgentKind kind = AgentKind::Arm;
  Vec2 anchor;        // Arm shoulder, or Base pose
  double yaw = 0.0;   // facing direction
  double reach = 0.0;
  double clearance = 0.0;
  double radius = 0.0;
  std::string mount;
  Vec2 mount_offset;  // in the base frame
  std::optional<std::string> holding;
  Vec2 config;        // Arm: end effector point; Base: pose

  bool operator==(const Agent&) const = default;
};

class World {
 public:
  std::map<std::string, Object> objects;
  std::map<std::string, Agent> agents;
  FactSet symbolic;  // non-derived facts
  double clock = 0.0;
  std::uint64_t rng_seed = 0;
  Box bounds;  // base navigation area

  bool operator==(const World&) const = default;

  const Object& object(std::string_view id) const;
  const Agent& agent(std::string_view id) const;

  /// Height of the bottom face: top of a movable support, 0 otherwise.
  double base_z(std::string_view id) const;
  double top_z(std::string_view id) const;
  /// Follows stack_on down to the first object that is not movable.
  std::string support_root(std::string_view id) const;
  /// Objects stacked (transitively) on `id`, bottom first.
  std::vector<std::string> stack_above(std::string_view id) const;
  /// The object currently on top of the stack rooted at `id` (or id itself).
  std::string stack_top(std::string_view id) const;
  std::optional<std::string> holder_of(std::string_view object) const;

  /// Arm rest point for the arm's current anchor.
  Vec2 rest_point(const Agent& arm) const;
};

World make_world(const Scenario& scenario, std::uint64_t seed = 0);

/// Recomputes mounted arm anchors from their base pose.
void update_mounts(World& world);

enum class TransferMode { PickPlace, Pick, Place };

struct MotionQuery {
  std::string agent;
  MotionClass motion_class = MotionClass::Transfer;
  TransferMode mode = TransferMode::PickPlace;
  Vec2 start;
  Box goal_region;
  Vec2 goal;  // target point inside goal_region
  std::optional<std::string> manipulated;
  std::string goal_entity;  // site, support object, or station
  int max_expansions = kDefaultBudget;
  double resolution = kDefaultResolution;

  bool operator==(const MotionQuery&) const = default;
};

struct MotionResult {
  bool feasible = false;
  std::vector<Vec2> path;
  int expansions_used = 0;
  std::vector<std::string> obstructors;
  double elapsed = 0.0;  // wall clock seconds
  MotionQuery query;
  std::string world_signature;

  bool operator==(const MotionResult&) const = default;
};

/// Collision indicator: true when the agent at `config` touches an obstacle.
/// `exempt` objects (the manipulated object and its source/goal stacks) are
/// ignored. For arms only movable objects taller than the arm clearance count;
/// bases collide with fixed objects of nonzero height.
bool in_collision(const World& world, const Agent& agent, Vec2 config,
                  std::span<const std::string> exempt, double carried_radius,
                  bool ignore_movable = false);

MotionResult plan_motion(const World& world, const MotionQuery& query);
std::vector<std::string> obstructors(const World& world, const MotionQuery& query);

/// Applies a feasible result. Pick attaches, place detaches and stacks,
/// Transit moves the base (and tucks mounted arms). Throws StaleResult when
/// the world changed since planning.
World execute(const World& world, const std::string& agent, const MotionResult& result,
              const Action& action);

/// Applies the effect of a motion along `path` without staleness checks.
World commit_motion(World world, const MotionQuery& query, std::span<const Vec2> path);

/// Applies a Symbolic or Wait action (facts and clock only).
World execute_symbolic(const World& world, const Action& action);

struct ObjectPose {
  Vec2 position;
  double yaw = 0.0;
  std::optional<std::string> stack_on;
  bool operator==(const ObjectPose&) const = default;
};

struct WorldState {
  std::map<std::string, ObjectPose> objects;
  std::map<std::string, Vec2> agent_configs;
  std::map<std::string, std::string> holdings;
  double clock = 0.0;
  FactSet derived;   // on / clear / holding / at
  FactSet symbolic;
  std::string signature;  // state_signature of the source world

  FactSet facts() const;
  SymbolicState symbolic_state() const { return {facts()}; }
  bool operator==(const WorldState&) const = default;
};

WorldState snapshot(const World& world);
FactSet derived_facts(const World& world);

/// Hash of object poses (1e-9 m) and facts. Used for candidate memoization.
std::string state_signature(const World& world);
/// state_signature plus agent configurations and holdings.
std::string full_signature(const World& world);

/// Total plan_motion invocations in this process.
std::uint64_t plan_motion_invocations();

}  // namespace eaog
