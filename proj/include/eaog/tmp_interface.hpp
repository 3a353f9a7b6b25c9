#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eaog/domain_model.hpp"
#include "eaog/geometric_world.hpp"

namespace eaog {

struct GroundedQuery {
  Action action;
  std::string agent;
  MotionQuery query;
  int group = 0;  // queries sharing a group (a handover pair) commit together
};

struct GroundingResult {
  std::vector<GroundedQuery> queries;
  std::vector<Action> skipped_symbolic;
  std::string world_signature;  // full_signature of the grounded world
};

/// Grounds symbolic actions against the world. Agents are assigned per
/// action (nearest anchor with the target in reach) unless `agents` pins one;
/// a transfer no single arm can complete is rewritten into a Handover pair.
/// Throws GroundingFailed naming the action.
GroundingResult ground(const std::vector<Action>& actions, const std::vector<std::string>& agents,
                       const World& world, const Scenario& scenario);

enum class OutcomeStatus { Executed, MotionInfeasible, GroundingFailed };
std::string_view to_string(OutcomeStatus s);

struct AttemptRecord {
  std::string agent;
  bool feasible = false;
  int expansions = 0;
  double wall_seconds = 0.0;
};

struct TaskOutcome {
  Action action;
  std::string agent;
  MotionClass motion_class = MotionClass::Symbolic;
  OutcomeStatus status = OutcomeStatus::Executed;
  std::vector<std::string> obstructors;
  double task_seconds = 0.0;    // wall clock
  double motion_seconds = 0.0;  // wall clock
  int attempts = 0;
  std::vector<AttemptRecord> attempt_log;
  std::vector<Vec2> path;
};

struct PlanningBudget {
  int retries = 5;
  int max_expansions = kDefaultBudget;
  double resolution = kDefaultResolution;
  std::uint64_t seed = 0;
};

/// Alternate goal sample `index` (>= 1) inside `region`; deterministic in seed.
Vec2 alternate_goal(const Box& region, int index, std::uint64_t seed);

/// Plans and executes grounded queries in order, then applies symbolic
/// actions. Stops at the first infeasible query; `world` then reflects only
/// the groups executed before it. Throws StaleWorld on signature mismatch.
std::vector<TaskOutcome> dispatch(const GroundingResult& g, World& world,
                                  const PlanningBudget& budget);

}  // namespace eaog
