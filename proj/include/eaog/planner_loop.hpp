#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "eaog/graph_net_search.hpp"
#include "eaog/scenario.hpp"
#include "eaog/tmp_interface.hpp"

namespace eaog {

struct RunConfig {
  std::uint64_t seed = 0;
  std::size_t depth_cap = 512;
  int retries = 5;
  double grid_resolution = kDefaultResolution;
  int max_expansions = kDefaultBudget;
};

/// Throws ConfigInvalid for non-positive numeric fields.
void validate(const RunConfig& config);

enum class FinalStatus { GoalAchieved, DepthLimit, Unsolvable };
std::string_view to_string(FinalStatus s);

enum class Decision { ExpandWithKnowledge, TryNextCandidate };
std::string_view to_string(Decision d);

struct FailureDecision {
  Decision decision = Decision::TryNextCandidate;
  std::vector<Fact> knowledge;
};

struct PlanStep {
  std::size_t graph_index = 0;
  Candidate candidate;
  std::vector<TaskOutcome> outcomes;
  std::string world_signature;  // before execution
  double sim_time = 0.0;        // after the step
  bool failed = false;
  Decision decision = Decision::TryNextCandidate;  // meaningful when failed
};

struct AgentMetrics {
  double motion_seconds = 0.0;
  long attempts = 0;
};

struct MetricsReport {
  std::size_t depth = 1;
  std::size_t objects = 0;
  double expansion_seconds = 0.0;
  double search_seconds = 0.0;
  double task_planning_seconds = 0.0;
  std::map<std::string, AgentMetrics> agents;
  long plan_motion_calls = 0;
  std::size_t executed_actions = 0;
  std::size_t executed_steps = 0;
  std::size_t handovers = 0;
};

struct PlanTrace {
  std::string scenario;
  std::uint64_t seed = 0;
  std::vector<PlanStep> steps;
  std::vector<Transition> transitions;
  std::vector<std::string> graph_templates;
  FinalStatus final_status = FinalStatus::Unsolvable;
  MetricsReport metrics;
  World initial_world;
  World final_world;
  // wall clock spent in graph expansion and in search, per call
  std::vector<double> expansion_times;
  std::vector<double> search_times;
};

/// Runs the expand-search-ground-dispatch loop until the goal holds, the
/// depth cap is hit, or no expansion can make progress.
PlanTrace run(const Scenario& scenario, const RunConfig& config);

/// Same loop, also returning the final graph network (for DOT export).
PlanTrace run(const Scenario& scenario, const RunConfig& config, std::vector<AugmentedGraph>* graphs);

FailureDecision handle_failure(const GraphNetwork& net, const TaskOutcome& outcome,
                               const World& world);

MetricsReport metrics(const PlanTrace& trace);

}  // namespace eaog
