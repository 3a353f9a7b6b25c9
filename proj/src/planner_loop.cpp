#include "eaog/planner_loop.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <set>

#include "eaog/errors.hpp"

namespace eaog {

std::string_view to_string(FinalStatus s) {
  switch (s) {
    case FinalStatus::GoalAchieved: return "GoalAchieved";
    case FinalStatus::DepthLimit: return "DepthLimit";
    case FinalStatus::Unsolvable: return "Unsolvable";
  }
  return "Unsolvable";
}

std::string_view to_string(Decision d) {
  return d == Decision::ExpandWithKnowledge ? "ExpandWithKnowledge" : "TryNextCandidate";
}

void validate(const RunConfig& config) {
  auto bad = [](const std::string& field) {
    throw Error(ErrorCode::ConfigInvalid, field, field + " must be positive");
  };
  if (config.depth_cap == 0) bad("depth_cap");
  if (config.retries < 0) throw Error(ErrorCode::ConfigInvalid, "retries", "retries must not be negative");
  if (!(config.grid_resolution > 0.0) || !std::isfinite(config.grid_resolution)) bad("grid_resolution");
  if (config.max_expansions <= 0) bad("max_expansions");
}

FailureDecision handle_failure(const GraphNetwork& net, const TaskOutcome& outcome, const World& world) {
  FailureDecision d;
  if (outcome.status != OutcomeStatus::MotionInfeasible || outcome.obstructors.empty()) return d;
  std::vector<Fact> knowledge;
  const std::string target = outcome.action.object.empty() ? outcome.action.goal : outcome.action.object;
  for (const auto& o : outcome.obstructors) knowledge.push_back({"obstructs", {o, target}});
  // only worth expanding when the rearrangement stage has something to offer
  const GraphTemplate* stage = net.scenario().find_stage(kRearrangeStage);
  if (stage == nullptr) return d;
  try {
    (void)build_graph(instantiate_template(*stage, snapshot(world).facts(), knowledge, net.scenario()));
  } catch (const Error&) {
    return d;
  }
  d.decision = Decision::ExpandWithKnowledge;
  d.knowledge = std::move(knowledge);
  return d;
}

namespace {

// Added to a candidate's cost per earlier visit of the state it leads to.
constexpr double kRevisitPenalty = 2.0;

using steady = std::chrono::steady_clock;

double seconds_since(steady::time_point t0) {
  return std::chrono::duration<double>(steady::now() - t0).count();
}

bool goal_entities_known(const Scenario& s) {
  for (const auto& f : s.goal.required_facts) {
    for (const auto& a : f.args) {
      if (!s.has_entity(a)) return false;
    }
  }
  return true;
}

// Checks symbolic preconditions before anything is sent to the motion level.
bool preconditions_hold(const std::vector<Action>& actions, const FactSet& facts) {
  SymbolicState s{facts};
  try {
    for (const auto& a : actions) s = apply_action(s, a);
  } catch (const Error&) {
    return false;
  }
  return true;
}

// Symbolic successor of a candidate, or empty when its actions do not apply.
std::string successor_key(const std::vector<Fact>& calls, const Scenario& scenario, const FactSet& facts) {
  SymbolicState s{facts};
  try {
    for (const auto& call : calls) s = apply_action(s, scenario.resolve_action(call));
  } catch (const Error&) {
    return {};
  }
  std::string key;
  for (const auto& f : s.facts) key += f.str() + ";";
  return key;
}

std::string state_key(const FactSet& facts) {
  std::string key;
  for (const auto& f : facts) key += f.str() + ";";
  return key;
}

}  // namespace

PlanTrace run(const Scenario& scenario, const RunConfig& config) { return run(scenario, config, nullptr); }

PlanTrace run(const Scenario& scenario, const RunConfig& config, std::vector<AugmentedGraph>* graphs) {
  validate(config);
  const std::uint64_t calls_before = plan_motion_invocations();
  PlanTrace trace;
  trace.scenario = scenario.name;
  trace.seed = config.seed;
  World world = make_world(scenario, config.seed);
  trace.initial_world = world;

  auto t0 = steady::now();
  GraphNetwork net(scenario, snapshot(world), NetworkOptions{config.depth_cap});
  trace.expansion_times.push_back(seconds_since(t0));

  const PlanningBudget budget{config.retries, config.max_expansions, config.grid_resolution, config.seed};
  std::set<std::string> expansion_signatures;
  // symbolic states already executed into, with visit counts
  std::map<std::string, int> visits;
  visits[state_key(snapshot(world).facts())] = 1;
  auto expand = [&](TransitionReason reason, const std::vector<Fact>& knowledge) {
    const auto t = steady::now();
    try {
      expand_network(net, snapshot(world), reason, knowledge);
    } catch (const Error& e) {
      trace.expansion_times.push_back(seconds_since(t));
      if (e.code() == ErrorCode::DepthLimitExceeded) return false;
      throw;
    }
    trace.expansion_times.push_back(seconds_since(t));
    return true;
  };

  if (!goal_entities_known(scenario)) {
    trace.final_status = FinalStatus::Unsolvable;
  } else {
    while (true) {
      const WorldState ws = snapshot(world);
      if (is_goal(ws.symbolic_state(), scenario.goal)) {
        trace.final_status = FinalStatus::GoalAchieved;
        break;
      }
      auto ts = steady::now();
      std::vector<Candidate> cands = next_feasible_states(net, ws);
      if (cands.empty()) {
        trace.search_times.push_back(seconds_since(ts));
        if (net.graph_templates()[net.active()] != scenario.graph.name) {
          // a rearrangement stage with nothing left to do hands back to the main graph
          if (!expand(TransitionReason::NoFeasibleState, {})) {
            trace.final_status = FinalStatus::DepthLimit;
            break;
          }
          continue;
        }
        const std::string sig =
            scenario.graph.name + "|" + ws.signature + "|" + std::to_string(net.suppressed_count(ws.signature));
        if (!expansion_signatures.insert(sig).second) {
          trace.final_status = FinalStatus::Unsolvable;
          break;
        }
        if (!expand(TransitionReason::NoFeasibleState, {})) {
          trace.final_status = FinalStatus::DepthLimit;
          break;
        }
        continue;
      }
      for (auto& c : cands) {
        if (c.arc.actions.empty()) continue;
        auto it = visits.find(successor_key(c.arc.actions, scenario, ws.facts()));
        if (it != visits.end()) c.est_cost += kRevisitPenalty * it->second;
      }
      const Candidate cand = next_optimal_state(cands);
      trace.search_times.push_back(seconds_since(ts));

      PlanStep step;
      step.graph_index = net.active();
      step.candidate = cand;
      step.world_signature = ws.signature;

      std::vector<Action> actions;
      for (const auto& call : cand.arc.actions) actions.push_back(scenario.resolve_action(call));
      if (!preconditions_hold(actions, ws.facts())) {
        TaskOutcome o;
        o.action = actions.empty() ? Action{} : actions.front();
        o.status = OutcomeStatus::GroundingFailed;
        step.outcomes.push_back(std::move(o));
      } else {
        try {
          const GroundingResult g = ground(actions, cand.agents, world, scenario);
          step.outcomes = dispatch(g, world, budget);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::GroundingFailed) throw;
          TaskOutcome o;
          o.action = actions.front();
          o.status = OutcomeStatus::GroundingFailed;
          step.outcomes.push_back(std::move(o));
        }
      }
      step.sim_time = world.clock;
      step.failed = std::any_of(step.outcomes.begin(), step.outcomes.end(),
                                [](const TaskOutcome& o) { return o.status != OutcomeStatus::Executed; });
      if (!step.failed) {
        trace.steps.push_back(std::move(step));
        ++visits[state_key(snapshot(world).facts())];
        if (is_goal(snapshot(world).symbolic_state(), scenario.goal)) continue;
        if (!expand(TransitionReason::StageComplete, {})) {
          trace.final_status = FinalStatus::DepthLimit;
          break;
        }
        continue;
      }
      const FailureDecision d = handle_failure(net, step.outcomes.back(), world);
      step.decision = d.decision;
      trace.steps.push_back(std::move(step));
      // never retry the same candidate from the same world state
      net.suppress(cand, ws.signature);
      if (d.decision == Decision::ExpandWithKnowledge) {
        if (!expand(TransitionReason::MotionFailure, d.knowledge)) {
          trace.final_status = FinalStatus::DepthLimit;
          break;
        }
      }
    }
  }

  trace.transitions = net.transitions();
  trace.graph_templates = net.graph_templates();
  trace.final_world = world;
  trace.metrics.plan_motion_calls = static_cast<long>(plan_motion_invocations() - calls_before);
  trace.metrics = metrics(trace);
  if (graphs != nullptr) *graphs = net.graphs();
  return trace;
}

MetricsReport metrics(const PlanTrace& trace) {
  MetricsReport m;
  m.depth = std::max<std::size_t>(1, trace.graph_templates.size());
  for (const auto& [id, o] : trace.initial_world.objects) {
    if (o.movable) ++m.objects;
  }
  for (const auto& [id, a] : trace.initial_world.agents) m.agents[id] = {};
  for (double t : trace.expansion_times) m.expansion_seconds += t;
  for (double t : trace.search_times) m.search_seconds += t;
  m.task_planning_seconds = m.expansion_seconds + m.search_seconds;
  for (const auto& step : trace.steps) {
    if (!step.failed) ++m.executed_steps;
    for (const auto& o : step.outcomes) {
      for (const auto& rec : o.attempt_log) {
        auto& am = m.agents[rec.agent];
        ++am.attempts;
        am.motion_seconds += rec.wall_seconds;
      }
      if (o.status != OutcomeStatus::Executed) continue;
      ++m.executed_actions;
      if (o.motion_class == MotionClass::Handover) ++m.handovers;
    }
  }
  m.plan_motion_calls = trace.metrics.plan_motion_calls;
  return m;
}

}  // namespace eaog
