#include "eaog/tmp_interface.hpp"

#include <algorithm>
#include <chrono>
#include <tuple>

#include "eaog/errors.hpp"
#include "eaog/scenario.hpp"

namespace eaog {

std::string_view to_string(OutcomeStatus s) {
  switch (s) {
    case OutcomeStatus::Executed: return "Executed";
    case OutcomeStatus::MotionInfeasible: return "MotionInfeasible";
    case OutcomeStatus::GroundingFailed: return "GroundingFailed";
  }
  return "Executed";
}

namespace {

[[noreturn]] void grounding_failed(const Action& a, const std::string& why) {
  throw Error(ErrorCode::GroundingFailed, a.str(), a.str() + ": " + why);
}

Box region_at(Vec2 p) { return Box{p, kRegionTolerance, kRegionTolerance}; }

bool reaches(const Agent& arm, Vec2 p) { return distance(arm.anchor, p) <= arm.reach + 1e-9; }

// Agent named in the action arguments, if any, of the requested kind.
std::string pinned_agent(const Action& a, const World& w, AgentKind kind) {
  if (!a.agent.empty()) return a.agent;
  for (const auto& arg : a.args) {
    auto it = w.agents.find(arg);
    if (it != w.agents.end() && it->second.kind == kind) return arg;
  }
  return {};
}

std::vector<const Agent*> arms_allowed(const World& w, const std::vector<std::string>& agents,
                                       const std::string& pinned) {
  std::vector<const Agent*> out;
  for (const auto& [id, a] : w.agents) {
    if (a.kind != AgentKind::Arm) continue;
    if (!pinned.empty() && id != pinned) continue;
    if (!agents.empty() && std::find(agents.begin(), agents.end(), id) == agents.end()) continue;
    out.push_back(&a);
  }
  return out;
}

MotionQuery transfer_query(const World& w, const Agent& arm, const std::string& object, const std::string& goal_entity,
                           TransferMode mode, MotionClass cls) {
  MotionQuery q;
  q.agent = arm.id;
  q.motion_class = cls;
  q.mode = mode;
  q.start = arm.config;
  q.manipulated = object;
  q.goal_entity = goal_entity;
  q.goal = mode == TransferMode::Pick ? w.object(object).position : w.object(goal_entity).position;
  q.goal_region = region_at(q.goal);
  return q;
}

}  // namespace

GroundingResult ground(const std::vector<Action>& actions, const std::vector<std::string>& agents,
                       const World& world, const Scenario& scenario) {
  GroundingResult out;
  out.world_signature = full_signature(world);
  World predicted = world;
  int group = 0;
  for (const Action& action : actions) {
    switch (action.motion_class) {
      case MotionClass::Symbolic:
      case MotionClass::Wait:
        out.skipped_symbolic.push_back(action);
        continue;
      case MotionClass::Transit: {
        if (!predicted.objects.contains(action.goal)) grounding_failed(action, "unknown station " + action.goal);
        std::string base = pinned_agent(action, predicted, AgentKind::Base);
        if (base.empty()) {
          double best = kInfiniteCost;
          for (const auto& [id, a] : predicted.agents) {
            if (a.kind != AgentKind::Base) continue;
            const double d = distance(a.config, predicted.object(action.goal).position);
            if (d < best) {
              best = d;
              base = id;
            }
          }
        }
        if (base.empty()) grounding_failed(action, "no mobile base");
        MotionQuery q;
        q.agent = base;
        q.motion_class = MotionClass::Transit;
        q.start = predicted.agent(base).config;
        q.goal = predicted.object(action.goal).position;
        q.goal_region = region_at(q.goal);
        q.goal_entity = action.goal;
        out.queries.push_back({bind_agent(action, base), base, q, group++});
        predicted = commit_motion(std::move(predicted), q, {});
        continue;
      }
      case MotionClass::Transfer:
      case MotionClass::Handover:
        break;
    }
    if (!predicted.objects.contains(action.object)) grounding_failed(action, "unknown object " + action.object);
    const bool pick_only = action.goal == "hand";
    if (!pick_only && !predicted.objects.contains(action.goal)) {
      grounding_failed(action, "unknown goal " + action.goal);
    }
    const std::string pinned = pinned_agent(action, predicted, AgentKind::Arm);

    // the holder must finish a carried object
    if (auto holder = predicted.holder_of(action.object)) {
      if (pick_only) grounding_failed(action, action.object + " is already held");
      if (!pinned.empty() && pinned != *holder) grounding_failed(action, *holder + " holds " + action.object);
      const Agent& arm = predicted.agent(*holder);
      MotionQuery q = transfer_query(predicted, arm, action.object, action.goal, TransferMode::Place, MotionClass::Transfer);
      if (!reaches(arm, q.goal)) grounding_failed(action, *holder + " cannot reach " + action.goal);
      out.queries.push_back({bind_agent(action, *holder), *holder, q, group++});
      predicted = commit_motion(std::move(predicted), q, {});
      continue;
    }

    const Vec2 source = predicted.object(action.object).position;
    const Vec2 target = pick_only ? source : predicted.object(action.goal).position;
    const auto arms = arms_allowed(predicted, agents, pinned);
    const Agent* chosen = nullptr;
    for (const Agent* a : arms) {
      if (!reaches(*a, source) || !reaches(*a, target)) continue;
      if (chosen == nullptr || distance(a->anchor, source) < distance(chosen->anchor, source)) chosen = a;
    }
    if (chosen != nullptr) {
      MotionQuery q = transfer_query(predicted, *chosen, action.object, action.goal,
                                     pick_only ? TransferMode::Pick : TransferMode::PickPlace, MotionClass::Transfer);
      out.queries.push_back({bind_agent(action, chosen->id), chosen->id, q, group++});
      predicted = commit_motion(std::move(predicted), q, {});
      continue;
    }
    if (pick_only) grounding_failed(action, "no arm reaches " + action.object);

    // handover through a stand both arms reach
    std::tuple<double, double, std::string, std::string, std::string> best{kInfiniteCost, kInfiniteCost, "", "", ""};
    for (const auto& [sid, site] : predicted.objects) {
      if (site.kind != kHandoverKind) continue;
      for (const Agent* giver : arms) {
        if (!reaches(*giver, source) || !reaches(*giver, site.position)) continue;
        for (const Agent* taker : arms) {
          if (taker == giver || !reaches(*taker, site.position) || !reaches(*taker, target)) continue;
          auto cand = std::make_tuple(distance(giver->anchor, source), distance(taker->anchor, target), sid,
                                      giver->id, taker->id);
          if (cand < best) best = cand;
        }
      }
    }
    const auto& [d0, d1, site, giver, taker] = best;
    if (site.empty()) grounding_failed(action, "no arm or handover pair reaches both ends");
    MotionQuery q1 = transfer_query(predicted, predicted.agent(giver), action.object, site, TransferMode::PickPlace,
                                    MotionClass::Handover);
    out.queries.push_back({bind_agent(action, giver), giver, q1, group});
    predicted = commit_motion(std::move(predicted), q1, {});
    MotionQuery q2 = transfer_query(predicted, predicted.agent(taker), action.object, action.goal,
                                    TransferMode::PickPlace, MotionClass::Handover);
    out.queries.push_back({bind_agent(action, taker), taker, q2, group});
    predicted = commit_motion(std::move(predicted), q2, {});
    ++group;
  }
  (void)scenario;
  return out;
}

namespace {

double radical_inverse(std::uint64_t i, std::uint64_t base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

}  // namespace

Vec2 alternate_goal(const Box& region, int index, std::uint64_t seed) {
  const std::uint64_t k = static_cast<std::uint64_t>(index) + seed % 4096;
  const double u = radical_inverse(k, 2), v = radical_inverse(k, 3);
  return {region.center.x + (2.0 * u - 1.0) * region.hx, region.center.y + (2.0 * v - 1.0) * region.hy};
}

std::vector<TaskOutcome> dispatch(const GroundingResult& g, World& world, const PlanningBudget& budget) {
  if (full_signature(world) != g.world_signature) {
    throw Error(ErrorCode::StaleWorld, "", "world changed since grounding");
  }
  using clock = std::chrono::steady_clock;
  std::vector<TaskOutcome> outcomes;
  std::size_t i = 0;
  while (i < g.queries.size()) {
    // one group (a single query or a handover pair) at a time
    std::size_t end = i;
    while (end < g.queries.size() && g.queries[end].group == g.queries[i].group) ++end;
    World scratch = world;
    std::vector<TaskOutcome> group_out;
    std::vector<AttemptRecord> carried_log;
    bool failed = false;
    for (std::size_t k = i; k < end && !failed; ++k) {
      const GroundedQuery& gq = g.queries[k];
      const auto t0 = clock::now();
      TaskOutcome o;
      o.action = gq.action;
      o.agent = gq.agent;
      o.motion_class = gq.query.motion_class;
      MotionQuery q = gq.query;
      q.start = scratch.agent(gq.agent).config;  // perception refresh
      q.max_expansions = budget.max_expansions;
      q.resolution = budget.resolution;
      bool done = false;
      bool have_obstructors = false;
      for (int attempt = 0; attempt <= budget.retries && !done; ++attempt) {
        q.goal = attempt == 0 ? gq.query.goal_region.center : alternate_goal(gq.query.goal_region, attempt, budget.seed);
        ++o.attempts;
        MotionResult r;
        try {
          r = plan_motion(scratch, q);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::InvalidQuery) throw;
          o.attempt_log.push_back({gq.agent, false, 0, 0.0});
          break;  // retrying cannot fix the start
        }
        o.motion_seconds += r.elapsed;
        o.attempt_log.push_back({gq.agent, r.feasible, r.expansions_used, r.elapsed});
        if (r.feasible) {
          scratch = execute(scratch, gq.agent, r, gq.action);
          o.path = r.path;
          done = true;
        } else if (!have_obstructors && !r.obstructors.empty()) {
          o.obstructors = r.obstructors;
          have_obstructors = true;
        }
      }
      o.task_seconds = std::chrono::duration<double>(clock::now() - t0).count();
      if (done) {
        o.status = OutcomeStatus::Executed;
        group_out.push_back(std::move(o));
        continue;
      }
      o.status = OutcomeStatus::MotionInfeasible;
      // earlier members of a failed group are rolled back; keep their attempts
      std::vector<AttemptRecord> log;
      for (const auto& prev : group_out) {
        log.insert(log.end(), prev.attempt_log.begin(), prev.attempt_log.end());
        o.attempts += prev.attempts;
        o.motion_seconds += prev.motion_seconds;
        o.task_seconds += prev.task_seconds;
      }
      log.insert(log.end(), o.attempt_log.begin(), o.attempt_log.end());
      o.attempt_log = std::move(log);
      group_out.clear();
      group_out.push_back(std::move(o));
      failed = true;
    }
    outcomes.insert(outcomes.end(), group_out.begin(), group_out.end());
    if (failed) return outcomes;
    world = std::move(scratch);
    i = end;
  }
  for (const Action& a : g.skipped_symbolic) {
    world = execute_symbolic(world, a);
    TaskOutcome o;
    o.action = a;
    o.motion_class = a.motion_class;
    o.status = OutcomeStatus::Executed;
    outcomes.push_back(std::move(o));
  }
  return outcomes;
}

}  // namespace eaog
