#include "eaog/report.hpp"

#include <cmath>
#include <sstream>

namespace eaog {

using ojson = nlohmann::ordered_json;

namespace {

enum Row { kExpansion, kSearch, kRightArm, kLeftArm, kBase };

// Agents map onto the table rows by name; a lone arm counts as the right one.
Row agent_row(const World& w, const std::string& agent) {
  auto it = w.agents.find(agent);
  if (it != w.agents.end() && it->second.kind == AgentKind::Base) return kBase;
  if (agent.find("left") != std::string::npos) return kLeftArm;
  return kRightArm;
}

ojson vec(Vec2 p) { return ojson::array({p.x, p.y}); }

ojson facts_json(const FactSet& facts) {
  ojson out = ojson::array();
  for (const auto& f : facts) out.push_back(f.str());
  return out;
}

ojson calls_json(const std::vector<Fact>& calls) {
  ojson out = ojson::array();
  for (const auto& f : calls) out.push_back(f.str());
  return out;
}

ojson outcome_json(const TaskOutcome& o) {
  ojson j;
  j["action"] = o.action.str();
  j["agent"] = o.agent;
  j["motion_class"] = std::string(to_string(o.motion_class));
  j["status"] = std::string(to_string(o.status));
  j["obstructors"] = o.obstructors;
  j["attempts"] = o.attempts;
  ojson log = ojson::array();
  for (const auto& r : o.attempt_log) {
    log.push_back({{"agent", r.agent}, {"feasible", r.feasible}, {"expansions", r.expansions},
                   {"wall_seconds", r.wall_seconds}});
  }
  j["attempt_log"] = std::move(log);
  ojson path = ojson::array();
  for (Vec2 p : o.path) path.push_back(vec(p));
  j["path"] = std::move(path);
  j["wall_task_seconds"] = o.task_seconds;
  j["wall_motion_seconds"] = o.motion_seconds;
  return j;
}

ojson mask(ojson doc) {
  if (doc.is_object()) {
    for (auto& [key, value] : doc.items()) {
      if (key.find("[s]") != std::string::npos || key.rfind("wall_", 0) == 0) {
        value = 0.0;
      } else {
        value = mask(std::move(value));
      }
    }
  } else if (doc.is_array()) {
    for (auto& v : doc) v = mask(std::move(v));
  }
  return doc;
}

}  // namespace

nlohmann::json world_record(const World& world) {
  ojson objects = ojson::array();
  for (const auto& [id, o] : world.objects) {
    objects.push_back({{"id", id},
                       {"kind", o.kind},
                       {"position", vec(o.position)},
                       {"yaw", o.yaw},
                       {"stack_on", o.stack_on ? ojson(*o.stack_on) : ojson(nullptr)}});
  }
  ojson agents = ojson::array();
  for (const auto& [id, a] : world.agents) {
    agents.push_back({{"id", id},
                      {"anchor", vec(a.anchor)},
                      {"yaw", a.yaw},
                      {"config", vec(a.config)},
                      {"holding", a.holding ? ojson(*a.holding) : ojson(nullptr)}});
  }
  ojson j;
  j["clock"] = world.clock;
  j["signature"] = full_signature(world);
  j["objects"] = std::move(objects);
  j["agents"] = std::move(agents);
  j["facts"] = facts_json(snapshot(world).facts());
  return nlohmann::json::parse(j.dump());
}

nlohmann::json metrics_document(const PlanTrace& trace) {
  const MetricsReport& m = trace.metrics;
  std::vector<std::vector<double>> samples(std::size(kModuleRows));
  samples[kExpansion] = trace.expansion_times;
  samples[kSearch] = trace.search_times;
  double mp[std::size(kModuleRows)] = {};
  long attempts[std::size(kModuleRows)] = {};
  for (const auto& step : trace.steps) {
    for (const auto& o : step.outcomes) {
      for (const auto& r : o.attempt_log) samples[agent_row(trace.initial_world, r.agent)].push_back(r.wall_seconds);
    }
  }
  for (const auto& [id, a] : m.agents) {
    const Row row = agent_row(trace.initial_world, id);
    mp[row] += a.motion_seconds;
    attempts[row] += a.attempts;
  }

  ojson doc;
  doc["scenario"] = trace.scenario;
  doc["seed"] = trace.seed;
  doc["status"] = std::string(to_string(trace.final_status));
  doc["table1"] = {{"Objects", m.objects},
                   {"d", m.depth},
                   {"TP [s]", m.task_planning_seconds},
                   {"Right MP [s]", mp[kRightArm]},
                   {"Right attempts", attempts[kRightArm]},
                   {"Left MP [s]", mp[kLeftArm]},
                   {"Left attempts", attempts[kLeftArm]}};
  ojson rows = ojson::array();
  for (std::size_t i = 0; i < std::size(kModuleRows); ++i) {
    const auto& xs = samples[i];
    double mean = 0.0, var = 0.0;
    for (double x : xs) mean += x;
    if (!xs.empty()) mean /= static_cast<double>(xs.size());
    for (double x : xs) var += (x - mean) * (x - mean);
    if (!xs.empty()) var /= static_cast<double>(xs.size());
    rows.push_back({{"Module", kModuleRows[i]},
                    {"Avg. time [s]", mean},
                    {"Std. dev. [s]", std::sqrt(var)},
                    {"calls", xs.size()}});
  }
  doc["table2"] = std::move(rows);
  ojson agents;
  for (const auto& [id, a] : m.agents) agents[id] = {{"attempts", a.attempts}, {"wall_motion_seconds", a.motion_seconds}};
  doc["agents"] = agents.is_null() ? ojson::object() : std::move(agents);
  doc["plan_motion_calls"] = m.plan_motion_calls;
  doc["executed_actions"] = m.executed_actions;
  doc["executed_steps"] = m.executed_steps;
  doc["handovers"] = m.handovers;
  doc["wall_expansion_seconds"] = m.expansion_seconds;
  doc["wall_search_seconds"] = m.search_seconds;
  return nlohmann::json::parse(doc.dump());
}

std::string trace_jsonl(const PlanTrace& trace) {
  std::ostringstream out;
  ojson world = {{"type", "world"}, {"scenario", trace.scenario}, {"seed", trace.seed}};
  world["world"] = ojson::parse(world_record(trace.initial_world).dump());
  out << world.dump() << '\n';
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const PlanStep& s = trace.steps[i];
    ojson j = {{"type", "step"},
               {"index", i},
               {"graph", s.graph_index},
               {"node", s.candidate.node.value},
               {"label", s.candidate.label},
               {"arc", s.candidate.arc.id},
               {"actions", calls_json(s.candidate.arc.actions)},
               {"est_cost", s.candidate.est_cost},
               {"world_signature", s.world_signature}};
    ojson outcomes = ojson::array();
    for (const auto& o : s.outcomes) outcomes.push_back(outcome_json(o));
    j["outcomes"] = std::move(outcomes);
    j["failed"] = s.failed;
    if (s.failed) j["decision"] = std::string(to_string(s.decision));
    j["sim_time"] = s.sim_time;
    out << j.dump() << '\n';
  }
  for (std::size_t i = 0; i < trace.transitions.size(); ++i) {
    const Transition& t = trace.transitions[i];
    ojson j = {{"type", "transition"},
               {"index", i},
               {"from", t.from_graph},
               {"to", t.to_graph},
               {"reason", std::string(to_string(t.reason))},
               {"template", t.template_name},
               {"facts", calls_json(t.carried_knowledge)},
               {"timestamp", t.timestamp}};
    out << j.dump() << '\n';
  }
  ojson fin = {{"type", "final"},
               {"status", std::string(to_string(trace.final_status))},
               {"depth", trace.metrics.depth},
               {"graphs", trace.graph_templates}};
  fin["world"] = ojson::parse(world_record(trace.final_world).dump());
  out << fin.dump() << '\n';
  return out.str();
}

nlohmann::json mask_timings(nlohmann::json doc) {
  // ordered_json keeps key order stable for the byte comparison
  return nlohmann::json::parse(mask(ojson::parse(doc.dump())).dump());
}

std::string mask_timings_jsonl(const std::string& text) {
  std::istringstream in(text);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out << mask(ojson::parse(line)).dump() << '\n';
  }
  return out.str();
}

}  // namespace eaog
