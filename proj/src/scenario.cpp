#include "eaog/scenario.hpp"

#include <algorithm>

#include "eaog/errors.hpp"

namespace eaog {

namespace {

template <class T>
const T* find_by_id(const std::vector<T>& items, std::string_view id) {
  auto it = std::lower_bound(items.begin(), items.end(), id,
                             [](const T& x, std::string_view v) { return x.id < v; });
  if (it != items.end() && it->id == id) return &*it;
  // programmatic scenarios may not be sorted yet
  for (const auto& x : items) {
    if (x.id == id) return &x;
  }
  return nullptr;
}

}  // namespace

const ObjectDecl* Scenario::find_object(std::string_view id) const { return find_by_id(objects, id); }

const AgentDecl* Scenario::find_agent(std::string_view id) const { return find_by_id(agents, id); }

const ActionTemplate* Scenario::find_action(std::string_view action_name) const {
  for (const auto& a : actions) {
    if (a.name == action_name) return &a;
  }
  return nullptr;
}

const GraphTemplate* Scenario::find_stage(std::string_view stage_name) const {
  for (const auto& s : stages) {
    if (s.name == stage_name) return &s;
  }
  return nullptr;
}

bool Scenario::has_entity(std::string_view id) const {
  return find_object(id) != nullptr || find_agent(id) != nullptr;
}

std::string Scenario::entity_kind(std::string_view id) const {
  if (const auto* o = find_object(id)) return o->kind;
  if (const auto* a = find_agent(id)) return a->kind == AgentKind::Arm ? "arm" : "base";
  return {};
}

std::vector<std::string> Scenario::entity_ids() const {
  std::vector<std::string> ids;
  for (const auto& o : objects) ids.push_back(o.id);
  for (const auto& a : agents) ids.push_back(a.id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

Action Scenario::resolve_action(const Fact& call) const {
  const ActionTemplate* tmpl = find_action(call.predicate);
  if (tmpl == nullptr) {
    throw Error(ErrorCode::UnknownEntity, call.predicate, "unknown action " + call.str());
  }
  for (const auto& arg : call.args) {
    if (!has_entity(arg)) throw Error(ErrorCode::UnknownEntity, arg, "unknown entity " + arg + " in " + call.str());
  }
  return instantiate(*tmpl, call.args);
}

}  // namespace eaog

namespace eaog {

void canonicalize(Scenario& s) {
  auto by_id = [](const auto& a, const auto& b) { return a.id < b.id; };
  std::sort(s.objects.begin(), s.objects.end(), by_id);
  std::sort(s.agents.begin(), s.agents.end(), by_id);
  std::sort(s.predicates.begin(), s.predicates.end(),
            [](const PredicateDecl& a, const PredicateDecl& b) { return a.name < b.name; });
  std::sort(s.actions.begin(), s.actions.end(),
            [](const ActionTemplate& a, const ActionTemplate& b) { return a.name < b.name; });
  auto sort_template = [&](GraphTemplate& t) {
    std::sort(t.nodes.begin(), t.nodes.end(), by_id);
    std::sort(t.arcs.begin(), t.arcs.end(), by_id);
  };
  sort_template(s.graph);
  for (auto& st : s.stages) sort_template(st);
  std::sort(s.stages.begin(), s.stages.end(),
            [](const GraphTemplate& a, const GraphTemplate& b) { return a.name < b.name; });
}

}  // namespace eaog
