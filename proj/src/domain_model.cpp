#include "eaog/domain_model.hpp"

#include <algorithm>
#include <cctype>

#include "eaog/errors.hpp"
#include "eaog/scenario.hpp"

namespace eaog {

std::string Fact::str() const {
  std::string out = predicate + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ',';
    out += args[i];
  }
  out += ')';
  return out;
}

bool Fact::is_ground() const {
  return std::none_of(args.begin(), args.end(), [](const std::string& a) {
    return a.empty() || a[0] == '?' || a[0] == '$' || a == "*";
  });
}

namespace {

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '?' ||
         c == '$' || c == '*' || c == '.';
}

}  // namespace

std::optional<Fact> parse_fact(std::string_view text) {
  const auto open = text.find('(');
  if (open == std::string_view::npos || open == 0 || text.back() != ')') return std::nullopt;
  Fact f;
  f.predicate = std::string(text.substr(0, open));
  for (char c : f.predicate) {
    if (!is_name_char(c) || c == '?' || c == '$' || c == '*') return std::nullopt;
  }
  std::string_view inner = text.substr(open + 1, text.size() - open - 2);
  if (inner.empty()) return f;
  std::size_t pos = 0;
  while (true) {
    const auto comma = inner.find(',', pos);
    std::string_view arg = inner.substr(pos, comma == std::string_view::npos ? inner.npos : comma - pos);
    if (arg.empty()) return std::nullopt;
    for (char c : arg) {
      if (!is_name_char(c)) return std::nullopt;
    }
    f.args.emplace_back(arg);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return f;
}

bool is_derived_predicate(std::string_view predicate) {
  return predicate == "on" || predicate == "clear" || predicate == "holding" || predicate == "at";
}

std::string_view to_string(MotionClass c) {
  switch (c) {
    case MotionClass::Transit: return "transit";
    case MotionClass::Transfer: return "transfer";
    case MotionClass::Handover: return "handover";
    case MotionClass::Symbolic: return "symbolic";
    case MotionClass::Wait: return "wait";
  }
  return "symbolic";
}

std::optional<MotionClass> motion_class_from_string(std::string_view s) {
  if (s == "transit") return MotionClass::Transit;
  if (s == "transfer") return MotionClass::Transfer;
  if (s == "handover") return MotionClass::Handover;
  if (s == "symbolic") return MotionClass::Symbolic;
  if (s == "wait") return MotionClass::Wait;
  return std::nullopt;
}

std::string Action::str() const {
  return Fact{name, args}.str();
}

Fact substitute(const Fact& pattern, const std::map<std::string, std::string>& binding) {
  Fact out = pattern;
  for (auto& a : out.args) {
    if (auto it = binding.find(a); it != binding.end()) a = it->second;
  }
  return out;
}

Action instantiate(const ActionTemplate& tmpl, const std::vector<std::string>& args,
                   const std::string& agent) {
  if (args.size() != tmpl.params.size()) {
    throw Error(ErrorCode::UnknownEntity, tmpl.name,
                "action " + tmpl.name + " expects " + std::to_string(tmpl.params.size()) +
                    " arguments, got " + std::to_string(args.size()));
  }
  std::map<std::string, std::string> binding;
  for (std::size_t i = 0; i < args.size(); ++i) binding[tmpl.params[i].name] = args[i];
  auto sub_all = [&](const std::vector<Fact>& in) {
    std::vector<Fact> out;
    out.reserve(in.size());
    for (const auto& f : in) out.push_back(substitute(f, binding));
    return out;
  };
  Action a;
  a.name = tmpl.name;
  a.args = args;
  a.preconditions = sub_all(tmpl.preconditions);
  a.effects_add = sub_all(tmpl.effects_add);
  a.effects_del = sub_all(tmpl.effects_del);
  a.motion_class = tmpl.motion_class;
  auto slot = [&](const std::string& s) {
    if (s.empty()) return std::string{};
    if (auto it = binding.find(s); it != binding.end()) return it->second;
    return s;
  };
  a.object = slot(tmpl.object_slot);
  a.goal = slot(tmpl.goal_slot);
  a.duration = tmpl.duration;
  return agent.empty() ? a : bind_agent(std::move(a), agent);
}

Action bind_agent(Action action, const std::string& agent) {
  action.agent = agent;
  const std::map<std::string, std::string> binding{{"$agent", agent}};
  for (auto* list : {&action.preconditions, &action.effects_add, &action.effects_del}) {
    for (auto& f : *list) f = substitute(f, binding);
  }
  return action;
}

namespace {

bool wildcard_match(const Fact& pattern, const Fact& fact) {
  if (pattern.predicate != fact.predicate || pattern.args.size() != fact.args.size()) return false;
  for (std::size_t i = 0; i < pattern.args.size(); ++i) {
    if (pattern.args[i] != "*" && pattern.args[i] != fact.args[i]) return false;
  }
  return true;
}

}  // namespace

SymbolicState apply_action(const SymbolicState& state, const Action& action) {
  for (const auto& pre : action.preconditions) {
    if (!pre.is_ground() || !state.facts.contains(pre)) {
      throw Error(ErrorCode::PreconditionViolated, pre.str(),
                  action.str() + " requires " + pre.str());
    }
  }
  SymbolicState next = state;
  const FactSet added(action.effects_add.begin(), action.effects_add.end());
  for (const auto& del : action.effects_del) {
    if (std::find(del.args.begin(), del.args.end(), "*") == del.args.end()) {
      next.facts.erase(del);
      continue;
    }
    std::erase_if(next.facts, [&](const Fact& f) {
      return wildcard_match(del, f) && !added.contains(f);
    });
  }
  next.facts.insert(added.begin(), added.end());
  return next;
}

bool is_goal(const SymbolicState& state, const GoalSpec& goal) {
  return std::includes(state.facts.begin(), state.facts.end(), goal.required_facts.begin(),
                       goal.required_facts.end());
}

MotionBinding action_motion_class(const Action& action) {
  MotionBinding b;
  b.motion_class = action.motion_class;
  b.agent = action.agent;
  switch (action.motion_class) {
    case MotionClass::Transfer:
    case MotionClass::Handover:
      b.object = action.object;
      b.goal = action.goal;
      break;
    case MotionClass::Transit:
      b.goal = action.goal;
      break;
    case MotionClass::Wait:
      b.duration = action.duration;
      break;
    case MotionClass::Symbolic:
      break;
  }
  return b;
}

const RegionConstraint* ConfigRegion::find(std::string_view entity) const {
  for (const auto& c : constraints) {
    if (c.entity == entity) return &c;
  }
  return nullptr;
}

ConfigRegion state_region(const SymbolicState& state, const Scenario& scenario) {
  std::map<std::string, std::string> support;
  ConfigRegion region;
  auto require = [&](const std::string& id) {
    if (!scenario.has_entity(id)) {
      throw Error(ErrorCode::UnknownEntity, id, "unknown entity " + id);
    }
  };
  for (const auto& f : state.facts) {
    if (f.predicate == "on" && f.args.size() == 2) {
      require(f.args[0]);
      require(f.args[1]);
      support[f.args[0]] = f.args[1];
    }
  }
  for (const auto& [obj, below] : support) {
    // walk down through movable supports until a fixed site
    double z = 0.0;
    std::string cur = below;
    bool resolved = false;
    for (std::size_t guard = 0; guard <= support.size() + 1; ++guard) {
      const ObjectDecl* decl = scenario.find_object(cur);
      if (decl == nullptr) break;
      if (!decl->movable) {
        region.constraints.push_back({obj, RegionConstraint::Kind::PoseBox,
                                      Box{decl->position, kRegionTolerance, kRegionTolerance}, z,
                                      {}});
        resolved = true;
        break;
      }
      z += decl->height;
      auto it = support.find(cur);
      if (it == support.end()) break;
      cur = it->second;
    }
    (void)resolved;
  }
  for (const auto& f : state.facts) {
    if (f.predicate == "holding" && f.args.size() == 2) {
      require(f.args[0]);
      require(f.args[1]);
      region.constraints.push_back(
          {f.args[1], RegionConstraint::Kind::AttachedTo, Box{}, 0.0, f.args[0]});
    } else if (f.predicate == "at" && f.args.size() == 2) {
      require(f.args[0]);
      require(f.args[1]);
      const ObjectDecl* station = scenario.find_object(f.args[1]);
      if (station != nullptr) {
        region.constraints.push_back({f.args[0], RegionConstraint::Kind::AgentBox,
                                      Box{station->position, kRegionTolerance, kRegionTolerance},
                                      0.0, {}});
      }
    }
  }
  return region;
}

}  // namespace eaog
