#include "eaog/graph_net_search.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "eaog/errors.hpp"

namespace eaog {

std::string_view to_string(TransitionReason r) {
  switch (r) {
    case TransitionReason::MotionFailure: return "MotionFailure";
    case TransitionReason::NoFeasibleState: return "NoFeasibleState";
    case TransitionReason::StageComplete: return "StageComplete";
  }
  return "StageComplete";
}

std::string Candidate::key() const {
  std::string k = label + "|";
  for (std::size_t i = 0; i < arc.actions.size(); ++i) {
    if (i) k += ';';
    k += arc.actions[i].str();
  }
  return k;
}

namespace {

using Binding = std::map<std::string, std::string>;

bool var_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

void label_vars(const std::string& label, std::vector<std::string>& out) {
  for (std::size_t i = 0; i < label.size(); ++i) {
    if (label[i] != '?') continue;
    std::size_t j = i + 1;
    while (j < label.size() && var_char(label[j])) ++j;
    if (j > i + 1) out.push_back(label.substr(i, j - i));
    i = j - 1;
  }
}

void fact_vars(const std::vector<Fact>& facts, std::vector<std::string>& out) {
  for (const auto& f : facts) {
    for (const auto& a : f.args) {
      if (!a.empty() && a[0] == '?') out.push_back(a);
    }
  }
}

std::string substitute_label(const std::string& label, const Binding& b) {
  std::string out;
  for (std::size_t i = 0; i < label.size(); ++i) {
    if (label[i] == '?') {
      std::size_t j = i + 1;
      while (j < label.size() && var_char(label[j])) ++j;
      auto it = b.find(label.substr(i, j - i));
      if (j > i + 1 && it != b.end()) {
        out += it->second;
        i = j - 1;
        continue;
      }
    }
    out += label[i];
  }
  return out;
}

std::vector<Fact> substitute_all(const std::vector<Fact>& facts, const Binding& b) {
  std::vector<Fact> out;
  out.reserve(facts.size());
  for (const auto& f : facts) out.push_back(substitute(f, b));
  return out;
}

bool template_is_ground(const GraphTemplate& t) {
  if (!t.params.empty()) return false;
  for (const auto& a : t.arcs) {
    if (!a.guards.empty()) return false;
  }
  return true;
}

// Extends `b` so that pattern matches fact; false on conflict.
bool unify(const Fact& pattern, const Fact& fact, Binding& b) {
  if (pattern.predicate != fact.predicate || pattern.args.size() != fact.args.size()) return false;
  for (std::size_t i = 0; i < fact.args.size(); ++i) {
    const std::string& p = pattern.args[i];
    if (!p.empty() && p[0] == '?') {
      auto [it, inserted] = b.emplace(p, fact.args[i]);
      if (!inserted && it->second != fact.args[i]) return false;
    } else if (p != fact.args[i]) {
      return false;
    }
  }
  return true;
}

std::vector<std::string> entities_of_type(const Scenario& s, const std::string& type) {
  std::vector<std::string> out;
  for (const auto& id : s.entity_ids()) {
    if (type == "any" || s.entity_kind(id) == type) out.push_back(id);
  }
  return out;
}

}  // namespace

GraphTemplate instantiate_template(const GraphTemplate& tmpl, const FactSet& facts,
                                   const std::vector<Fact>& knowledge, const Scenario& scenario) {
  if (template_is_ground(tmpl)) return tmpl;

  std::map<std::string, std::vector<const Fact*>> by_pred;
  for (const auto& f : facts) by_pred[f.predicate].push_back(&f);
  for (const auto& f : knowledge) by_pred[f.predicate].push_back(&f);

  std::map<std::string, std::string> types;
  for (const auto& p : tmpl.params) types[p.name] = p.type;

  std::vector<Binding> bases;
  if (tmpl.params.empty() || knowledge.empty()) {
    bases.emplace_back();
  } else {
    for (const auto& k : knowledge) {
      Binding b;
      for (std::size_t i = 0; i < std::min(k.args.size(), tmpl.params.size()); ++i) b[tmpl.params[i].name] = k.args[i];
      if (std::find(bases.begin(), bases.end(), b) == bases.end()) bases.push_back(std::move(b));
    }
  }

  std::map<std::uint32_t, const NodeDecl*> decls;
  for (const auto& n : tmpl.nodes) decls[n.id] = &n;

  GraphTemplate out;
  out.name = tmpl.name;
  std::map<std::pair<NodeKind, std::string>, std::uint32_t> node_ids;
  std::vector<NodeDecl> nodes;
  auto add_node = [&](const NodeDecl& d, const Binding& b) {
    NodeDecl n{0, d.kind, substitute_label(d.label, b), substitute_all(d.facts, b)};
    const auto key = std::make_pair(n.kind, n.label);
    if (auto it = node_ids.find(key); it != node_ids.end()) return it->second;
    n.id = static_cast<std::uint32_t>(nodes.size());
    node_ids[key] = n.id;
    nodes.push_back(std::move(n));
    return nodes.back().id;
  };
  for (const auto& n : tmpl.nodes) {
    if (n.kind == NodeKind::Root) add_node(n, {});
  }
  for (const auto& n : tmpl.nodes) {
    if (n.kind == NodeKind::Failure) add_node(n, {});
  }

  std::vector<const ArcDecl*> arcs;
  for (const auto& a : tmpl.arcs) arcs.push_back(&a);
  std::sort(arcs.begin(), arcs.end(), [](auto* x, auto* y) { return x->id < y->id; });

  std::set<std::tuple<std::uint32_t, std::vector<std::uint32_t>, std::vector<Fact>, double>> seen_arcs;
  int next_arc = 1;
  for (const ArcDecl* arc : arcs) {
    std::vector<std::string> vars;
    fact_vars(arc->guards, vars);
    fact_vars(arc->actions, vars);
    for (auto id : arc->children) {
      if (auto it = decls.find(id); it != decls.end()) {
        label_vars(it->second->label, vars);
        fact_vars(it->second->facts, vars);
      }
    }
    if (auto it = decls.find(arc->parent); it != decls.end()) {
      label_vars(it->second->label, vars);
      fact_vars(it->second->facts, vars);
    }
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());

    auto emit = [&](const Binding& b) {
      std::vector<std::uint32_t> children;
      for (auto id : arc->children) children.push_back(add_node(*decls.at(id), b));
      const std::uint32_t parent = add_node(*decls.at(arc->parent), b);
      std::vector<Fact> actions = substitute_all(arc->actions, b);
      if (!seen_arcs.insert({parent, children, actions, arc->weight}).second) return;
      out.arcs.push_back({next_arc++, parent, children, arc->weight, {}, std::move(actions)});
    };

    // enumerate the variables left after the guard join
    std::function<void(Binding&, std::size_t)> enumerate = [&](Binding& b, std::size_t vi) {
      while (vi < vars.size() && b.contains(vars[vi])) ++vi;
      if (vi == vars.size()) {
        emit(b);
        return;
      }
      auto t = types.find(vars[vi]);
      for (const auto& e : entities_of_type(scenario, t == types.end() ? "any" : t->second)) {
        b[vars[vi]] = e;
        enumerate(b, vi + 1);
      }
      b.erase(vars[vi]);
    };
    std::function<void(Binding, std::size_t)> join = [&](Binding b, std::size_t gi) {
      if (gi == arc->guards.size()) {
        enumerate(b, 0);
        return;
      }
      const Fact g = substitute(arc->guards[gi], b);
      auto it = by_pred.find(g.predicate);
      if (it == by_pred.end()) return;
      for (const Fact* f : it->second) {
        Binding nb = b;
        if (unify(g, *f, nb)) join(std::move(nb), gi + 1);
      }
    };
    for (const auto& base : bases) join(base, 0);
  }
  out.nodes = std::move(nodes);
  return out;
}

GraphNetwork::GraphNetwork(Scenario scenario, const WorldState& world, NetworkOptions options)
    : scenario_(std::move(scenario)), options_(options) {
  add_graph(scenario_.graph, world, TransitionReason::StageComplete, {});
}

void GraphNetwork::sync_leaves(const WorldState& world) {
  FactSet facts = world.facts();
  facts.insert(knowledge_[active_].begin(), knowledge_[active_].end());
  AndOrGraph& g = graphs_[active_].base;
  std::map<NodeId, bool> truth;
  for (NodeId id : g.leaves()) {
    const auto& leaf_facts = g.node(id).facts;
    truth[id] = std::all_of(leaf_facts.begin(), leaf_facts.end(), [&](const Fact& f) { return facts.contains(f); });
  }
  g = set_leaf_truth(std::move(g), truth);
}

void GraphNetwork::suppress(const Candidate& candidate, const std::string& world_signature) {
  suppressed_.insert({candidate.key(), world_signature});
}

bool GraphNetwork::is_suppressed(const Candidate& candidate, const std::string& world_signature) const {
  return suppressed_.contains({candidate.key(), world_signature});
}

std::size_t GraphNetwork::suppressed_count(const std::string& world_signature) const {
  return static_cast<std::size_t>(std::count_if(suppressed_.begin(), suppressed_.end(),
                                                [&](const auto& p) { return p.second == world_signature; }));
}

std::size_t GraphNetwork::add_graph(const GraphTemplate& tmpl, const WorldState& world, TransitionReason reason,
                                    std::vector<Fact> knowledge) {
  GraphTemplate inst = instantiate_template(tmpl, world.facts(), knowledge, scenario_);
  AugmentedGraph g = augment(build_graph(inst));
  const std::size_t index = graphs_.size();
  if (!graphs_.empty()) {
    transitions_.push_back({active_, index, reason, knowledge, world.clock, tmpl.name});
  }
  graphs_.push_back(std::move(g));
  template_names_.push_back(tmpl.name);
  knowledge_.push_back(std::move(knowledge));
  active_ = index;
  sync_leaves(world);
  return index;
}

std::vector<bool> reached_nodes(const AndOrGraph& graph) {
  const auto nodes = graph.nodes();
  std::vector<bool> reached(nodes.size(), false);
  std::map<NodeId, std::size_t> index;
  for (std::size_t i = 0; i < nodes.size(); ++i) index[nodes[i].id] = i;
  for (NodeId id : graph.topological_order()) {
    const std::size_t i = index.at(id);
    const Node& n = nodes[i];
    if (n.kind == NodeKind::Leaf) {
      reached[i] = n.truth;
      continue;
    }
    if (n.kind != NodeKind::Internal && n.kind != NodeKind::Root) continue;
    for (const HyperArc* arc : graph.arcs_into(id)) {
      if (!arc->actions.empty()) continue;
      if (std::all_of(arc->children.begin(), arc->children.end(), [&](NodeId c) { return reached[index.at(c)]; })) {
        reached[i] = true;
        break;
      }
    }
  }
  return reached;
}

namespace {

double arc_cost(const AndOrGraph& g, const HyperArc& arc) {
  double c = arc.weight;
  for (NodeId ch : arc.children) c += node_cost(g, ch);
  return c;
}

// Cheapest cost of completing a solution above each node, root = 0.
std::map<NodeId, double> upward_costs(const AndOrGraph& g) {
  std::map<NodeId, double> up;
  for (const auto& n : g.nodes()) up[n.id] = kInfiniteCost;
  up[g.root()] = 0.0;
  const auto topo = g.topological_order();
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    const double above = up.at(*it);
    if (above == kInfiniteCost) continue;
    for (const HyperArc* arc : g.arcs_into(*it)) {
      for (NodeId c : arc->children) {
        // siblings summed directly, subtracting would give inf - inf
        double siblings = arc->weight;
        for (NodeId s : arc->children) {
          if (s != c) siblings += node_cost(g, s);
        }
        up[c] = std::min(up[c], above + siblings);
      }
    }
  }
  return up;
}

}  // namespace

std::vector<Candidate> next_feasible_states(GraphNetwork& net, const WorldState& world) {
  net.sync_leaves(world);
  const AndOrGraph& g = net.active_graph().base;
  const auto reached = reached_nodes(g);
  const auto up = upward_costs(g);
  const auto nodes = g.nodes();
  std::map<NodeId, std::size_t> index;
  for (std::size_t i = 0; i < nodes.size(); ++i) index[nodes[i].id] = i;
  std::vector<Candidate> out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& n = nodes[i];
    if (reached[i] || (n.kind != NodeKind::Internal && n.kind != NodeKind::Root)) continue;
    for (const HyperArc* arc : g.arcs_into(n.id)) {
      if (!std::all_of(arc->children.begin(), arc->children.end(),
                       [&](NodeId c) { return reached[index.at(c)]; })) {
        continue;
      }
      Candidate c;
      c.node = n.id;
      c.label = n.label;
      c.arc = *arc;
      c.est_cost = arc_cost(g, *arc) + up.at(n.id);
      if (net.is_suppressed(c, world.signature)) continue;
      out.push_back(std::move(c));
    }
  }
  std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.arc.id, a.node) < std::tie(b.arc.id, b.node);
  });
  return out;
}

Candidate next_optimal_state(const std::vector<Candidate>& candidates) {
  if (candidates.empty()) {
    throw Error(ErrorCode::EmptyCandidateSet, "", "no feasible candidate to choose from");
  }
  const auto best = std::min_element(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.est_cost, a.arc.id, a.node) < std::tie(b.est_cost, b.arc.id, b.node);
  });
  return *best;
}

std::size_t expand_network(GraphNetwork& net, const WorldState& world, TransitionReason reason,
                           const std::vector<Fact>& knowledge) {
  const std::size_t expansions = net.graphs().size() - 1;
  if (expansions >= net.options().depth_cap) {
    throw Error(ErrorCode::DepthLimitExceeded, std::to_string(expansions + 1),
                "expansion " + std::to_string(expansions + 1) + " exceeds the depth cap of " +
                    std::to_string(net.options().depth_cap));
  }
  const GraphTemplate* tmpl = &net.scenario().graph;
  if (reason == TransitionReason::MotionFailure) {
    if (const GraphTemplate* stage = net.scenario().find_stage(kRearrangeStage)) tmpl = stage;
  }
  return net.add_graph(*tmpl, world, reason, knowledge);
}

std::size_t network_depth(const GraphNetwork& net) { return net.graphs().size(); }

std::string transition_log(const GraphNetwork& net) {
  std::ostringstream os;
  const auto& ts = net.transitions();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    nlohmann::ordered_json j;
    j["index"] = i;
    j["from"] = ts[i].from_graph;
    j["to"] = ts[i].to_graph;
    j["reason"] = std::string(to_string(ts[i].reason));
    j["template"] = ts[i].template_name;
    auto facts = nlohmann::json::array();
    for (const auto& f : ts[i].carried_knowledge) facts.push_back(f.str());
    j["facts"] = facts;
    j["timestamp"] = ts[i].timestamp;
    os << j.dump() << '\n';
  }
  return os.str();
}

}  // namespace eaog
