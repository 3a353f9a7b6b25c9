#include "eaog/benchmarks.hpp"

#include <cmath>
#include <deque>
#include <map>
#include <numbers>

#include "eaog/errors.hpp"

namespace eaog {

namespace {

constexpr double kFacingUp = std::numbers::pi / 2;

Fact fact(std::string p, std::vector<std::string> args) { return Fact{std::move(p), std::move(args)}; }

Fact pattern(const std::string& text) { return *parse_fact(text); }

std::vector<Fact> patterns(std::initializer_list<const char*> texts) {
  std::vector<Fact> out;
  for (const char* t : texts) out.push_back(pattern(t));
  return out;
}

ObjectDecl circle(std::string id, std::string kind, Vec2 p, double r, double h, bool movable,
                  std::string support = {}) {
  ObjectDecl o;
  o.id = std::move(id);
  o.kind = std::move(kind);
  o.position = p;
  o.footprint.shape = Footprint::Shape::Circle;
  o.footprint.radius = r;
  o.height = h;
  o.movable = movable;
  o.support = std::move(support);
  return o;
}

ObjectDecl box(std::string id, std::string kind, Vec2 p, double hx, double hy, double h, bool movable,
               std::string support = {}) {
  ObjectDecl o = circle(std::move(id), std::move(kind), p, 0.0, h, movable, std::move(support));
  o.footprint.shape = Footprint::Shape::Box;
  o.footprint.hx = hx;
  o.footprint.hy = hy;
  return o;
}

AgentDecl arm(std::string id, Vec2 p, double yaw, double reach, double clearance, std::string mount = {}) {
  AgentDecl a;
  a.id = std::move(id);
  a.kind = AgentKind::Arm;
  a.position = p;
  a.yaw = yaw;
  a.reach = reach;
  a.clearance = clearance;
  a.mount = std::move(mount);
  return a;
}

// Small builder that hands out node and arc ids in creation order.
struct GraphBuilder {
  GraphTemplate t;
  std::uint32_t next_node = 0;
  int next_arc = 1;
  std::map<std::string, std::uint32_t> leaf_ids;

  std::uint32_t node(NodeKind kind, std::string label, std::vector<Fact> facts = {}) {
    t.nodes.push_back({next_node, kind, std::move(label), std::move(facts)});
    return next_node++;
  }
  std::uint32_t leaf(const Fact& f) {
    const std::string label = f.str();
    if (auto it = leaf_ids.find(label); it != leaf_ids.end()) return it->second;
    return leaf_ids[label] = node(NodeKind::Leaf, label, {f});
  }
  void arc(std::uint32_t parent, std::vector<std::uint32_t> children, double w, std::vector<Fact> actions = {},
           std::vector<Fact> guards = {}) {
    t.arcs.push_back({next_arc++, parent, std::move(children), w, std::move(guards), std::move(actions)});
  }
};

const char* kPegNames[3] = {"pegA", "pegB", "pegC"};

std::string disk_name(int i) { return "d" + std::to_string(i + 1); }

// Entity directly below disk i in a state, or its peg.
std::string below(const std::vector<int>& pegs, int i) {
  for (int j = i + 1; j < static_cast<int>(pegs.size()); ++j) {
    if (pegs[j] == pegs[i]) return disk_name(j);
  }
  return kPegNames[pegs[i]];
}

int top_of(const std::vector<int>& pegs, int peg) {
  for (int i = 0; i < static_cast<int>(pegs.size()); ++i) {
    if (pegs[i] == peg) return i;
  }
  return -1;
}

std::vector<int> decode(int code, int n) {
  std::vector<int> pegs(n);
  for (int i = 0; i < n; ++i) {
    pegs[i] = code % 3;
    code /= 3;
  }
  return pegs;
}

int encode(const std::vector<int>& pegs) {
  int code = 0;
  for (int i = static_cast<int>(pegs.size()) - 1; i >= 0; --i) code = code * 3 + pegs[i];
  return code;
}

struct HanoiMove {
  int disk;
  int from_peg;
  int to_peg;
};

std::vector<HanoiMove> legal_moves(const std::vector<int>& pegs) {
  std::vector<HanoiMove> out;
  for (int p = 0; p < 3; ++p) {
    const int d = top_of(pegs, p);
    if (d < 0) continue;
    for (int q = 0; q < 3; ++q) {
      if (q == p) continue;
      const int t = top_of(pegs, q);
      if (t < 0 || t > d) out.push_back({d, p, q});
    }
  }
  return out;
}

void check_disks(int n) {
  if (n < 3 || n > 8) {
    throw Error(ErrorCode::BadDiskCount, std::to_string(n), "disk count must be within 3..8, got " + std::to_string(n));
  }
}

}  // namespace

std::vector<HanoiStateCost> hanoi_state_costs(int n) {
  check_disks(n);
  int total = 1;
  for (int i = 0; i < n; ++i) total *= 3;
  std::vector<int> dist(total, -1);
  const int goal = total - 1;  // every digit is 2 (peg C)
  dist[goal] = 0;
  std::deque<int> queue{goal};
  while (!queue.empty()) {
    const int code = queue.front();
    queue.pop_front();
    auto pegs = decode(code, n);
    for (const auto& m : legal_moves(pegs)) {
      auto next = pegs;
      next[m.disk] = m.to_peg;
      const int c = encode(next);
      if (dist[c] < 0) {
        dist[c] = dist[code] + 1;
        queue.push_back(c);
      }
    }
  }
  std::vector<HanoiStateCost> out;
  out.reserve(total);
  for (int c = 0; c < total; ++c) out.push_back({decode(c, n), dist[c]});
  return out;
}

HanoiLayout default_hanoi_layout(bool omnipotent) {
  HanoiLayout l;
  const double side = 0.6;
  const double h = side * std::sqrt(3.0) / 2;
  l.pegs = {{-side / 2, 0.7}, {side / 2, 0.7}, {0.0, 0.7 - h}};
  l.omnipotent = omnipotent;
  if (omnipotent) {
    const Vec2 centroid{0.0, (0.7 + 0.7 + 0.7 - h) / 3};
    l.arms = {{"arm", centroid, 10.0, 10.0}};
  } else {
    // a disk of any size on peg C occludes the left arm's line to the stand
    l.arms = {{"left_arm", {-0.3, 0.0}, 0.75, 0.01}, {"right_arm", {0.3, 0.0}, 0.75, 0.01}};
    l.handover = {0.3, 0.36};
  }
  return l;
}

Scenario gen_hanoi(int n, const HanoiLayout& layout) {
  check_disks(n);
  if (layout.pegs.size() != 3 || layout.arms.empty()) {
    throw Error(ErrorCode::ConfigInvalid, "layout", "hanoi layout needs three pegs and at least one arm");
  }
  Scenario s;
  s.name = "hanoi" + std::to_string(n) + (layout.omnipotent ? "_omni" : "");
  for (int p = 0; p < 3; ++p) s.objects.push_back(circle(kPegNames[p], "peg", layout.pegs[p], 0.01, 0.0, false));
  for (int i = 0; i < n; ++i) {
    const std::string support = i + 1 < n ? disk_name(i + 1) : kPegNames[0];
    s.objects.push_back(circle(disk_name(i), "disk", layout.pegs[0], 0.02 + 0.01 * (i + 1), layout.disk_height,
                               true, support));
  }
  if (!layout.omnipotent) s.objects.push_back(circle("stand", std::string(kHandoverKind), layout.handover, 0.01, 0.0, false));
  for (const auto& a : layout.arms) s.agents.push_back(arm(a.id, a.anchor, kFacingUp, a.reach, a.clearance));

  s.predicates = {{"clear", 1}, {"obstructs", 2}, {"on", 2}, {"smaller", 2}};
  ActionTemplate move;
  move.name = "move";
  move.params = {{"?d", "disk"}, {"?from", "any"}, {"?to", "any"}};
  move.motion_class = MotionClass::Transfer;
  move.object_slot = "?d";
  move.goal_slot = "?to";
  move.preconditions = patterns({"on(?d,?from)", "clear(?d)", "clear(?to)", "smaller(?d,?to)"});
  move.effects_add = patterns({"on(?d,?to)", "clear(?from)"});
  move.effects_del = patterns({"on(?d,?from)", "clear(?to)"});
  s.actions = {move};

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) s.init.insert(fact("smaller", {disk_name(i), disk_name(j)}));
    for (const char* peg : kPegNames) s.init.insert(fact("smaller", {disk_name(i), peg}));
  }
  for (int i = 0; i < n; ++i) {
    s.goal.required_facts.insert(fact("on", {disk_name(i), i + 1 < n ? disk_name(i + 1) : kPegNames[2]}));
  }

  // Main graph: one decision node per (state, legal move), weighted by the
  // remaining optimal distance of the successor state.
  const auto costs = hanoi_state_costs(n);
  GraphBuilder g;
  g.t.name = "hanoi";
  const auto root = g.node(NodeKind::Root, "tower on pegC");
  g.node(NodeKind::Failure, "failure");
  for (const auto& sc : costs) {
    if (sc.distance == 0) continue;
    std::vector<std::uint32_t> leaves;
    for (int i = 0; i < n; ++i) leaves.push_back(g.leaf(fact("on", {disk_name(i), below(sc.pegs, i)})));
    std::string code;
    for (int p : sc.pegs) code += static_cast<char>('A' + p);
    for (const auto& m : legal_moves(sc.pegs)) {
      auto next = sc.pegs;
      next[m.disk] = m.to_peg;
      const int t = top_of(sc.pegs, m.to_peg);
      const std::string from = below(sc.pegs, m.disk);
      const std::string to = t < 0 ? kPegNames[m.to_peg] : disk_name(t);
      const auto done = g.node(NodeKind::Internal, code + " " + disk_name(m.disk) + " " + kPegNames[m.from_peg] + ">" +
                                                       kPegNames[m.to_peg]);
      g.arc(done, leaves, 1.0, {fact("move", {disk_name(m.disk), from, to})});
      g.arc(root, {done}, costs[encode(next)].distance);
    }
  }
  s.graph = std::move(g.t);

  // Rearrangement stage: relocate an obstructing disk to any legal spot.
  GraphBuilder r;
  r.t.name = std::string(kRearrangeStage);
  r.t.params = {{"?o", "disk"}, {"?t", "any"}, {"?x", "any"}, {"?y", "any"}};
  const auto rroot = r.node(NodeKind::Root, "obstruction cleared");
  r.node(NodeKind::Failure, "failure");
  const auto on = r.node(NodeKind::Leaf, "on(?o,?x)", patterns({"on(?o,?x)"}));
  const auto clear_o = r.node(NodeKind::Leaf, "clear(?o)", patterns({"clear(?o)"}));
  const auto clear_y = r.node(NodeKind::Leaf, "clear(?y)", patterns({"clear(?y)"}));
  const auto obs = r.node(NodeKind::Leaf, "obstructs(?o,?t)", patterns({"obstructs(?o,?t)"}));
  const auto moved = r.node(NodeKind::Internal, "relocated ?o");
  r.arc(moved, {on, clear_o, clear_y, obs}, 1.0, patterns({"move(?o,?x,?y)"}), patterns({"on(?o,?x)", "smaller(?o,?y)"}));
  r.arc(rroot, {moved}, 0.0);
  s.stages.push_back(std::move(r.t));

  canonicalize(s);
  return s;
}

Scenario gen_habitat(const HabitatConfig& config) {
  if (config.samples < 1 || config.glassware < 1 || config.samples > 4 || config.glassware > 3) {
    throw Error(ErrorCode::ConfigInvalid, "habitat", "habitat supports 1..4 samples and 1..3 glassware");
  }
  const int k = config.samples, m = config.glassware;
  Scenario s;
  s.name = "habitat";
  auto spread = [](int i, int count, double step) { return (i - (count - 1) / 2.0) * step; };
  auto sid = [](int i) { return "s" + std::to_string(i + 1); };
  auto pid = [](int i) { return "p" + std::to_string(i + 1); };
  auto gid = [](int j) { return "g" + std::to_string(j + 1); };

  // fixtures the base drives around
  s.objects.push_back(box("workbench", std::string(kFixtureKind), {0.0, 1.5}, 0.8, 0.3, 0.75, false));
  s.objects.push_back(box("steriliser", std::string(kFixtureKind), {2.0, 1.5}, 0.35, 0.25, 0.6, false));
  s.objects.push_back(box("heater", std::string(kFixtureKind), {-2.0, 1.5}, 0.25, 0.2, 0.4, false));
  s.objects.push_back(box("side_table", std::string(kFixtureKind), {0.0, -1.5}, 0.4, 0.25, 0.7, false));
  auto station = [&](std::string id, Vec2 p, double yaw) {
    ObjectDecl o = circle(std::move(id), std::string(kStationKind), p, 0.05, 0.0, false);
    o.yaw = yaw;
    s.objects.push_back(o);
  };
  station("st_bench", {0.0, 0.8}, kFacingUp);
  station("st_ster", {2.0, 0.8}, kFacingUp);
  station("st_heat", {-2.0, 0.8}, kFacingUp);
  station("st_table", {0.0, -0.8}, -kFacingUp);
  auto slot = [&](const std::string& id, Vec2 p) { s.objects.push_back(circle(id, "slot", p, 0.03, 0.0, false)); };

  // Samples and returned glassware share bench lanes, interleaved s1 g1 s2 g2 ...
  // Lanes narrow as the bench fills so the back row stays within arm reach.
  const int lanes = k + m;
  const double lane_step = lanes <= 3 ? 0.25 : 0.9 / (lanes - 1);
  auto lane_x = [&](int lane) { return spread(lane, lanes, lane_step); };
  auto sample_lane = [&](int i) { return i < m + 1 ? 2 * i : m + i; };
  auto glass_lane = [&](int j) { return j < k ? 2 * j + 1 : k + j; };
  // asides fan out on the container's own side of the row; a centre one joins the emptier side
  int parked[2] = {0, 0};
  for (int i = 0; i < k; ++i) parked[lane_x(sample_lane(i)) < 0.0 ? 0 : 1] += lane_x(sample_lane(i)) != 0.0;
  const int centre_side = parked[0] <= parked[1] ? 0 : 1;
  parked[0] = parked[1] = 0;
  for (int i = 0; i < k; ++i) {
    const double x = lane_x(sample_lane(i));
    const int side = x < 0.0 ? 0 : x > 0.0 ? 1 : centre_side;
    slot("home_" + sid(i), {x, 1.6});
    slot("home_" + pid(i), {x * 0.92, 1.3});
    slot("aside_" + pid(i), {(side == 0 ? -1.0 : 1.0) * (0.55 + 0.15 * parked[side]++), 1.3});
    slot("ster_" + sid(i), {2.0 + spread(sample_lane(i), lanes, 0.14), 1.5});
    slot("heat_" + sid(i), {-2.0 + spread(i, k, 0.14), 1.5});
    s.objects.push_back(box(sid(i), "sample", {x, 1.6}, 0.025, 0.025, 0.05, true, "home_" + sid(i)));
    s.objects.push_back(box(pid(i), "container", {x * 0.92, 1.3}, 0.04, 0.04, 0.15, true, "home_" + pid(i)));
  }
  for (int j = 0; j < m; ++j) {
    // the table faces the other way, so mirror x to keep each glass on one arm's side
    const double x = lane_x(glass_lane(j));
    slot("table_" + gid(j), {-0.5 * x, -1.55});
    slot("bench_" + gid(j), {x, 1.55});
    slot("ster_" + gid(j), {2.0 + spread(glass_lane(j), lanes, 0.14), 1.5});
    s.objects.push_back(circle(gid(j), "glass", {-0.5 * x, -1.55}, 0.03, 0.08, true, "table_" + gid(j)));
  }

  AgentDecl base;
  base.id = "base";
  base.kind = AgentKind::Base;
  base.position = {0.0, 0.0};
  base.yaw = kFacingUp;
  base.radius = 0.3;
  s.agents.push_back(base);
  s.agents.push_back(arm("left_arm", {0.1, 0.2}, 0.0, 0.75, 0.1, "base"));
  s.agents.push_back(arm("right_arm", {0.1, -0.2}, 0.0, 0.75, 0.1, "base"));

  s.predicates = {{"aside_slot", 2}, {"at", 2},         {"cleaned", 1},    {"clear", 1},
                  {"heater_slot", 1}, {"holding", 2},  {"incubated", 1},  {"obstructs", 2},
                  {"on", 2},         {"station_of", 2}, {"sterilised", 1}, {"steriliser_slot", 1}};

  ActionTemplate navigate{"navigate", {{"?b", "base"}, {"?st", "station"}}, {}, patterns({"at(?b,?st)"}),
                          patterns({"at(?b,*)"}), MotionClass::Transit, "", "?st", 0.0};
  ActionTemplate pick{"pick", {{"?o", "any"}}, patterns({"clear(?o)"}), patterns({"holding($agent,?o)"}),
                      patterns({"on(?o,*)"}), MotionClass::Transfer, "?o", "hand", 0.0};
  ActionTemplate place{"place", {{"?o", "any"}, {"?to", "slot"}}, patterns({"clear(?to)"}), patterns({"on(?o,?to)"}),
                       patterns({"holding(*,?o)", "clear(?to)"}), MotionClass::Transfer, "?o", "?to", 0.0};
  ActionTemplate sterilise{"sterilise", {{"?s", "sample"}, {"?slot", "slot"}},
                           patterns({"on(?s,?slot)", "steriliser_slot(?slot)"}), patterns({"sterilised(?s)"}), {},
                           MotionClass::Wait, "", "", config.sterilise_seconds};
  ActionTemplate incubate{"incubate", {{"?s", "sample"}, {"?slot", "slot"}},
                          patterns({"on(?s,?slot)", "heater_slot(?slot)", "sterilised(?s)"}),
                          patterns({"incubated(?s)"}), {}, MotionClass::Wait, "", "", config.incubate_seconds};
  ActionTemplate wash{"wash", {{"?g", "glass"}, {"?slot", "slot"}},
                      patterns({"on(?g,?slot)", "steriliser_slot(?slot)"}), patterns({"cleaned(?g)"}), {},
                      MotionClass::Wait, "", "", config.clean_seconds};
  s.actions = {navigate, pick, place, sterilise, incubate, wash};

  for (int i = 0; i < k; ++i) {
    s.init.insert(fact("steriliser_slot", {"ster_" + sid(i)}));
    s.init.insert(fact("heater_slot", {"heat_" + sid(i)}));
    s.init.insert(fact("aside_slot", {pid(i), "aside_" + pid(i)}));
    s.init.insert(fact("station_of", {"aside_" + pid(i), "st_bench"}));
    s.goal.required_facts.insert(fact("sterilised", {sid(i)}));
    s.goal.required_facts.insert(fact("incubated", {sid(i)}));
    s.goal.required_facts.insert(fact("on", {pid(i), "home_" + pid(i)}));
  }
  for (int j = 0; j < m; ++j) {
    s.init.insert(fact("steriliser_slot", {"ster_" + gid(j)}));
    s.goal.required_facts.insert(fact("cleaned", {gid(j)}));
    s.goal.required_facts.insert(fact("on", {gid(j), "bench_" + gid(j)}));
  }

  // Milestone graph. Each chain step is reached either by executing its arc or
  // by a leaf showing that it or a later step already holds.
  GraphBuilder g;
  g.t.name = "experiment";
  const auto root = g.node(NodeKind::Root, "experiment complete");
  g.node(NodeKind::Failure, "failure");
  auto transport = [](const std::string& obj, const std::string& from_st, const std::string& to_st,
                      const std::string& slot_id) {
    return std::vector<Fact>{fact("navigate", {"base", from_st}), fact("pick", {obj}),
                             fact("navigate", {"base", to_st}), fact("place", {obj, slot_id})};
  };
  struct Step {
    std::string label;
    std::vector<Fact> actions;
    std::vector<Fact> witness;
  };
  auto chain = [&](const std::vector<Step>& steps) {
    std::vector<std::uint32_t> ids;
    for (const auto& st : steps) ids.push_back(g.node(NodeKind::Internal, st.label));
    for (std::size_t i = 0; i < steps.size(); ++i) {
      if (i == 0) {
        g.arc(ids[i], {g.leaf(fact("clear", {steps[i].actions[1].args[0]}))}, 1.0, steps[i].actions);
      } else {
        g.arc(ids[i], {ids[i - 1]}, 1.0, steps[i].actions);
      }
      for (std::size_t j = i; j < steps.size(); ++j) {
        std::vector<std::uint32_t> leaves;
        for (const auto& w : steps[j].witness) leaves.push_back(g.leaf(w));
        g.arc(ids[i], leaves, 0.0);
      }
    }
    return ids;
  };
  std::vector<std::uint32_t> ends;
  std::vector<std::uint32_t> in_steriliser;
  for (int i = 0; i < k; ++i) {
    const std::string s_ = sid(i);
    auto ids = chain({
        {s_ + " in steriliser", transport(s_, "st_bench", "st_ster", "ster_" + s_), {fact("on", {s_, "ster_" + s_})}},
        {s_ + " sterilised", {fact("sterilise", {s_, "ster_" + s_})}, {fact("sterilised", {s_})}},
        {s_ + " in heater",
         transport(s_, "st_ster", "st_heat", "heat_" + s_),
         {fact("on", {s_, "heat_" + s_}), fact("sterilised", {s_})}},
        {s_ + " incubated", {fact("incubate", {s_, "heat_" + s_})}, {fact("incubated", {s_})}},
    });
    in_steriliser.push_back(ids.front());
    ends.push_back(ids.back());
  }
  for (int j = 0; j < m; ++j) {
    const std::string g_ = gid(j);
    auto ids = chain({
        {g_ + " in steriliser", transport(g_, "st_table", "st_ster", "ster_" + g_), {fact("on", {g_, "ster_" + g_})}},
        {g_ + " cleaned", {fact("wash", {g_, "ster_" + g_})}, {fact("cleaned", {g_})}},
        {g_ + " on bench",
         transport(g_, "st_ster", "st_bench", "bench_" + g_),
         {fact("on", {g_, "bench_" + g_}), fact("cleaned", {g_})}},
    });
    ends.push_back(ids.back());
  }
  for (int i = 0; i < k; ++i) {
    // a container goes back once its sample has left the bench
    const std::string p_ = pid(i);
    const auto home = g.node(NodeKind::Internal, p_ + " at home");
    g.arc(home, {g.leaf(fact("on", {p_, "home_" + p_}))}, 0.0);
    g.arc(home, {in_steriliser[i], g.leaf(fact("on", {p_, "aside_" + p_}))}, 1.0,
          {fact("navigate", {"base", "st_bench"}), fact("pick", {p_}), fact("place", {p_, "home_" + p_})});
    ends.push_back(home);
  }
  g.arc(root, ends, 0.0);
  s.graph = std::move(g.t);

  // Rearrangement stage: park an obstructing container on its aside slot.
  GraphBuilder r;
  r.t.name = std::string(kRearrangeStage);
  r.t.params = {{"?o", "container"}, {"?t", "any"}, {"?y", "slot"}, {"?st", "station"}};
  const auto rroot = r.node(NodeKind::Root, "obstruction cleared");
  r.node(NodeKind::Failure, "failure");
  const auto clear_o = r.node(NodeKind::Leaf, "clear(?o)", patterns({"clear(?o)"}));
  const auto clear_y = r.node(NodeKind::Leaf, "clear(?y)", patterns({"clear(?y)"}));
  const auto obs = r.node(NodeKind::Leaf, "obstructs(?o,?t)", patterns({"obstructs(?o,?t)"}));
  const auto moved = r.node(NodeKind::Internal, "?o aside");
  r.arc(moved, {clear_o, clear_y, obs}, 1.0, patterns({"navigate(base,?st)", "pick(?o)", "place(?o,?y)"}),
        patterns({"aside_slot(?o,?y)", "station_of(?y,?st)"}));
  r.arc(rroot, {moved}, 0.0);
  s.stages.push_back(std::move(r.t));

  canonicalize(s);
  return s;
}

}  // namespace eaog
