#include "eaog/geometric_world.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <queue>
#include <set>

#include "eaog/errors.hpp"

namespace eaog {

namespace {

std::atomic<std::uint64_t> g_plan_calls{0};

constexpr double kSpeed = 0.25;        // m/s for execution time
constexpr double kSettleSeconds = 0.5;  // per executed motion
constexpr double kAtTolerance = 1e-6;

[[noreturn]] void unknown(std::string_view id) {
  throw Error(ErrorCode::UnknownEntity, std::string(id), "unknown entity " + std::string(id));
}

double footprint_radius(const Footprint& fp) {
  return fp.shape == Footprint::Shape::Circle ? fp.radius : std::hypot(fp.hx, fp.hy);
}

}  // namespace

const Object& World::object(std::string_view id) const {
  auto it = objects.find(std::string(id));
  if (it == objects.end()) unknown(id);
  return it->second;
}

const Agent& World::agent(std::string_view id) const {
  auto it = agents.find(std::string(id));
  if (it == agents.end()) unknown(id);
  return it->second;
}

double World::base_z(std::string_view id) const {
  const Object& o = object(id);
  if (!o.stack_on) return 0.0;
  const Object& below = object(*o.stack_on);
  return below.movable ? top_z(below.id) : 0.0;
}

double World::top_z(std::string_view id) const { return base_z(id) + object(id).height; }

std::string World::support_root(std::string_view id) const {
  std::string cur(id);
  for (std::size_t guard = 0; guard <= objects.size(); ++guard) {
    const Object& o = object(cur);
    if (!o.movable || !o.stack_on) return cur;
    cur = *o.stack_on;
  }
  return cur;
}

std::vector<std::string> World::stack_above(std::string_view id) const {
  std::vector<std::string> out;
  std::vector<std::string> level{std::string(id)};
  while (!level.empty() && out.size() <= objects.size()) {
    std::vector<std::string> next;
    for (const auto& [oid, o] : objects) {
      if (o.stack_on && std::find(level.begin(), level.end(), *o.stack_on) != level.end() &&
          !holder_of(oid)) {
        next.push_back(oid);
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    level = std::move(next);
  }
  return out;
}

std::string World::stack_top(std::string_view id) const {
  auto above = stack_above(id);
  return above.empty() ? std::string(id) : above.back();
}

std::optional<std::string> World::holder_of(std::string_view object) const {
  for (const auto& [aid, a] : agents) {
    if (a.holding && *a.holding == object) return aid;
  }
  return std::nullopt;
}

Vec2 World::rest_point(const Agent& arm) const {
  return arm.anchor + rotate({kRestDistance, 0.0}, arm.yaw);
}

World make_world(const Scenario& scenario, std::uint64_t seed) {
  World w;
  w.rng_seed = seed;
  w.symbolic = scenario.init;
  double lo_x = 0, lo_y = 0, hi_x = 0, hi_y = 0;
  bool first = true;
  auto extend = [&](Vec2 p) {
    if (first) {
      lo_x = hi_x = p.x;
      lo_y = hi_y = p.y;
      first = false;
      return;
    }
    lo_x = std::min(lo_x, p.x);
    hi_x = std::max(hi_x, p.x);
    lo_y = std::min(lo_y, p.y);
    hi_y = std::max(hi_y, p.y);
  };
  for (const auto& d : scenario.objects) {
    Object o{d.id, d.kind, d.position, d.yaw, d.footprint, d.height, d.movable, std::nullopt};
    if (!d.support.empty()) o.stack_on = d.support;
    w.objects[d.id] = o;
    extend(d.position);
  }
  for (const auto& d : scenario.agents) {
    Agent a;
    a.id = d.id;
    a.kind = d.kind;
    a.anchor = d.position;
    a.yaw = d.yaw;
    a.reach = d.reach;
    a.clearance = d.clearance;
    a.radius = d.radius;
    a.mount = d.mount;
    if (!d.mount.empty()) a.mount_offset = d.position;
    a.config = d.position;
    w.agents[d.id] = a;
    if (d.mount.empty()) extend(d.position);
  }
  w.bounds = Box{{(lo_x + hi_x) / 2, (lo_y + hi_y) / 2}, (hi_x - lo_x) / 2 + 1.0, (hi_y - lo_y) / 2 + 1.0};
  update_mounts(w);
  for (auto& [id, a] : w.agents) {
    if (a.kind == AgentKind::Arm) a.config = w.rest_point(a);
  }
  return w;
}

void update_mounts(World& world) {
  for (auto& [id, a] : world.agents) {
    if (a.kind != AgentKind::Arm || a.mount.empty()) continue;
    const Agent& base = world.agent(a.mount);
    a.anchor = base.config + rotate(a.mount_offset, base.yaw);
    a.yaw = base.yaw;
  }
}

namespace {

// True when movable object `o` touches the arm link or end effector at `config`.
bool blocks_arm(const World& world, const Agent& arm, const Object& o, Vec2 config, double carried_radius) {
  if (!o.movable || world.holder_of(o.id) || world.top_z(o.id) <= arm.clearance) return false;
  const double ee = carried_radius > 0.0 ? carried_radius : kGripperRadius;
  if (footprint_segment_distance(o.footprint, o.position, arm.anchor, config) <
      kLinkRadius + kClearance - kPenetrationTolerance) {
    return true;
  }
  return footprint_point_distance(o.footprint, o.position, config) < ee + kClearance - kPenetrationTolerance;
}

}  // namespace

bool in_collision(const World& world, const Agent& agent, Vec2 config, std::span<const std::string> exempt,
                  double carried_radius, bool ignore_movable) {
  if (agent.kind == AgentKind::Base) {
    if (!world.bounds.contains(config)) return true;
    for (const auto& [id, o] : world.objects) {
      if (o.movable || o.height <= 0.0) continue;
      if (footprint_point_distance(o.footprint, o.position, config) < agent.radius + kClearance - kPenetrationTolerance) {
        return true;
      }
    }
    return false;
  }
  if (ignore_movable) return false;
  for (const auto& [id, o] : world.objects) {
    if (std::find(exempt.begin(), exempt.end(), id) != exempt.end()) continue;
    if (blocks_arm(world, agent, o, config, carried_radius)) return true;
  }
  return false;
}

namespace {

// One leg of a motion: straight-line planning problem for a fixed carried
// load and exemption set.
struct Phase {
  Vec2 start;
  Vec2 goal;
  double carried = 0.0;
  std::vector<std::string> exempt;
};

struct SearchResult {
  bool found = false;
  std::vector<Vec2> path;
  int expansions = 0;
};

SearchResult astar(const World& world, const Agent& agent, const Phase& phase, double res, int budget,
                   bool ignore_movable) {
  SearchResult out;
  auto free_at = [&](Vec2 p) {
    return !in_collision(world, agent, p, phase.exempt, phase.carried, ignore_movable);
  };
  const double link = res * 1.5;
  if (distance(phase.start, phase.goal) <= link) {
    if (!free_at(phase.goal)) return out;
    out.found = true;
    out.path = {phase.start, phase.goal};
    return out;
  }
  // search area
  double x0, x1, y0, y1;
  if (agent.kind == AgentKind::Arm) {
    x0 = agent.anchor.x - agent.reach;
    x1 = agent.anchor.x + agent.reach;
    y0 = agent.anchor.y - agent.reach;
    y1 = agent.anchor.y + agent.reach;
  } else {
    x0 = world.bounds.center.x - world.bounds.hx;
    x1 = world.bounds.center.x + world.bounds.hx;
    y0 = world.bounds.center.y - world.bounds.hy;
    y1 = world.bounds.center.y + world.bounds.hy;
  }
  const long i0 = static_cast<long>(std::ceil(x0 / res - 1e-9));
  const long i1 = static_cast<long>(std::floor(x1 / res + 1e-9));
  const long j0 = static_cast<long>(std::ceil(y0 / res - 1e-9));
  const long j1 = static_cast<long>(std::floor(y1 / res + 1e-9));
  if (i1 < i0 || j1 < j0) return out;
  const long nx = i1 - i0 + 1, ny = j1 - j0 + 1;
  const long n = nx * ny;
  auto point = [&](long idx) { return Vec2{(i0 + idx % nx) * res, (j0 + idx / nx) * res}; };
  std::vector<signed char> state(static_cast<std::size_t>(n), -1);  // -1 unknown, 0 free, 1 blocked
  auto cell_free = [&](long idx) {
    auto& s = state[static_cast<std::size_t>(idx)];
    if (s < 0) {
      const Vec2 p = point(idx);
      bool ok = true;
      if (agent.kind == AgentKind::Arm && distance(p, agent.anchor) > agent.reach + 1e-12) ok = false;
      s = (ok && free_at(p)) ? 0 : 1;
    }
    return s == 0;
  };
  auto cells_near = [&](Vec2 p) {
    std::vector<long> cells;
    const long ci = static_cast<long>(std::floor(p.x / res)), cj = static_cast<long>(std::floor(p.y / res));
    for (long dj = -1; dj <= 2; ++dj) {
      for (long di = -1; di <= 2; ++di) {
        const long i = ci + di, j = cj + dj;
        if (i < i0 || i > i1 || j < j0 || j > j1) continue;
        const long idx = (j - j0) * nx + (i - i0);
        if (distance(point(idx), p) <= link) cells.push_back(idx);
      }
    }
    return cells;
  };
  if (!free_at(phase.goal)) return out;
  const std::vector<long> goal_cells = cells_near(phase.goal);
  std::vector<char> is_goal_cell(static_cast<std::size_t>(n), 0);
  for (long c : goal_cells) is_goal_cell[static_cast<std::size_t>(c)] = 1;

  auto octile = [](Vec2 a, Vec2 b) {
    const double dx = std::abs(a.x - b.x), dy = std::abs(a.y - b.y);
    return std::max(dx, dy) + (std::sqrt(2.0) - 1.0) * std::min(dx, dy);
  };
  std::vector<double> g(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  std::vector<long> parent(static_cast<std::size_t>(n), -2);  // -1 = from start
  std::vector<char> closed(static_cast<std::size_t>(n), 0);
  using Entry = std::pair<double, long>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  for (long c : cells_near(phase.start)) {
    if (!cell_free(c)) continue;
    const double gc = distance(phase.start, point(c));
    if (gc < g[static_cast<std::size_t>(c)]) {
      g[static_cast<std::size_t>(c)] = gc;
      parent[static_cast<std::size_t>(c)] = -1;
      open.push({gc + octile(point(c), phase.goal), c});
    }
  }
  long reached = -1;
  static constexpr int kDi[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  static constexpr int kDj[8] = {0, 0, 1, -1, 1, -1, 1, -1};
  while (!open.empty()) {
    const auto [f, c] = open.top();
    open.pop();
    const auto cu = static_cast<std::size_t>(c);
    if (closed[cu]) continue;
    if (out.expansions >= budget) break;
    closed[cu] = 1;
    ++out.expansions;
    if (is_goal_cell[cu]) {
      reached = c;
      break;
    }
    const long ci = c % nx, cj = c / nx;
    for (int k = 0; k < 8; ++k) {
      const long ni = ci + kDi[k], nj = cj + kDj[k];
      if (ni < 0 || ni >= nx || nj < 0 || nj >= ny) continue;
      const long nb = nj * nx + ni;
      const auto nu = static_cast<std::size_t>(nb);
      if (closed[nu] || !cell_free(nb)) continue;
      const double step = (k < 4 ? 1.0 : std::sqrt(2.0)) * res;
      const double ng = g[cu] + step;
      if (ng < g[nu]) {
        g[nu] = ng;
        parent[nu] = c;
        open.push({ng + octile(point(nb), phase.goal), nb});
      }
    }
  }
  if (reached < 0) return out;
  std::vector<Vec2> cells;
  for (long c = reached; c >= 0; c = parent[static_cast<std::size_t>(c)]) cells.push_back(point(c));
  std::reverse(cells.begin(), cells.end());
  out.found = true;
  out.path.push_back(phase.start);
  out.path.insert(out.path.end(), cells.begin(), cells.end());
  out.path.push_back(phase.goal);
  return out;
}

void append_unique(std::vector<std::string>& v, const std::string& s) {
  if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
}

// Objects that never block a transfer: the manipulated object and the stacks
// it leaves from and goes to.
std::vector<std::string> transfer_exemptions(const World& world, const MotionQuery& q) {
  std::vector<std::string> ex;
  if (q.manipulated) {
    append_unique(ex, *q.manipulated);
    if (!world.holder_of(*q.manipulated)) {
      const std::string root = world.support_root(*q.manipulated);
      append_unique(ex, root);
      for (const auto& s : world.stack_above(root)) append_unique(ex, s);
    }
  }
  if (!q.goal_entity.empty() && q.goal_entity != "hand" && world.objects.contains(q.goal_entity)) {
    const std::string root = world.support_root(q.goal_entity);
    append_unique(ex, root);
    for (const auto& s : world.stack_above(root)) append_unique(ex, s);
  }
  std::sort(ex.begin(), ex.end());
  return ex;
}

struct PhasePlan {
  std::vector<Phase> phases;
  bool out_of_reach = false;
  std::vector<std::string> blockers;  // objects stacked on the manipulated one
};

PhasePlan phases_for(const World& world, const MotionQuery& q) {
  PhasePlan plan;
  const Agent& agent = world.agent(q.agent);
  if (q.motion_class == MotionClass::Transit) {
    plan.phases.push_back({q.start, q.goal, 0.0, {}});
    return plan;
  }
  if (agent.kind != AgentKind::Arm) {
    throw Error(ErrorCode::InvalidQuery, q.agent, "transfer needs an arm, got " + q.agent);
  }
  if (!q.manipulated) throw Error(ErrorCode::InvalidQuery, q.agent, "transfer without an object");
  const Object& obj = world.object(*q.manipulated);
  const double carried = footprint_radius(obj.footprint);
  const auto ex = transfer_exemptions(world, q);
  const Vec2 rest = world.rest_point(agent);
  auto in_reach = [&](Vec2 p) { return distance(p, agent.anchor) <= agent.reach + 1e-9; };
  switch (q.mode) {
    case TransferMode::PickPlace:
    case TransferMode::Pick: {
      if (world.holder_of(obj.id)) {
        throw Error(ErrorCode::InvalidQuery, obj.id, obj.id + " is already held");
      }
      if (!in_reach(obj.position)) plan.out_of_reach = true;
      plan.blockers = world.stack_above(obj.id);
      plan.phases.push_back({q.start, obj.position, 0.0, ex});
      if (q.mode == TransferMode::PickPlace) {
        if (!in_reach(q.goal)) plan.out_of_reach = true;
        plan.phases.push_back({obj.position, q.goal, carried, ex});
        plan.phases.push_back({q.goal, rest, 0.0, ex});
      } else {
        plan.phases.push_back({obj.position, rest, carried, ex});
      }
      break;
    }
    case TransferMode::Place: {
      if (world.holder_of(obj.id) != q.agent) {
        throw Error(ErrorCode::InvalidQuery, obj.id, q.agent + " does not hold " + obj.id);
      }
      if (!in_reach(q.goal)) plan.out_of_reach = true;
      plan.phases.push_back({q.start, q.goal, carried, ex});
      plan.phases.push_back({q.goal, rest, 0.0, ex});
      break;
    }
  }
  return plan;
}

void check_query(const World& world, const MotionQuery& q) {
  const Agent& agent = world.agent(q.agent);
  if (q.resolution <= 0.0 || q.max_expansions <= 0) {
    throw Error(ErrorCode::InvalidQuery, q.agent, "resolution and budget must be positive");
  }
  if (!q.goal_region.contains(q.goal, 1e-9)) {
    throw Error(ErrorCode::InvalidQuery, q.agent, "goal outside its goal region");
  }
  if ((q.motion_class == MotionClass::Transit) != (agent.kind == AgentKind::Base)) {
    throw Error(ErrorCode::InvalidQuery, q.agent, "motion class does not match agent " + q.agent);
  }
  double carried = 0.0;
  std::vector<std::string> ex;
  if (agent.kind == AgentKind::Arm) {
    ex = transfer_exemptions(world, q);
    if (q.mode == TransferMode::Place && q.manipulated) carried = footprint_radius(world.object(*q.manipulated).footprint);
  }
  if (in_collision(world, agent, q.start, ex, carried)) {
    throw Error(ErrorCode::InvalidQuery, q.agent, "start configuration of " + q.agent + " is in collision");
  }
}

// Ghost plan that ignores movable objects; returns the movable obstacles that
// touch its waypoints, in path order.
std::vector<std::string> ghost_obstructors(const World& world, const MotionQuery& q, const PhasePlan& plan) {
  const Agent& agent = world.agent(q.agent);
  std::vector<std::string> out = plan.blockers;
  if (plan.out_of_reach) return {};
  for (const auto& phase : plan.phases) {
    SearchResult ghost = astar(world, agent, phase, q.resolution, q.max_expansions, true);
    if (!ghost.found) return {};
    if (agent.kind != AgentKind::Arm) continue;
    for (const Vec2& p : ghost.path) {
      for (const auto& [id, o] : world.objects) {
        if (std::find(phase.exempt.begin(), phase.exempt.end(), id) != phase.exempt.end()) continue;
        if (std::find(out.begin(), out.end(), id) != out.end()) continue;
        if (blocks_arm(world, agent, o, p, phase.carried)) out.push_back(id);
      }
    }
  }
  return out;
}

}  // namespace

MotionResult plan_motion(const World& world, const MotionQuery& query) {
  ++g_plan_calls;
  const auto t0 = std::chrono::steady_clock::now();
  check_query(world, query);
  MotionResult r;
  r.query = query;
  r.world_signature = full_signature(world);
  const PhasePlan plan = phases_for(world, query);
  const Agent& agent = world.agent(query.agent);
  bool ok = !plan.out_of_reach && plan.blockers.empty();
  int budget = query.max_expansions;
  for (std::size_t i = 0; ok && i < plan.phases.size(); ++i) {
    SearchResult s = astar(world, agent, plan.phases[i], query.resolution, budget, false);
    r.expansions_used += s.expansions;
    budget -= s.expansions;
    if (!s.found) {
      ok = false;
      break;
    }
    auto begin = s.path.begin();
    if (!r.path.empty()) ++begin;  // shared junction point
    r.path.insert(r.path.end(), begin, s.path.end());
  }
  if (ok) {
    r.feasible = true;
  } else {
    r.path.clear();
    r.obstructors = ghost_obstructors(world, query, plan);
  }
  r.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<std::string> obstructors(const World& world, const MotionQuery& query) {
  check_query(world, query);
  return ghost_obstructors(world, query, phases_for(world, query));
}

World commit_motion(World world, const MotionQuery& query, std::span<const Vec2> path) {
  Agent& agent = world.agents.at(query.agent);
  if (query.motion_class == MotionClass::Transit) {
    agent.config = path.empty() ? query.goal : path.back();
    agent.anchor = agent.config;
    if (auto it = world.objects.find(query.goal_entity); it != world.objects.end()) agent.yaw = it->second.yaw;
    update_mounts(world);
    for (auto& [id, a] : world.agents) {
      if (a.kind != AgentKind::Arm || a.mount != agent.id) continue;
      a.config = world.rest_point(a);
      if (a.holding) world.objects.at(*a.holding).position = a.config;
    }
    return world;
  }
  const std::string obj = *query.manipulated;
  const Vec2 rest = world.rest_point(agent);
  auto place = [&] {
    // stack on whatever now tops the goal entity
    std::optional<std::string> on;
    if (world.objects.contains(query.goal_entity)) on = world.stack_top(query.goal_entity);
    if (on == obj) on = world.objects.at(obj).stack_on;
    Object& o = world.objects.at(obj);
    o.position = query.goal;
    o.stack_on = on;
    world.agents.at(query.agent).holding.reset();
  };
  switch (query.mode) {
    case TransferMode::PickPlace:
      place();
      break;
    case TransferMode::Pick: {
      Object& o = world.objects.at(obj);
      o.stack_on.reset();
      o.position = rest;
      agent.holding = obj;
      break;
    }
    case TransferMode::Place:
      place();
      break;
  }
  world.agents.at(query.agent).config = path.empty() ? rest : path.back();
  return world;
}

namespace {

void apply_symbolic_effects(World& world, const Action& action) {
  auto match = [](const Fact& pattern, const Fact& f) {
    if (pattern.predicate != f.predicate || pattern.args.size() != f.args.size()) return false;
    for (std::size_t i = 0; i < f.args.size(); ++i) {
      if (pattern.args[i] != "*" && pattern.args[i] != f.args[i]) return false;
    }
    return true;
  };
  for (const auto& d : action.effects_del) {
    if (is_derived_predicate(d.predicate)) continue;
    std::erase_if(world.symbolic, [&](const Fact& f) { return match(d, f); });
  }
  for (const auto& a : action.effects_add) {
    if (!is_derived_predicate(a.predicate)) world.symbolic.insert(a);
  }
}

double path_length(std::span<const Vec2> path) {
  double len = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) len += distance(path[i - 1], path[i]);
  return len;
}

}  // namespace

World execute(const World& world, const std::string& agent, const MotionResult& result, const Action& action) {
  if (!result.feasible) {
    throw Error(ErrorCode::InvalidQuery, agent, "cannot execute an infeasible motion");
  }
  if (result.query.agent != agent) {
    throw Error(ErrorCode::InvalidQuery, agent, "motion was planned for " + result.query.agent);
  }
  if (full_signature(world) != result.world_signature) {
    throw Error(ErrorCode::StaleResult, agent, "world changed since the motion was planned");
  }
  World next = commit_motion(world, result.query, result.path);
  apply_symbolic_effects(next, action);
  next.clock += path_length(result.path) / kSpeed + kSettleSeconds;
  return next;
}

World execute_symbolic(const World& world, const Action& action) {
  World next = world;
  apply_symbolic_effects(next, action);
  if (action.motion_class == MotionClass::Wait) next.clock += action.duration;
  return next;
}

FactSet WorldState::facts() const {
  FactSet out = derived;
  out.insert(symbolic.begin(), symbolic.end());
  return out;
}

FactSet derived_facts(const World& world) {
  FactSet out;
  std::set<std::string> covered;
  for (const auto& [id, o] : world.objects) {
    if (o.stack_on && !world.holder_of(id)) {
      out.insert({"on", {id, *o.stack_on}});
      covered.insert(*o.stack_on);
    }
  }
  for (const auto& [id, o] : world.objects) {
    if (o.kind == kStationKind || o.kind == kHandoverKind || o.kind == kFixtureKind) continue;
    if (covered.contains(id) || world.holder_of(id)) continue;
    out.insert({"clear", {id}});
  }
  for (const auto& [id, a] : world.agents) {
    if (a.holding) out.insert({"holding", {id, *a.holding}});
    if (a.kind != AgentKind::Base) continue;
    for (const auto& [oid, o] : world.objects) {
      if (o.kind == kStationKind && distance(o.position, a.config) <= kAtTolerance) out.insert({"at", {id, oid}});
    }
  }
  return out;
}

namespace {

struct Fnv {
  std::uint64_t h = 1469598103934665603ull;
  void bytes(std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    h ^= 0xff;
    h *= 1099511628211ull;
  }
  void num(double v) { bytes(std::to_string(std::llround(v * 1e9))); }
  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
  }
};

void hash_state(Fnv& f, const World& world) {
  for (const auto& [id, o] : world.objects) {
    f.bytes(id);
    f.num(o.position.x);
    f.num(o.position.y);
    f.num(o.yaw);
    f.bytes(o.stack_on.value_or("-"));
  }
  for (const auto& fact : derived_facts(world)) f.bytes(fact.str());
  for (const auto& fact : world.symbolic) f.bytes(fact.str());
}

}  // namespace

std::string state_signature(const World& world) {
  Fnv f;
  hash_state(f, world);
  return f.hex();
}

std::string full_signature(const World& world) {
  Fnv f;
  hash_state(f, world);
  for (const auto& [id, a] : world.agents) {
    f.bytes(id);
    f.num(a.anchor.x);
    f.num(a.anchor.y);
    f.num(a.yaw);
    f.num(a.config.x);
    f.num(a.config.y);
    f.bytes(a.holding.value_or("-"));
  }
  return f.hex();
}

WorldState snapshot(const World& world) {
  WorldState s;
  for (const auto& [id, o] : world.objects) s.objects[id] = {o.position, o.yaw, o.stack_on};
  for (const auto& [id, a] : world.agents) {
    s.agent_configs[id] = a.config;
    if (a.holding) s.holdings[id] = *a.holding;
  }
  s.clock = world.clock;
  s.derived = derived_facts(world);
  s.symbolic = world.symbolic;
  s.signature = state_signature(world);
  return s;
}

std::uint64_t plan_motion_invocations() { return g_plan_calls.load(); }

}  // namespace eaog
