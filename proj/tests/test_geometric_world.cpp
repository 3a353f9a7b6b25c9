#include <doctest.h>

#include "eaog/errors.hpp"
#include "support.hpp"

using namespace eaog;
using namespace eaog::testing;

namespace {

// One arm at the origin facing +y, a block and a slot, optional walls of boxes.
World arm_world(std::vector<ObjectDecl> extra = {}) {
  Scenario s;
  s.name = "w";
  AgentDecl a;
  a.id = "arm";
  a.position = {0, 0};
  a.yaw = std::numbers::pi / 2;
  a.reach = 0.7;
  a.clearance = 0.05;
  s.agents.push_back(a);
  ObjectDecl b;
  b.id = "block";
  b.kind = "block";
  b.position = {-0.3, 0.4};
  b.footprint.radius = 0.02;
  b.height = 0.04;
  b.movable = true;
  b.support = "slot_a";
  ObjectDecl sa;
  sa.id = "slot_a";
  sa.kind = "slot";
  sa.position = {-0.3, 0.4};
  sa.footprint.radius = 0.03;
  ObjectDecl sb = sa;
  sb.id = "slot_b";
  sb.position = {0.3, 0.4};
  s.objects = {b, sa, sb};
  for (auto& e : extra) s.objects.push_back(e);
  canonicalize(s);
  return make_world(s);
}

ObjectDecl tall_box(const std::string& id, Vec2 p, double hx, double hy) {
  ObjectDecl o;
  o.id = id;
  o.kind = "box";
  o.position = p;
  o.footprint.shape = Footprint::Shape::Box;
  o.footprint.hx = hx;
  o.footprint.hy = hy;
  o.height = 0.1;
  o.movable = true;
  return o;
}

MotionQuery transfer(const World& w, const std::string& goal_entity) {
  MotionQuery q;
  q.agent = "arm";
  q.motion_class = MotionClass::Transfer;
  q.mode = TransferMode::PickPlace;
  q.start = w.agent("arm").config;
  q.manipulated = "block";
  q.goal_entity = goal_entity;
  q.goal = w.object(goal_entity).position;
  q.goal_region = Box{q.goal, kRegionTolerance, kRegionTolerance};
  return q;
}

}  // namespace

TEST_CASE("empty workspace gives an 8-connected path") {
  const World w = arm_world();
  const MotionResult r = plan_motion(w, transfer(w, "slot_b"));
  REQUIRE(r.feasible);
  CHECK(r.obstructors.empty());
  CHECK(r.path.front() == w.agent("arm").config);
  CHECK(r.path.back() == w.rest_point(w.agent("arm")));
  for (std::size_t i = 1; i + 1 < r.path.size(); ++i) {
    CHECK(distance(r.path[i - 1], r.path[i]) <= std::sqrt(2.0) * kDefaultResolution * 1.5 + 1e-9);
  }
  CHECK(r.world_signature == full_signature(w));
}

TEST_CASE("out of reach is infeasible with no obstructors") {
  ObjectDecl far;
  far.id = "far";
  far.kind = "slot";
  far.position = {0.0, 1.2};
  far.footprint.radius = 0.03;
  const World w = arm_world({far});
  const MotionQuery q = transfer(w, "far");
  const MotionResult r = plan_motion(w, q);
  CHECK_FALSE(r.feasible);
  CHECK(r.obstructors.empty());
  CHECK(obstructors(w, q).empty());
}

TEST_CASE("a wall of one box is the obstructor and removing it helps") {
  // a long box across the workspace covers every route to slot_b
  const World w = arm_world({tall_box("wall", {0.1, 0.35}, 0.02, 0.4)});
  const MotionQuery q = transfer(w, "slot_b");
  const MotionResult r = plan_motion(w, q);
  CHECK_FALSE(r.feasible);
  CHECK(r.obstructors == std::vector<std::string>{"wall"});
  CHECK(plan_motion(without(w, {"wall"}), q).feasible);
}

TEST_CASE("two boxes on the ghost path come back in path order") {
  const World w = arm_world({tall_box("wall1", {-0.05, 0.35}, 0.02, 0.4), tall_box("wall2", {0.15, 0.35}, 0.02, 0.4)});
  const MotionQuery q = transfer(w, "slot_b");
  const auto obs = obstructors(w, q);
  CHECK(obs == std::vector<std::string>{"wall1", "wall2"});
  CHECK_FALSE(plan_motion(without(w, {"wall1"}), q).feasible);
  CHECK(plan_motion(without(w, obs), q).feasible);
}

TEST_CASE("random blocked worlds satisfy the removal oracle") {
  std::mt19937_64 rng(3);
  int blocked = 0;
  for (int i = 0; i < 40; ++i) {
    const QueryCase c = random_query_case(rng);
    if (plan_motion(c.world, c.query).feasible) continue;
    ++blocked;
    const auto obs = obstructors(c.world, c.query);
    if (obs.empty()) {
      CHECK(c.out_of_reach);
    } else {
      CHECK(plan_motion(without(c.world, obs), c.query).feasible);
    }
  }
  CHECK(blocked > 10);
}

TEST_CASE("invalid queries") {
  const World w = arm_world();
  MotionQuery q = transfer(w, "slot_b");
  q.resolution = 0;
  CHECK_THROWS_AS(plan_motion(w, q), Error);
  q = transfer(w, "slot_b");
  q.goal = {5, 5};
  CHECK_THROWS_AS(plan_motion(w, q), Error);
  q = transfer(w, "slot_b");
  q.motion_class = MotionClass::Transit;
  CHECK_THROWS_AS(plan_motion(w, q), Error);
  q = transfer(w, "slot_b");
  q.agent = "nobody";
  CHECK_THROWS_AS(plan_motion(w, q), Error);
}

TEST_CASE("execute places, restacks and detects staleness") {
  const World w = arm_world();
  const MotionQuery q = transfer(w, "slot_b");
  const MotionResult r = plan_motion(w, q);
  REQUIRE(r.feasible);
  const Scenario s = [] {
    Scenario x;
    x.predicates = {{"on", 2}};
    ActionTemplate m{"move", {{"?o", "any"}, {"?to", "any"}}, {}, {}, {}, MotionClass::Transfer, "?o", "?to", 0.0};
    x.actions = {m};
    return x;
  }();
  const Action a = instantiate(s.actions[0], {"block", "slot_b"});
  const World after = execute(w, "arm", r, a);
  CHECK(after.object("block").position == w.object("slot_b").position);
  CHECK(after.object("block").stack_on == std::optional<std::string>("slot_b"));
  CHECK_FALSE(after.agent("arm").holding.has_value());
  CHECK(after.clock > w.clock);
  const WorldState snap = snapshot(after);
  CHECK(snap.derived.contains(F("on(block,slot_b)")));
  CHECK(snap.derived.contains(F("clear(slot_a)")));
  CHECK_FALSE(snap.derived.contains(F("clear(slot_b)")));
  try {
    execute(after, "arm", r, a);
    FAIL("expected StaleResult");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::StaleResult);
  }
}

TEST_CASE("pick then place through separate queries") {
  World w = arm_world();
  MotionQuery pick = transfer(w, "slot_b");
  pick.mode = TransferMode::Pick;
  pick.goal_entity.clear();
  pick.goal = w.object("block").position;
  pick.goal_region = Box{pick.goal, kRegionTolerance, kRegionTolerance};
  const MotionResult r1 = plan_motion(w, pick);
  REQUIRE(r1.feasible);
  w = commit_motion(w, pick, r1.path);
  CHECK(w.agent("arm").holding == std::optional<std::string>("block"));
  CHECK(snapshot(w).derived.contains(F("holding(arm,block)")));

  MotionQuery place = transfer(w, "slot_b");
  place.mode = TransferMode::Place;
  place.start = w.agent("arm").config;
  const MotionResult r2 = plan_motion(w, place);
  REQUIRE(r2.feasible);
  w = commit_motion(w, place, r2.path);
  CHECK(w.object("block").position == w.object("slot_b").position);
  CHECK_FALSE(w.agent("arm").holding.has_value());
}

TEST_CASE("fresh hanoi snapshot facts") {
  const Scenario s = gen_hanoi(3, default_hanoi_layout(true));
  const World w = make_world(s);
  const WorldState a = snapshot(w), b = snapshot(w);
  CHECK(a == b);
  const FactSet want{F("on(d3,pegA)"), F("on(d2,d3)"), F("on(d1,d2)"),
                     F("clear(d1)"),   F("clear(pegB)"), F("clear(pegC)")};
  CHECK(a.derived == want);
  CHECK(w.top_z("d1") == doctest::Approx(0.06));
  CHECK(w.stack_above("pegA") == std::vector<std::string>{"d3", "d2", "d1"});
  CHECK(w.stack_top("pegA") == "d1");
  CHECK(w.support_root("d1") == "pegA");
}

TEST_CASE("signatures track poses") {
  const World w = arm_world();
  World moved = w;
  moved.objects.at("block").position.x += 1e-6;
  CHECK(state_signature(w) != state_signature(moved));
  World arm_moved = w;
  arm_moved.agents.at("arm").config.x += 0.01;
  CHECK(state_signature(w) == state_signature(arm_moved));
  CHECK(full_signature(w) != full_signature(arm_moved));
}

TEST_CASE("invocation counter counts every call") {
  const World w = arm_world();
  const auto before = plan_motion_invocations();
  (void)plan_motion(w, transfer(w, "slot_b"));
  MotionQuery bad = transfer(w, "slot_b");
  bad.resolution = -1;
  CHECK_THROWS(plan_motion(w, bad));
  CHECK(plan_motion_invocations() - before == 2);
}

TEST_CASE("mounted arms follow their base") {
  const Scenario s = gen_habitat();
  World w = make_world(s);
  const Agent& base = w.agent("base");
  const Agent& left = w.agent("left_arm");
  CHECK(distance(left.anchor, base.config) == doctest::Approx(std::hypot(0.1, 0.2)));
  MotionQuery q;
  q.agent = "base";
  q.motion_class = MotionClass::Transit;
  q.start = base.config;
  q.goal_entity = "st_bench";
  q.goal = w.object("st_bench").position;
  q.goal_region = Box{q.goal, kRegionTolerance, kRegionTolerance};
  const MotionResult r = plan_motion(w, q);
  REQUIRE(r.feasible);
  w = execute(w, "base", r, s.resolve_action(F("navigate(base,st_bench)")));
  CHECK(w.agent("base").config == w.object("st_bench").position);
  CHECK(distance(w.agent("left_arm").anchor, w.agent("base").config) == doctest::Approx(std::hypot(0.1, 0.2)));
  CHECK(snapshot(w).derived.contains(F("at(base,st_bench)")));
}
