#include <doctest.h>

#include "eaog/errors.hpp"
#include "eaog/tmp_interface.hpp"
#include "support.hpp"

using namespace eaog;
using namespace eaog::testing;

namespace {

std::vector<Action> calls(const Scenario& s, std::initializer_list<const char*> texts) {
  std::vector<Action> out;
  for (const char* t : texts) out.push_back(s.resolve_action(F(t)));
  return out;
}

}  // namespace

TEST_CASE("hanoi grounding picks the arm that reaches both ends") {
  const Scenario s = gen_hanoi(3, default_hanoi_layout(false));
  World w = make_world(s);
  // first d1 goes to C, then C->B is a right arm job
  auto g = ground(calls(s, {"move(d1,d2,pegC)"}), {}, w, s);
  REQUIRE(g.queries.size() == 1);
  CHECK(g.queries[0].agent == "left_arm");
  CHECK(g.queries[0].query.motion_class == MotionClass::Transfer);
  CHECK(g.queries[0].action.agent == "left_arm");
  auto out = dispatch(g, w, PlanningBudget{});
  REQUIRE(out.size() == 1);
  CHECK(out[0].status == OutcomeStatus::Executed);
  CHECK(out[0].attempts == 1);

  g = ground(calls(s, {"move(d1,pegC,pegB)"}), {}, w, s);
  REQUIRE(g.queries.size() == 1);
  CHECK(g.queries[0].agent == "right_arm");
  CHECK(g.queries[0].query.goal == s.find_object("pegB")->position);
}

TEST_CASE("out of reach for one arm becomes a handover pair") {
  const Scenario s = gen_hanoi(3, default_hanoi_layout(false));
  World w = make_world(s);
  const auto g = ground(calls(s, {"move(d1,d2,pegB)"}), {}, w, s);
  REQUIRE(g.queries.size() == 2);
  CHECK(g.queries[0].agent == "left_arm");
  CHECK(g.queries[0].query.goal_entity == "stand");
  CHECK(g.queries[1].agent == "right_arm");
  CHECK(g.queries[1].query.goal_entity == "pegB");
  CHECK(g.queries[0].group == g.queries[1].group);
  CHECK(g.queries[0].query.motion_class == MotionClass::Handover);
  const auto out = dispatch(g, w, PlanningBudget{});
  REQUIRE(out.size() == 2);
  CHECK(out[0].status == OutcomeStatus::Executed);
  CHECK(out[1].status == OutcomeStatus::Executed);
  CHECK(w.object("d1").position == s.find_object("pegB")->position);
  CHECK(w.object("d1").stack_on == std::optional<std::string>("pegB"));
}

TEST_CASE("a blocked handover rolls back and reports the obstructor") {
  const Scenario s = gen_hanoi(3, default_hanoi_layout(false));
  World w = make_world(s);
  (void)dispatch(ground(calls(s, {"move(d1,d2,pegC)"}), {}, w, s), w, PlanningBudget{});
  const World before = w;
  const auto g = ground(calls(s, {"move(d2,d3,pegB)"}), {}, w, s);
  REQUIRE(g.queries.size() == 2);
  const auto out = dispatch(g, w, PlanningBudget{});
  REQUIRE(out.size() == 1);
  CHECK(out[0].status == OutcomeStatus::MotionInfeasible);
  CHECK(out[0].attempts == 6);
  CHECK(out[0].attempt_log.size() == 6);
  CHECK(out[0].obstructors == std::vector<std::string>{"d1"});
  CHECK(w == before);
}

TEST_CASE("retry count follows the budget") {
  const Scenario s = gen_hanoi(3, default_hanoi_layout(false));
  World w = make_world(s);
  (void)dispatch(ground(calls(s, {"move(d1,d2,pegC)"}), {}, w, s), w, PlanningBudget{});
  PlanningBudget b;
  b.retries = 2;
  const auto out = dispatch(ground(calls(s, {"move(d2,d3,pegB)"}), {}, w, s), w, b);
  CHECK(out.back().attempts == 3);
}

TEST_CASE("symbolic actions are skipped by grounding and applied by dispatch") {
  const Scenario s = gen_habitat();
  World w = make_world(s);
  w.objects.at("s1").position = w.object("ster_s1").position;
  w.objects.at("s1").stack_on = "ster_s1";
  w.objects.at("s2").position = w.object("heat_s2").position;
  w.objects.at("s2").stack_on = "heat_s2";
  w.symbolic.insert(F("sterilised(s2)"));
  const auto g = ground(calls(s, {"sterilise(s1,ster_s1)", "incubate(s2,heat_s2)"}), {}, w, s);
  CHECK(g.queries.empty());
  REQUIRE(g.skipped_symbolic.size() == 2);
  const double clock = w.clock;
  const auto out = dispatch(g, w, PlanningBudget{});
  REQUIRE(out.size() == 2);
  for (const auto& o : out) {
    CHECK(o.status == OutcomeStatus::Executed);
    CHECK(o.motion_seconds == 0.0);
    CHECK(o.attempts == 0);
  }
  CHECK(w.symbolic.contains(F("sterilised(s1)")));
  CHECK(w.symbolic.contains(F("incubated(s2)")));
  CHECK(w.clock == doctest::Approx(clock + 420.0));
}

TEST_CASE("grounding failures and stale worlds") {
  const Scenario s = gen_hanoi(3, default_hanoi_layout(false));
  World w = make_world(s);
  auto lonely = gen_hanoi(3, default_hanoi_layout(false));
  std::erase_if(lonely.objects, [](const ObjectDecl& o) { return o.kind == kHandoverKind; });
  World lw = make_world(lonely);
  try {
    ground(calls(lonely, {"move(d1,d2,pegB)"}), {}, lw, lonely);
    FAIL("expected GroundingFailed");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GroundingFailed);
  }
  const auto g = ground(calls(s, {"move(d1,d2,pegC)"}), {}, w, s);
  World changed = w;
  changed.objects.at("d3").position.x += 0.001;
  try {
    dispatch(g, changed, PlanningBudget{});
    FAIL("expected StaleWorld");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::StaleWorld);
  }
}

TEST_CASE("habitat transport grounds transit and transfer queries") {
  const Scenario s = gen_habitat();
  World w = make_world(s);
  const auto g = ground(calls(s, {"navigate(base,st_table)", "pick(g1)", "navigate(base,st_ster)",
                                  "place(g1,ster_g1)"}),
                        {}, w, s);
  REQUIRE(g.queries.size() == 4);
  CHECK(g.queries[0].query.motion_class == MotionClass::Transit);
  CHECK(g.queries[0].agent == "base");
  CHECK(g.queries[1].query.mode == TransferMode::Pick);
  CHECK(g.queries[3].query.mode == TransferMode::Place);
  CHECK(g.queries[3].agent == g.queries[1].agent);
  const auto out = dispatch(g, w, PlanningBudget{});
  for (const auto& o : out) CHECK(o.status == OutcomeStatus::Executed);
  CHECK(w.object("g1").stack_on == std::optional<std::string>("ster_g1"));
}

TEST_CASE("alternate goals stay inside the region and depend on the seed") {
  const Box region{{1.0, 2.0}, 0.01, 0.01};
  std::set<std::pair<double, double>> seen;
  for (int i = 1; i <= 5; ++i) {
    const Vec2 p = alternate_goal(region, i, 0);
    CHECK(region.contains(p));
    seen.insert({p.x, p.y});
    CHECK(alternate_goal(region, i, 0) == p);
  }
  CHECK(seen.size() == 5);
  CHECK_FALSE(alternate_goal(region, 1, 0) == alternate_goal(region, 1, 7));
}
