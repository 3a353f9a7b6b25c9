#include <doctest.h>

#include <sstream>

#include "eaog/errors.hpp"
#include "eaog/planner_loop.hpp"
#include "eaog/report.hpp"
#include "support.hpp"

using namespace eaog;
using namespace eaog::testing;

TEST_CASE("hanoi goal and disk bounds") {
  const Scenario s = gen_hanoi(3, default_hanoi_layout(false));
  CHECK(s.goal.required_facts == FactSet{F("on(d3,pegC)"), F("on(d2,d3)"), F("on(d1,d2)")});
  CHECK(s.find_stage(kRearrangeStage) != nullptr);
  CHECK(s.find_object("stand")->kind == kHandoverKind);
  CHECK(s.find_object("d1")->footprint.radius < s.find_object("d3")->footprint.radius);
  for (int n : {2, 9}) {
    try {
      gen_hanoi(n, default_hanoi_layout(true));
      FAIL("expected BadDiskCount");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::BadDiskCount);
    }
  }
  CHECK_NOTHROW(gen_hanoi(8, default_hanoi_layout(true)));
}

TEST_CASE("default layouts") {
  const HanoiLayout dual = default_hanoi_layout(false);
  CHECK(distance(dual.pegs[0], dual.pegs[1]) == doctest::Approx(0.6));
  CHECK(distance(dual.pegs[1], dual.pegs[2]) == doctest::Approx(0.6));
  CHECK(distance(dual.pegs[0], dual.pegs[2]) == doctest::Approx(0.6));
  REQUIRE(dual.arms.size() == 2);
  // each arm misses exactly the far peg
  for (const auto& arm : dual.arms) {
    int reached = 0;
    for (const auto& p : dual.pegs) reached += distance(arm.anchor, p) <= arm.reach;
    CHECK(reached == 2);
    CHECK(distance(arm.anchor, dual.handover) <= arm.reach);
  }
  const HanoiLayout omni = default_hanoi_layout(true);
  CHECK(omni.arms.size() == 1);
  CHECK(omni.omnipotent);
}

TEST_CASE("state costs match the closed form") {
  const auto costs = hanoi_state_costs(4);
  CHECK(costs.size() == 81);
  CHECK(costs.front().distance == 15);  // everything on peg A
  CHECK(costs.back().distance == 0);
  int max = 0;
  for (const auto& c : costs) max = std::max(max, c.distance);
  CHECK(max == 15);
}

TEST_CASE("omnipotent hanoi n=4 is optimal") {
  const PlanTrace t = run(gen_hanoi(4, default_hanoi_layout(true)), RunConfig{});
  CHECK(t.final_status == FinalStatus::GoalAchieved);
  CHECK(t.metrics.executed_actions == 15);
  CHECK(t.metrics.depth == 15);
}

TEST_CASE("habitat completion facts hold at the goal") {
  HabitatConfig cfg;
  const Scenario s = gen_habitat(cfg);
  const PlanTrace t = run(s, RunConfig{});
  REQUIRE(t.final_status == FinalStatus::GoalAchieved);
  const FactSet facts = snapshot(t.final_world).facts();
  for (const auto& f : s.goal.required_facts) CHECK(facts.contains(f));
  bool expanded = false;
  for (const auto& tr : t.transitions) expanded = expanded || tr.reason == TransitionReason::MotionFailure;
  CHECK(expanded);
  CHECK_THROWS_AS(gen_habitat(HabitatConfig{0, 1}), Error);
}

TEST_CASE("every habitat size finishes") {
  for (int k = 1; k <= 4; ++k) {
    for (int m = 1; m <= 3; ++m) {
      CAPTURE(k);
      CAPTURE(m);
      const PlanTrace t = run(gen_habitat(HabitatConfig{k, m}), RunConfig{});
      CHECK(t.final_status == FinalStatus::GoalAchieved);
    }
  }
  CHECK_THROWS_AS(gen_habitat(HabitatConfig{5, 1}), Error);
  CHECK_THROWS_AS(gen_habitat(HabitatConfig{1, 4}), Error);
}

TEST_CASE("metrics document mirrors the report tables") {
  const PlanTrace t = run(gen_hanoi(3, default_hanoi_layout(false)), RunConfig{});
  const auto doc = metrics_document(t);
  for (const char* key : {"Objects", "d", "TP [s]", "Right MP [s]", "Right attempts", "Left MP [s]", "Left attempts"}) {
    CHECK(doc.at("table1").contains(key));
  }
  CHECK(doc.at("table1").at("d") == t.metrics.depth);
  CHECK(doc.at("table1").at("Objects") == 3);
  CHECK(doc.at("table1").at("Right attempts").get<long>() + doc.at("table1").at("Left attempts").get<long>() ==
        t.metrics.plan_motion_calls);
  REQUIRE(doc.at("table2").size() == std::size(kModuleRows));
  for (std::size_t i = 0; i < std::size(kModuleRows); ++i) CHECK(doc.at("table2")[i].at("Module") == kModuleRows[i]);
  const auto masked = mask_timings(doc);
  CHECK(masked.at("table1").at("TP [s]") == 0.0);
  CHECK(masked.at("table2")[0].at("Avg. time [s]") == 0.0);
  CHECK(masked.at("table1").at("d") == t.metrics.depth);
}

TEST_CASE("trace records") {
  const PlanTrace t = run(gen_hanoi(3, default_hanoi_layout(true)), RunConfig{});
  std::istringstream in(trace_jsonl(t));
  std::map<std::string, int> types;
  for (std::string line; std::getline(in, line);) {
    const auto j = nlohmann::json::parse(line);
    ++types[j.at("type").get<std::string>()];
  }
  CHECK(types["world"] == 1);
  CHECK(types["step"] == 7);
  CHECK(types["transition"] == 6);
  CHECK(types["final"] == 1);
  const std::string masked = mask_timings_jsonl(trace_jsonl(t));
  CHECK(masked.find("\"wall_task_seconds\":0.0") != std::string::npos);
  const auto w = world_record(t.final_world);
  CHECK(w.at("objects").size() == t.final_world.objects.size());
}
