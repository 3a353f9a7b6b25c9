#pragma once

#include <string>
#include <vector>

#include "eaog/geometry.hpp"
#include "eaog/scenario.hpp"

namespace eaog {

struct ArmLayout {
  std::string id;
  Vec2 anchor;
  double reach = 0.0;
  double clearance = 0.0;
};

struct HanoiLayout {
  std::vector<Vec2> pegs;  // A, B, C
  std::vector<ArmLayout> arms;
  Vec2 handover;            // shared handover stand
  bool omnipotent = false;  // single unrestricted agent
  double disk_height = 0.02;
};

/// Equilateral triangle of side 0.6 m with arms at +-0.3 m, reach 0.75 m
/// (dual-arm) or one arm at the centroid with unlimited reach (omnipotent).
HanoiLayout default_hanoi_layout(bool omnipotent);

/// Throws BadDiskCount unless 3 <= n <= 8.
Scenario gen_hanoi(int n, const HanoiLayout& layout);

/// Legal Hanoi peg assignments (peg index per disk, smallest disk first),
/// with their minimal move distance to the goal.
struct HanoiStateCost {
  std::vector<int> pegs;
  int distance = 0;
};

/// All 3^n states in base-3 order (disk 1 is the least significant digit),
/// distances by breadth-first search from the goal peg C.
std::vector<HanoiStateCost> hanoi_state_costs(int n);

struct HabitatConfig {
  int samples = 2;
  int glassware = 1;
  double sterilise_seconds = 120.0;
  double incubate_seconds = 300.0;
  double clean_seconds = 60.0;
};

Scenario gen_habitat(const HabitatConfig& config = {});

}  // namespace eaog
