#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "core/geometry.h"

namespace tsel {

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double v) const { return v >= lo && v <= hi; }
};

// Sampling ranges for random scenes; defaults follow the simulated-corpus
// recipe (rooms 5-10 m x 5-10 m x 3-4 m, speakers 0.75-2 m away in the
// frontal half-plane, at least 15 degrees apart).
struct ScenarioConstraints {
  int num_sources = 2;
  Range room_length{5.0, 10.0};
  Range room_width{5.0, 10.0};
  Range room_height{3.0, 4.0};
  Range rt60{0.2, 0.6};  // set to {0, 0} for anechoic scenes
  Range source_distance{0.75, 2.0};
  Range azimuth{0.0, 180.0};
  double min_angle_separation = 15.0;
  // Optional bucket constraint on the pairwise separation itself; the default
  // accepts anything >= min_angle_separation.
  Range angle_separation{15.0, 180.0};
  int num_mics = 4;
  double mic_spacing = 0.05;
  double array_height = 1.5;
  int max_attempts = 10000;

  void validate() const;
};

// Deterministic for a fixed seed; rejection-samples angles until the
// separation constraints hold. The array sits at the room center (x, y) at
// array_height, laid along +x; azimuth is measured from that axis, so the
// frontal half-plane maps to [0, 180] degrees.
RoomScenario generate_scenario(std::uint64_t seed,
                               const ScenarioConstraints& constraints = {});

void save_scenario(const RoomScenario& scenario, const std::string& path);
RoomScenario load_scenario(const std::string& path);

// JSON round trip used by the file interface; exposed for tests.
std::string scenario_to_json(const RoomScenario& scenario);
RoomScenario scenario_from_json(const std::string& text);

}  // namespace tsel
