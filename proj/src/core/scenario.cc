#include "core/scenario.h"

#include <cmath>
#include <fstream>
#include <numbers>
#include <vector>

#include <json.hpp>

#include "core/error.h"
#include "core/rng.h"

namespace tsel {

using nlohmann::json;

void ScenarioConstraints::validate() const {
  if (num_sources < 1) fail(Status::kInvalidArgument, "need >= 1 source");
  if (num_mics < 1 || mic_spacing <= 0.0) {
    fail(Status::kInvalidArgument, "invalid array constraints");
  }
  if (azimuth.lo < 0.0 || azimuth.hi > 180.0 || azimuth.lo > azimuth.hi) {
    fail(Status::kInvalidArgument, "azimuth range must lie within [0, 180]");
  }
  if (min_angle_separation < 0.0) {
    fail(Status::kInvalidArgument, "angle separation must be >= 0");
  }
  if (rt60.lo < 0.0 || rt60.lo > rt60.hi) {
    fail(Status::kInvalidArgument, "invalid rt60 range");
  }
  if (source_distance.lo <= 0.0 || source_distance.lo > source_distance.hi) {
    fail(Status::kInvalidArgument, "invalid source distance range");
  }
  // A feasibility bound: n sources separated by s degrees need (n-1)*s span.
  double span = azimuth.hi - azimuth.lo;
  if (static_cast<double>(num_sources - 1) * min_angle_separation > span) {
    fail(Status::kInvalidArgument, "angle separation constraint unsatisfiable");
  }
}

RoomScenario generate_scenario(std::uint64_t seed,
                               const ScenarioConstraints& cst) {
  cst.validate();
  Rng rng(mix_seed(seed, 0x5ce0));

  RoomScenario s;
  s.seed = seed;
  s.room_dims = {rng.uniform(cst.room_length.lo, cst.room_length.hi),
                 rng.uniform(cst.room_width.lo, cst.room_width.hi),
                 rng.uniform(cst.room_height.lo, cst.room_height.hi)};
  s.rt60 = cst.rt60.hi > 0.0 ? rng.uniform(cst.rt60.lo, cst.rt60.hi) : 0.0;

  const Vec3 center{s.room_dims.x / 2.0, s.room_dims.y / 2.0, cst.array_height};
  s.array = ArrayGeometry::linear(cst.num_mics, cst.mic_spacing, center);

  // Rejection sampling over the angle set until separations fit the bucket.
  std::vector<double> angles(static_cast<std::size_t>(cst.num_sources));
  bool ok = false;
  for (int attempt = 0; attempt < cst.max_attempts && !ok; ++attempt) {
    for (auto& a : angles) a = rng.uniform(cst.azimuth.lo, cst.azimuth.hi);
    ok = true;
    double min_sep = 180.0;
    for (std::size_t i = 0; i < angles.size() && ok; ++i) {
      for (std::size_t j = i + 1; j < angles.size(); ++j) {
        min_sep = std::min(min_sep, std::abs(angles[i] - angles[j]));
      }
    }
    if (angles.size() > 1) {
      ok = min_sep >= cst.min_angle_separation &&
           min_sep >= cst.angle_separation.lo && min_sep <= cst.angle_separation.hi;
    }
  }
  if (!ok) {
    fail(Status::kInvalidArgument,
         "could not satisfy angle separation constraints after bounded attempts");
  }

  for (int i = 0; i < cst.num_sources; ++i) {
    const double angle = angles[static_cast<std::size_t>(i)];
    const double rad = angle * std::numbers::pi / 180.0;
    double dist = 0.0;
    Vec3 pos;
    bool placed = false;
    for (int attempt = 0; attempt < cst.max_attempts; ++attempt) {
      dist = rng.uniform(cst.source_distance.lo, cst.source_distance.hi);
      pos = center + Vec3{std::cos(rad), std::sin(rad), 0.0} * dist;
      const double margin = 0.1;
      if (pos.x > margin && pos.x < s.room_dims.x - margin && pos.y > margin &&
          pos.y < s.room_dims.y - margin && pos.z > margin &&
          pos.z < s.room_dims.z - margin) {
        placed = true;
        break;
      }
    }
    if (!placed) {
      fail(Status::kInvalidArgument, "could not place source inside the room");
    }
    s.source_angles_deg.push_back(angle);
    s.source_distances_m.push_back(dist);
    s.source_positions.push_back(pos);
  }
  s.target_index = 0;
  s.validate();
  return s;
}

namespace {

json vec3_to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec3_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) {
    fail(Status::kFormat, "expected a 3-element coordinate array");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

std::string scenario_to_json(const RoomScenario& s) {
  json j;
  j["room_dims"] = vec3_to_json(s.room_dims);
  j["rt60"] = s.rt60;
  j["source_positions"] = json::array();
  for (const auto& p : s.source_positions) j["source_positions"].push_back(vec3_to_json(p));
  j["source_angles"] = s.source_angles_deg;
  j["source_distances"] = s.source_distances_m;
  j["array"]["mic_positions"] = json::array();
  for (const auto& p : s.array.mic_positions) {
    j["array"]["mic_positions"].push_back(vec3_to_json(p));
  }
  j["array"]["reference_mic"] = s.array.reference_mic;
  j["target_index"] = s.target_index;
  j["seed"] = s.seed;
  return j.dump(2) + "\n";
}

RoomScenario scenario_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(Status::kFormat, std::string("scenario JSON parse error: ") + e.what());
  }
  try {
    RoomScenario s;
    s.room_dims = vec3_from_json(j.at("room_dims"));
    s.rt60 = j.at("rt60").get<double>();
    for (const auto& p : j.at("source_positions")) {
      s.source_positions.push_back(vec3_from_json(p));
    }
    s.source_angles_deg = j.at("source_angles").get<std::vector<double>>();
    s.source_distances_m = j.at("source_distances").get<std::vector<double>>();
    for (const auto& p : j.at("array").at("mic_positions")) {
      s.array.mic_positions.push_back(vec3_from_json(p));
    }
    s.array.reference_mic = j.at("array").at("reference_mic").get<int>();
    s.target_index = j.at("target_index").get<int>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.validate();
    return s;
  } catch (const json::exception& e) {
    fail(Status::kFormat, std::string("scenario JSON field error: ") + e.what());
  }
}

void save_scenario(const RoomScenario& s, const std::string& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) fail(Status::kIo, "cannot open for writing: " + path);
  f << scenario_to_json(s);
  if (!f) fail(Status::kIo, "write failed: " + path);
}

RoomScenario load_scenario(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(Status::kIo, "cannot open scenario file: " + path);
  std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return scenario_from_json(text);
}

}  // namespace tsel
