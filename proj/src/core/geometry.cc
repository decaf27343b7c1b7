#include "core/geometry.h"

#include <algorithm>
#include <string>

#include "core/error.h"

namespace tsel {

ArrayGeometry ArrayGeometry::linear(int num_mics, double spacing, const Vec3& center) {
  if (num_mics < 1 || spacing <= 0.0) {
    fail(Status::kInvalidArgument, "linear array needs >= 1 mic and positive spacing");
  }
  ArrayGeometry g;
  g.mic_positions.reserve(static_cast<std::size_t>(num_mics));
  const double half = 0.5 * spacing * (num_mics - 1);
  for (int c = 0; c < num_mics; ++c) {
    g.mic_positions.push_back({center.x - half + spacing * c, center.y, center.z});
  }
  g.reference_mic = 0;
  return g;
}

Vec3 ArrayGeometry::centroid() const {
  Vec3 acc;
  for (const auto& p : mic_positions) acc = acc + p;
  return acc * (1.0 / static_cast<double>(mic_positions.size()));
}

Vec3 ArrayGeometry::axis() const {
  if (num_mics() < 2) fail(Status::kInvalidArgument, "array axis needs >= 2 mics");
  Vec3 d = mic_positions.back() - mic_positions.front();
  double n = d.norm();
  if (n <= 0.0) fail(Status::kInvalidArgument, "degenerate array axis");
  return d * (1.0 / n);
}

double ArrayGeometry::axial_offset(int c) const {
  return (mic_positions.at(static_cast<std::size_t>(c)) - centroid()).dot(axis());
}

double ArrayGeometry::pair_distance(int l, int r) const {
  return distance(mic_positions.at(static_cast<std::size_t>(l)),
                  mic_positions.at(static_cast<std::size_t>(r)));
}

double ArrayGeometry::pair_axial_delta(int l, int r) const {
  return axial_offset(l) - axial_offset(r);
}

void ArrayGeometry::validate() const {
  if (mic_positions.empty()) fail(Status::kInvalidArgument, "array needs >= 1 microphone");
  if (reference_mic < 0 || static_cast<std::size_t>(reference_mic) >= num_mics()) {
    fail(Status::kInvalidArgument, "reference mic index out of range");
  }
  for (std::size_t l = 0; l < num_mics(); ++l) {
    for (std::size_t r = l + 1; r < num_mics(); ++r) {
      if (distance(mic_positions[l], mic_positions[r]) <= 0.0) {
        fail(Status::kInvalidArgument, "coincident microphones at indices " +
                                           std::to_string(l) + "," + std::to_string(r));
      }
    }
  }
}

double RoomScenario::min_angle_separation() const {
  double best = 180.0;
  for (std::size_t i = 0; i < source_angles_deg.size(); ++i) {
    for (std::size_t j = i + 1; j < source_angles_deg.size(); ++j) {
      best = std::min(best, std::abs(source_angles_deg[i] - source_angles_deg[j]));
    }
  }
  return best;
}

void RoomScenario::validate() const {
  array.validate();
  if (room_dims.x <= 0 || room_dims.y <= 0 || room_dims.z <= 0) {
    fail(Status::kInvalidArgument, "room dimensions must be positive");
  }
  if (rt60 < 0.0) fail(Status::kInvalidArgument, "rt60 must be >= 0");
  if (source_positions.empty()) fail(Status::kInvalidArgument, "scenario needs >= 1 source");
  if (source_angles_deg.size() != source_positions.size() ||
      source_distances_m.size() != source_positions.size()) {
    fail(Status::kShapeMismatch, "source attribute lists must have equal length");
  }
  if (target_index < 0 || static_cast<std::size_t>(target_index) >= num_sources()) {
    fail(Status::kInvalidArgument, "target index out of range");
  }
  auto inside = [&](const Vec3& p) {
    return p.x > 0 && p.x < room_dims.x && p.y > 0 && p.y < room_dims.y &&
           p.z > 0 && p.z < room_dims.z;
  };
  for (const auto& p : source_positions) {
    if (!inside(p)) fail(Status::kInvalidArgument, "source position outside room");
  }
  for (const auto& p : array.mic_positions) {
    if (!inside(p)) fail(Status::kInvalidArgument, "microphone outside room");
  }
  for (double a : source_angles_deg) {
    if (a < 0.0 || a > 180.0) {
      fail(Status::kInvalidArgument, "azimuth must lie in [0, 180] degrees");
    }
  }
  for (double d : source_distances_m) {
    if (d <= 0.0) fail(Status::kInvalidArgument, "source distance must be positive");
  }
}

}  // namespace tsel
