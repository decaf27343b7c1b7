#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace tsel {

inline constexpr double kSpeedOfSound = 343.0;  // m/s

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const { return std::sqrt(dot(*this)); }
};

inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

// Microphone layout. The default is the 4-mic uniform linear array with 5 cm
// spacing, laid along the +x axis.
struct ArrayGeometry {
  std::vector<Vec3> mic_positions;
  int reference_mic = 0;

  static ArrayGeometry linear(int num_mics, double spacing, const Vec3& center);

  std::size_t num_mics() const { return mic_positions.size(); }
  Vec3 centroid() const;
  // Unit vector of the array axis (first to last mic); requires >= 2 mics.
  Vec3 axis() const;
  // Signed offset of mic c along the array axis, measured from the centroid.
  double axial_offset(int c) const;
  double pair_distance(int l, int r) const;
  // Signed axial separation p_l - p_r, the Δ_{l,r} entering the IPD model.
  double pair_axial_delta(int l, int r) const;

  void validate() const;
};

// Full ground-truth description of one simulated scene.
struct RoomScenario {
  Vec3 room_dims{6.0, 6.0, 3.0};  // L, W, H in meters
  double rt60 = 0.0;              // seconds; 0 = anechoic
  std::vector<Vec3> source_positions;
  std::vector<double> source_angles_deg;  // azimuth in [0, 180], array frame
  std::vector<double> source_distances_m;
  ArrayGeometry array;
  int target_index = 0;
  std::uint64_t seed = 0;

  std::size_t num_sources() const { return source_positions.size(); }
  double target_angle_deg() const { return source_angles_deg.at(static_cast<std::size_t>(target_index)); }
  // Minimum pairwise azimuth separation; meaningful for >= 2 sources.
  double min_angle_separation() const;

  void validate() const;
};

}  // namespace tsel
