#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "dmm/core/error.hpp"

namespace dmm::core {

// Canonical telemetry frame layout. Column order is law for every model:
// head(x,y,z,i,j,k,w), left(x,y,z,i,j,k,w), right(x,y,z,i,j,k,w).
inline constexpr int kDeviceCount = 3;
inline constexpr int kPerDeviceDims = 7;
inline constexpr int kFrameDims = 21;
inline constexpr int kWindowFrames = 900;
inline constexpr int kChunkFrames = 30;  // one second at 30 fps
inline constexpr double kTargetFps = 30.0;

inline constexpr int device_col(int device) { return device * kPerDeviceDims; }

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  bool finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
  }
  double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, Vec3 v) { return {s * v.x, s * v.y, s * v.z}; }

// Unit quaternion stored (i, j, k, w) to match the canonical column order.
struct Quat {
  double i = 0.0, j = 0.0, k = 0.0, w = 1.0;

  bool finite() const {
    return std::isfinite(i) && std::isfinite(j) && std::isfinite(k) && std::isfinite(w);
  }
  double norm() const { return std::sqrt(i * i + j * j + k * k + w * w); }
  Quat normalized() const {
    const double n = norm();
    if (n < 1e-12) throw InvalidInputError("quaternion has zero norm");
    return {i / n, j / n, k / n, w / n};
  }
};

inline double dot(const Quat& a, const Quat& b) {
  return a.i * b.i + a.j * b.j + a.k * b.k + a.w * b.w;
}

inline Quat operator*(const Quat& a, const Quat& b) {
  return {a.w * b.i + a.i * b.w + a.j * b.k - a.k * b.j,
          a.w * b.j - a.i * b.k + a.j * b.w + a.k * b.i,
          a.w * b.k + a.i * b.j - a.j * b.i + a.k * b.w,
          a.w * b.w - a.i * b.i - a.j * b.j - a.k * b.k};
}

// One tracked device: position in meters, unit orientation.
// Constructors normalize the orientation, so the unit-norm invariant
// holds for every live Pose.
struct Pose {
  Vec3 position;
  Quat orientation;

  Pose() = default;
  Pose(const Vec3& pos, const Quat& rot) : position(pos), orientation(rot.normalized()) {
    if (!position.finite()) throw InvalidInputError("pose position must be finite");
    if (!orientation.finite()) throw InvalidInputError("pose orientation must be finite");
  }
};

// Head + two hands at one timestamp. Device order is fixed.
struct MotionFrame {
  Pose head;
  Pose left_hand;
  Pose right_hand;
  double t = 0.0;  // seconds, monotone within a sequence

  const Pose& device(int d) const {
    switch (d) {
      case 0: return head;
      case 1: return left_hand;
      default: return right_hand;
    }
  }
  Pose& device(int d) {
    switch (d) {
      case 0: return head;
      case 1: return left_hand;
      default: return right_hand;
    }
  }
};

// Ordered, non-empty pose stream with strictly increasing timestamps.
class MotionSequence {
 public:
  MotionSequence(std::vector<MotionFrame> frames, double nominal_fps);

  const std::vector<MotionFrame>& frames() const { return frames_; }
  double nominal_fps() const { return nominal_fps_; }
  std::size_t size() const { return frames_.size(); }
  double duration() const { return frames_.back().t - frames_.front().t; }

 private:
  std::vector<MotionFrame> frames_;
  double nominal_fps_;
};

}  // namespace dmm::core
