#pragma once

#include "dmm/core/types.hpp"

namespace dmm::core {

// Componentwise affine interpolation a + u*(b-a), u in [0,1].
Vec3 lerp_position(const Vec3& a, const Vec3& b, double u);

// Shortest-arc spherical interpolation between unit quaternions.
// Falls back to normalized linear interpolation when the arc is tiny
// (|dot| > 0.9995). Output is unit-norm within 1e-6.
Quat slerp_orientation(const Quat& q0, const Quat& q1, double u);

// Interpolate a full frame at parameter u between two frames.
MotionFrame interpolate_frame(const MotionFrame& a, const MotionFrame& b, double u, double t);

// Resample onto a uniform grid t0 + k/target_fps using lerp for positions
// and slerp for orientations between the bracketing source frames.
MotionSequence resample(const MotionSequence& seq, double target_fps = kTargetFps);

}  // namespace dmm::core
