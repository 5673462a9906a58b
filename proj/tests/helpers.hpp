#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "dmm/core/geometry.hpp"
#include "dmm/core/window.hpp"

namespace dmm::test {

inline core::Quat quat_from_axis_angle(double ax, double ay, double az, double angle) {
  const double n = std::sqrt(ax * ax + ay * ay + az * az);
  const double s = std::sin(angle / 2.0) / n;
  return core::Quat{ax * s, ay * s, az * s, std::cos(angle / 2.0)};
}

// Smooth sinusoidal motion, deterministic in (n_frames, fps, phase).
inline core::MotionSequence smooth_sequence(int n_frames, double fps = 30.0, double phase = 0.0) {
  std::vector<core::MotionFrame> frames;
  frames.reserve(static_cast<std::size_t>(n_frames));
  for (int k = 0; k < n_frames; ++k) {
    const double t = static_cast<double>(k) / fps;
    core::MotionFrame f;
    f.t = t;
    const double a = 2.0 * M_PI * 0.5 * t + phase;
    f.head = core::Pose({0.05 * std::sin(a), 1.7 + 0.02 * std::cos(a), 0.0},
                        quat_from_axis_angle(0, 1, 0, 0.3 * std::sin(a)));
    f.left_hand = core::Pose({-0.3 + 0.2 * std::sin(a), 1.2 + 0.15 * std::cos(a), 0.25},
                             quat_from_axis_angle(1, 0, 0, 0.8 * std::sin(a + 0.4)));
    f.right_hand = core::Pose({0.3 + 0.2 * std::cos(a), 1.2 + 0.15 * std::sin(a), 0.25},
                              quat_from_axis_angle(0.2, 1, 0.1, 0.8 * std::cos(a)));
    frames.push_back(f);
  }
  return core::MotionSequence(std::move(frames), fps);
}

// Raw-domain window with random positions and random unit quaternions.
inline core::NormalizedWindow random_raw_window(unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXf data(core::kWindowFrames, core::kFrameDims);
  for (int r = 0; r < core::kWindowFrames; ++r) {
    for (int d = 0; d < core::kDeviceCount; ++d) {
      const int c = core::device_col(d);
      data(r, c + 0) = static_cast<float>(0.5 * g(rng));
      data(r, c + 1) = static_cast<float>(1.5 + 0.3 * g(rng));
      data(r, c + 2) = static_cast<float>(0.5 * g(rng));
      double qi = g(rng), qj = g(rng), qk = g(rng), qw = g(rng) + 1.5;
      const double n = std::sqrt(qi * qi + qj * qj + qk * qk + qw * qw);
      data(r, c + 3) = static_cast<float>(qi / n);
      data(r, c + 4) = static_cast<float>(qj / n);
      data(r, c + 5) = static_cast<float>(qk / n);
      data(r, c + 6) = static_cast<float>(qw / n);
    }
  }
  return core::NormalizedWindow(std::move(data), core::WindowDomain::kRaw);
}

}  // namespace dmm::test
