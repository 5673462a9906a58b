#include "dmm/core/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace dmm::core {

namespace {

void require_unit_interval(double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw InvalidInputError("interpolation parameter u must be in [0,1]");
}

}  // namespace

MotionSequence::MotionSequence(std::vector<MotionFrame> frames, double nominal_fps)
    : frames_(std::move(frames)), nominal_fps_(nominal_fps) {
  if (frames_.empty()) throw InvalidInputError("motion sequence must be non-empty");
  if (!(nominal_fps_ > 0.0)) throw InvalidInputError("nominal_fps must be positive");
  for (std::size_t i = 1; i < frames_.size(); ++i) {
    if (!(frames_[i].t > frames_[i - 1].t)) {
      throw InvalidInputError("timestamps must be strictly increasing");
    }
  }
}

Vec3 lerp_position(const Vec3& a, const Vec3& b, double u) {
  require_unit_interval(u);
  if (!a.finite() || !b.finite()) throw InvalidInputError("lerp endpoints must be finite");
  return a + u * (b - a);
}

Quat slerp_orientation(const Quat& q0, const Quat& q1, double u) {
  require_unit_interval(u);
  if (!q0.finite() || !q1.finite()) throw InvalidInputError("slerp endpoints must be finite");
  Quat a = q0.normalized();  // throws on zero norm
  Quat b = q1.normalized();

  double d = dot(a, b);
  // Shortest arc: flip one endpoint into the same hemisphere.
  if (d < 0.0) {
    b = {-b.i, -b.j, -b.k, -b.w};
    d = -d;
  }

  if (d > 0.9995) {
    // Nearly parallel: slerp is ill-conditioned, nlerp is exact enough.
    Quat r{a.i + u * (b.i - a.i), a.j + u * (b.j - a.j), a.k + u * (b.k - a.k),
           a.w + u * (b.w - a.w)};
    return r.normalized();
  }

  const double theta = std::acos(std::clamp(d, -1.0, 1.0));
  const double sin_theta = std::sin(theta);
  const double ca = std::sin((1.0 - u) * theta) / sin_theta;
  const double cb = std::sin(u * theta) / sin_theta;
  Quat r{ca * a.i + cb * b.i, ca * a.j + cb * b.j, ca * a.k + cb * b.k, ca * a.w + cb * b.w};
  return r.normalized();
}

MotionFrame interpolate_frame(const MotionFrame& a, const MotionFrame& b, double u, double t) {
  MotionFrame out;
  out.t = t;
  for (int d = 0; d < kDeviceCount; ++d) {
    const Pose& pa = a.device(d);
    const Pose& pb = b.device(d);
    out.device(d) = Pose(lerp_position(pa.position, pb.position, u),
                         slerp_orientation(pa.orientation, pb.orientation, u));
  }
  return out;
}

MotionSequence resample(const MotionSequence& seq, double target_fps) {
  if (!(target_fps > 0.0)) throw InvalidInputError("target_fps must be positive");
  if (seq.size() < 2) throw InvalidInputError("resample needs at least 2 frames");

  const auto& src = seq.frames();
  const double t0 = src.front().t;
  const double t_end = src.back().t;
  const double dt = 1.0 / target_fps;

  std::vector<MotionFrame> out;
  out.reserve(static_cast<std::size_t>((t_end - t0) * target_fps) + 2);

  // Half-open grid [t0, t_end): a 1 s span at 30 fps yields exactly 30 frames.
  std::size_t hi = 1;  // src[hi-1].t <= t < src[hi]
  for (std::size_t k = 0;; ++k) {
    const double t = t0 + static_cast<double>(k) * dt;
    if (t >= t_end - 1e-9) break;
    while (hi + 1 < src.size() && src[hi].t < t) ++hi;
    const MotionFrame& a = src[hi - 1];
    const MotionFrame& b = src[hi];
    const double span = b.t - a.t;
    const double u = std::clamp((t - a.t) / span, 0.0, 1.0);
    out.push_back(interpolate_frame(a, b, u, t));
  }
  return MotionSequence(std::move(out), target_fps);
}

}  // namespace dmm::core
