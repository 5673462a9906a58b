#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dmm/core/geometry.hpp"
#include "dmm/core/stats.hpp"
#include "dmm/core/window.hpp"
#include "helpers.hpp"

using namespace dmm;
using namespace dmm::core;
using dmm::test::quat_from_axis_angle;

namespace {

// Independent slerp oracle: compose q0 with a fraction of the relative
// rotation, computed through axis-angle space.
Quat slerp_axis_angle_oracle(Quat q0, Quat q1, double u) {
  q0 = q0.normalized();
  q1 = q1.normalized();
  if (dot(q0, q1) < 0.0) q1 = {-q1.i, -q1.j, -q1.k, -q1.w};
  Quat rel = Quat{-q0.i, -q0.j, -q0.k, q0.w} * q1;  // q0^-1 * q1
  const double vnorm = std::sqrt(rel.i * rel.i + rel.j * rel.j + rel.k * rel.k);
  const double angle = 2.0 * std::atan2(vnorm, rel.w);
  Quat step{0, 0, 0, 1};
  if (vnorm > 1e-14) {
    const double s = std::sin(u * angle / 2.0) / vnorm;
    step = Quat{rel.i * s, rel.j * s, rel.k * s, std::cos(u * angle / 2.0)};
  }
  return (q0 * step).normalized();
}

double quat_diff(const Quat& a, const Quat& b) {
  // Sign-insensitive max component difference.
  const double direct = std::max({std::abs(a.i - b.i), std::abs(a.j - b.j),
                                  std::abs(a.k - b.k), std::abs(a.w - b.w)});
  const double flipped = std::max({std::abs(a.i + b.i), std::abs(a.j + b.j),
                                   std::abs(a.k + b.k), std::abs(a.w + b.w)});
  return std::min(direct, flipped);
}

}  // namespace

TEST_CASE("lerp_position endpoints and midpoints") {
  Vec3 a{0, 0, 0}, b{1, 2, 3};
  auto r0 = lerp_position(a, b, 0.0);
  CHECK(r0.x == doctest::Approx(0.0));
  CHECK(r0.y == doctest::Approx(0.0));
  CHECK(r0.z == doctest::Approx(0.0));

  auto rm = lerp_position(a, b, 0.5);
  CHECK(rm.x == doctest::Approx(0.5));
  CHECK(rm.y == doctest::Approx(1.0));
  CHECK(rm.z == doctest::Approx(1.5));

  auto rq = lerp_position({1, 1, 1}, {4, 1, -2}, 0.25);
  CHECK(rq.x == doctest::Approx(1.75));
  CHECK(rq.y == doctest::Approx(1.0));
  CHECK(rq.z == doctest::Approx(0.25));
}

TEST_CASE("lerp_position rejects bad input") {
  CHECK_THROWS_AS(lerp_position({0, 0, 0}, {1, 0, 0}, 1.5), InvalidInputError);
  CHECK_THROWS_AS(lerp_position({std::nan(""), 0, 0}, {1, 0, 0}, 0.5), InvalidInputError);
}

TEST_CASE("slerp endpoint identity and midpoint") {
  Quat id{0, 0, 0, 1};
  Quat z90 = quat_from_axis_angle(0, 0, 1, M_PI / 2.0);

  Quat at0 = slerp_orientation(id, z90, 0.0);
  CHECK(quat_diff(at0, id) < 1e-12);

  Quat mid = slerp_orientation(id, z90, 0.5);
  CHECK(mid.i == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(mid.j == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(mid.k == doctest::Approx(std::sin(M_PI / 8.0)));
  CHECK(mid.w == doctest::Approx(std::cos(M_PI / 8.0)));
}

TEST_CASE("slerp matches angle-axis oracle, including hemisphere flips") {
  std::mt19937 rng(7);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    Quat q0{g(rng), g(rng), g(rng), g(rng)};
    Quat q1{g(rng), g(rng), g(rng), g(rng)};
    if (q0.norm() < 1e-3 || q1.norm() < 1e-3) continue;
    q0 = q0.normalized();
    q1 = q1.normalized();
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);

    Quat got = slerp_orientation(q0, q1, u);
    Quat want = slerp_axis_angle_oracle(q0, q1, u);
    CHECK(quat_diff(got, want) < 1e-7);
    CHECK(std::abs(got.norm() - 1.0) < 1e-6);
  }
}

TEST_CASE("slerp hemisphere correction equals slerp against negated endpoint") {
  std::mt19937 rng(11);
  std::normal_distribution<double> g(0.0, 1.0);
  int covered = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Quat q0 = Quat{g(rng), g(rng), g(rng), g(rng)}.normalized();
    Quat q1 = Quat{g(rng), g(rng), g(rng), g(rng)}.normalized();
    if (dot(q0, q1) >= 0.0) continue;
    ++covered;
    const double u = 0.37;
    Quat a = slerp_orientation(q0, q1, u);
    Quat b = slerp_orientation(q0, {-q1.i, -q1.j, -q1.k, -q1.w}, u);
    CHECK(quat_diff(a, b) < 1e-12);
  }
  CHECK(covered > 10);
}

TEST_CASE("slerp rejects zero-norm input") {
  CHECK_THROWS_AS(slerp_orientation({0, 0, 0, 0}, {0, 0, 0, 1}, 0.5), InvalidInputError);
}

TEST_CASE("resample identity on uniform 30 fps input") {
  auto seq = test::smooth_sequence(120, 30.0);
  auto out = resample(seq, 30.0);
  REQUIRE(out.size() == 119);  // half-open grid drops the final instant
  for (std::size_t k = 0; k < out.size(); ++k) {
    const auto& a = seq.frames()[k];
    const auto& b = out.frames()[k];
    CHECK(std::abs(a.t - b.t) < 1e-9);
    for (int d = 0; d < kDeviceCount; ++d) {
      CHECK(std::abs(a.device(d).position.x - b.device(d).position.x) < 1e-9);
      CHECK(std::abs(a.device(d).position.y - b.device(d).position.y) < 1e-9);
      CHECK(std::abs(a.device(d).position.z - b.device(d).position.z) < 1e-9);
      CHECK(quat_diff(a.device(d).orientation, b.device(d).orientation) < 1e-9);
    }
  }
}

TEST_CASE("resample halves 60 fps input") {
  auto seq = test::smooth_sequence(240, 60.0);
  auto out = resample(seq, 30.0);
  CHECK(std::abs(static_cast<double>(out.size()) - 120.0) <= 1.0);
  CHECK(out.nominal_fps() == doctest::Approx(30.0));
}

TEST_CASE("resample two-frame span against scalar oracle") {
  // Two frames one second apart; outputs must lie on the lerp/slerp path.
  core::MotionFrame f0, f1;
  f0.t = 0.0;
  f1.t = 1.0;
  f0.head = Pose({0, 1, 0}, quat_from_axis_angle(0, 0, 1, 0.2));
  f1.head = Pose({1, 2, -1}, quat_from_axis_angle(0, 1, 0, 1.1));
  f0.left_hand = Pose({-0.5, 1, 0}, quat_from_axis_angle(1, 0, 0, -0.7));
  f1.left_hand = Pose({0.5, 1.5, 0.5}, quat_from_axis_angle(1, 0.2, 0, 0.9));
  f0.right_hand = Pose({0.5, 1, 0}, {0, 0, 0, 1});
  f1.right_hand = Pose({0.2, 0.8, 0.1}, quat_from_axis_angle(0.3, 0.3, 1, 2.0));

  auto out = resample(MotionSequence({f0, f1}, 1.0), 30.0);
  REQUIRE(out.size() == 30);
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double u = static_cast<double>(k) / 30.0;
    CHECK(std::abs(out.frames()[k].t - u) < 1e-12);
    for (int d = 0; d < kDeviceCount; ++d) {
      const Pose& a = f0.device(d);
      const Pose& b = f1.device(d);
      const Pose& got = out.frames()[k].device(d);
      Vec3 want_p = lerp_position(a.position, b.position, u);
      CHECK(std::abs(got.position.x - want_p.x) < 1e-12);
      CHECK(std::abs(got.position.y - want_p.y) < 1e-12);
      CHECK(std::abs(got.position.z - want_p.z) < 1e-12);
      Quat want_q = slerp_axis_angle_oracle(a.orientation, b.orientation, u);
      CHECK(quat_diff(got.orientation, want_q) < 1e-7);
      CHECK(std::abs(got.orientation.norm() - 1.0) < 1e-6);
    }
  }
}

TEST_CASE("resample rejects short sequences") {
  auto seq = test::smooth_sequence(1, 30.0);
  CHECK_THROWS_AS(resample(seq, 30.0), InvalidInputError);
}

TEST_CASE("window truncates, keeps, and pads") {
  auto w1000 = window(test::smooth_sequence(1000));
  auto w900 = window(test::smooth_sequence(900));
  CHECK(w1000.data().rows() == kWindowFrames);
  // 1000-frame input keeps rows 0..899, which equal the 900-frame flatten.
  CHECK((w1000.data() - w900.data()).cwiseAbs().maxCoeff() == 0.0f);

  auto padded = window(test::smooth_sequence(450));
  for (int r = 450; r < kWindowFrames; ++r) {
    CHECK((padded.data().row(r) - padded.data().row(449)).cwiseAbs().maxCoeff() == 0.0f);
  }

  WindowOptions reject;
  reject.pad_with_last_frame = false;
  CHECK_THROWS_AS(window(test::smooth_sequence(450), reject), TooShortError);
}

TEST_CASE("window requires 30 fps input") {
  CHECK_THROWS_AS(window(test::smooth_sequence(1000, 60.0)), InvalidInputError);
}

TEST_CASE("zscore_fit degenerate and symmetric cases") {
  Eigen::MatrixXf constant = Eigen::MatrixXf::Zero(kWindowFrames, kFrameDims);
  constant.col(0).setConstant(4.0f);
  // Mark z-scored so the quaternion check does not apply to this synthetic block.
  std::vector<NormalizedWindow> ws;
  ws.emplace_back(NormalizedWindow(constant, WindowDomain::kZScored));
  auto s = zscore_fit(ws);
  CHECK(s.mean(0) == doctest::Approx(4.0));
  CHECK(s.mean(1) == doctest::Approx(0.0));
  for (int c = 0; c < kFrameDims; ++c) CHECK(s.stddev(c) == doctest::Approx(1e-6));

  std::vector<NormalizedWindow> pair;
  pair.emplace_back(NormalizedWindow(Eigen::MatrixXf::Zero(kWindowFrames, kFrameDims),
                                     WindowDomain::kZScored));
  pair.emplace_back(NormalizedWindow(Eigen::MatrixXf::Constant(kWindowFrames, kFrameDims, 2.0f),
                                     WindowDomain::kZScored));
  auto s2 = zscore_fit(pair);
  for (int c = 0; c < kFrameDims; ++c) {
    CHECK(s2.mean(c) == doctest::Approx(1.0));
    CHECK(s2.stddev(c) == doctest::Approx(1.0));
  }
}

TEST_CASE("zscore_fit matches brute-force two-pass oracle") {
  std::vector<NormalizedWindow> ws;
  for (unsigned i = 0; i < 4; ++i) ws.push_back(test::random_raw_window(100 + i));
  auto s = zscore_fit(ws);

  // Naive scalar oracle.
  for (int c = 0; c < kFrameDims; ++c) {
    double sum = 0.0;
    long n = 0;
    for (const auto& w : ws)
      for (int r = 0; r < kWindowFrames; ++r) {
        sum += w.data()(r, c);
        ++n;
      }
    const double mean = sum / static_cast<double>(n);
    double sq = 0.0;
    for (const auto& w : ws)
      for (int r = 0; r < kWindowFrames; ++r) {
        const double d = w.data()(r, c) - mean;
        sq += d * d;
      }
    const double stddev = std::max(std::sqrt(sq / static_cast<double>(n)), 1e-6);
    CHECK(std::abs(s.mean(c) - mean) < 1e-9);
    CHECK(std::abs(s.stddev(c) - stddev) < 1e-9);
  }
}

TEST_CASE("zscore apply/invert round trip and identity stats") {
  auto w = test::random_raw_window(42);
  DimensionStats identity;
  auto applied = zscore_apply(w, identity);
  CHECK((applied.data() - w.data()).cwiseAbs().maxCoeff() == 0.0f);

  std::vector<NormalizedWindow> ws{w};
  auto s = zscore_fit(ws);
  auto z = zscore_apply(w, s);
  CHECK(z.domain() == WindowDomain::kZScored);
  auto back = zscore_invert(z, s);
  CHECK(back.domain() == WindowDomain::kRaw);
  CHECK((back.data() - w.data()).cwiseAbs().maxCoeff() < 1e-6f);

  // Hand-checked 2x2 sub-block: x -> (x - mean) / std.
  const float x = w.data()(3, 5);
  CHECK(z.data()(3, 5) ==
        doctest::Approx((x - static_cast<float>(s.mean(5))) / static_cast<float>(s.stddev(5)))
            .epsilon(1e-5));
}

TEST_CASE("select_features projections") {
  auto w = test::random_raw_window(9);
  auto full = select_features(w, FeatureSubset::full());
  CHECK((full - w.data()).cwiseAbs().maxCoeff() == 0.0f);

  auto lw = select_features(w, FeatureSubset::left_w());
  CHECK(lw.cols() == 1);
  CHECK((lw.col(0) - w.data().col(13)).cwiseAbs().maxCoeff() == 0.0f);

  CHECK(FeatureSubset::hands_rotation().columns.size() == 8);
  CHECK(FeatureSubset::hands_full().columns.size() == 14);
  CHECK(FeatureSubset::left_rotation().columns.size() == 4);

  FeatureSubset bad;
  bad.columns = {0, 21};
  CHECK_THROWS_AS(select_features(w, bad), InvalidInputError);
}

TEST_CASE("flatten then unflatten is the identity") {
  auto seq = test::smooth_sequence(32);
  auto rows = flatten_sequence(seq);
  for (std::size_t k = 0; k < seq.size(); ++k) {
    auto frame = frame_from_row(rows.row(static_cast<Eigen::Index>(k)), seq.frames()[k].t);
    auto round = row_from_frame(frame);
    CHECK((round - rows.row(static_cast<Eigen::Index>(k))).cwiseAbs().maxCoeff() < 2e-7f);
  }
}

TEST_CASE("pose constructor enforces unit orientation") {
  Pose p({0, 0, 0}, {0, 0, 3.0, 4.0});
  CHECK(p.orientation.norm() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(Pose({0, 0, 0}, {0, 0, 0, 0}), InvalidInputError);
  CHECK_THROWS_AS(Pose({0, std::nan(""), 0}, {0, 0, 0, 1}), InvalidInputError);
}

TEST_CASE("motion sequence invariants") {
  CHECK_THROWS_AS(MotionSequence({}, 30.0), InvalidInputError);
  core::MotionFrame a, b;
  a.t = 0.0;
  b.t = 0.0;
  CHECK_THROWS_AS(MotionSequence({a, b}, 30.0), InvalidInputError);
}
