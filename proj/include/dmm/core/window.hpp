#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "dmm/core/types.hpp"

namespace dmm::core {

// Whether a window holds motion in physical units or z-scored values.
// Quaternion unit-norm checks only apply to the raw domain.
enum class WindowDomain { kRaw, kZScored };

// Fixed 900x21 array in canonical column order; the universal model currency.
class NormalizedWindow {
 public:
  // Validates shape and finiteness; for kRaw additionally checks that every
  // per-device quaternion 4-tuple is unit-norm within 1e-5.
  NormalizedWindow(Eigen::MatrixXf data, WindowDomain domain);

  // For model outputs whose quaternions are not yet renormalized.
  static NormalizedWindow unchecked(Eigen::MatrixXf data, WindowDomain domain);

  const Eigen::MatrixXf& data() const { return data_; }
  Eigen::MatrixXf& mutable_data() { return data_; }
  WindowDomain domain() const { return domain_; }

  void validate() const;

 private:
  NormalizedWindow() = default;
  Eigen::MatrixXf data_;  // kWindowFrames x kFrameDims
  WindowDomain domain_ = WindowDomain::kRaw;
};

using WindowPtr = std::shared_ptr<const NormalizedWindow>;

struct WindowOptions {
  // Recordings shorter than 900 frames: repeat the last frame (default) or reject.
  bool pad_with_last_frame = true;
};

// Flatten one frame into the canonical 21-column row.
Eigen::RowVectorXf row_from_frame(const MotionFrame& frame);

// Rebuild a frame from a canonical row; orientations are renormalized by Pose.
MotionFrame frame_from_row(const Eigen::Ref<const Eigen::RowVectorXf>& row, double t);

// Flatten an entire 30 fps sequence (any length) in canonical order.
Eigen::MatrixXf flatten_sequence(const MotionSequence& seq);

// Rebuild a 30 fps sequence from flattened rows, renormalizing quaternions.
MotionSequence sequence_from_rows(const Eigen::MatrixXf& rows, const std::vector<double>& timestamps);

// First 900 frames of a 30 fps sequence, padded or rejected per options.
NormalizedWindow window(const MotionSequence& seq, const WindowOptions& opts = {});

// Named projection onto a subset of the 21 canonical columns.
struct FeatureSubset {
  std::vector<int> columns;  // unique, each in [0, 21)
  std::string name;

  void validate() const;

  static FeatureSubset full();            // 21 columns
  static FeatureSubset hands_full();      // 14: both hands, all dims
  static FeatureSubset hands_rotation();  // 8: both hands, i,j,k,w
  static FeatureSubset left_rotation();   // 4: left hand, i,j,k,w
  static FeatureSubset left_w();          // 1: left hand, w
};

// Column projection in subset order.
Eigen::MatrixXf select_features(const NormalizedWindow& w, const FeatureSubset& fs);

}  // namespace dmm::core
