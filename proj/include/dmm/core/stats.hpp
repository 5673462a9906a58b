#pragma once

#include <Eigen/Dense>
#include <span>

#include "dmm/core/window.hpp"

namespace dmm::core {

// Per-column mean/std over window rows. std is clamped to >= 1e-6 so
// degenerate (constant) dimensions never divide by zero.
struct DimensionStats {
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(kFrameDims);
  Eigen::VectorXd stddev = Eigen::VectorXd::Ones(kFrameDims);

  static constexpr double kStdFloor = 1e-6;

  void validate() const;
  bool is_identity() const;
};

DimensionStats zscore_fit(std::span<const WindowPtr> windows);
DimensionStats zscore_fit(const std::vector<NormalizedWindow>& windows);

// (x - mean) / std per column. Input must be raw, output is z-scored.
NormalizedWindow zscore_apply(const NormalizedWindow& w, const DimensionStats& s);
// x * std + mean per column. Output is raw-domain but unchecked: model
// outputs need renormalize_quaternions before their quaternions are valid.
NormalizedWindow zscore_invert(const NormalizedWindow& w, const DimensionStats& s);

// Same maps on bare matrices (any row count), used by the runtime pipeline.
void zscore_apply_inplace(Eigen::MatrixXf& rows, const DimensionStats& s);
void zscore_invert_inplace(Eigen::MatrixXf& rows, const DimensionStats& s);

// Rescale every per-device quaternion 4-tuple to unit norm, in place.
void renormalize_quaternions(Eigen::MatrixXf& rows);

}  // namespace dmm::core
