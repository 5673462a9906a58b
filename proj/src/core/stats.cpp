#include "dmm/core/stats.hpp"

#include <cmath>
#include <functional>

namespace dmm::core {

void DimensionStats::validate() const {
  if (mean.size() != kFrameDims || stddev.size() != kFrameDims) {
    throw InvalidInputError("dimension stats must have 21 entries");
  }
  for (int c = 0; c < kFrameDims; ++c) {
    if (!std::isfinite(mean(c)) || !std::isfinite(stddev(c)) || stddev(c) <= 0.0) {
      throw InvalidInputError("dimension stats must be finite with positive std");
    }
  }
}

bool DimensionStats::is_identity() const {
  return mean.isZero(0.0) && (stddev.array() == 1.0).all();
}

namespace {

DimensionStats fit_impl(const std::function<const Eigen::MatrixXf&(std::size_t)>& at, std::size_t n) {
  if (n == 0) throw InvalidInputError("zscore_fit needs at least one window");

  // Two-pass: exact mean first, then centered second moment.
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(kFrameDims);
  std::size_t rows = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sum += at(i).cast<double>().colwise().sum();
    rows += static_cast<std::size_t>(at(i).rows());
  }
  DimensionStats s;
  s.mean = sum / static_cast<double>(rows);

  Eigen::VectorXd sq = Eigen::VectorXd::Zero(kFrameDims);
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::MatrixXd centered = at(i).cast<double>().rowwise() - s.mean.transpose();
    sq += centered.array().square().colwise().sum().matrix();
  }
  s.stddev = (sq / static_cast<double>(rows)).array().sqrt().max(DimensionStats::kStdFloor);
  return s;
}

}  // namespace

DimensionStats zscore_fit(std::span<const WindowPtr> windows) {
  return fit_impl([&](std::size_t i) -> const Eigen::MatrixXf& { return windows[i]->data(); },
                  windows.size());
}

DimensionStats zscore_fit(const std::vector<NormalizedWindow>& windows) {
  return fit_impl([&](std::size_t i) -> const Eigen::MatrixXf& { return windows[i].data(); },
                  windows.size());
}

void zscore_apply_inplace(Eigen::MatrixXf& rows, const DimensionStats& s) {
  s.validate();
  if (rows.cols() != kFrameDims) throw InvalidInputError("expected 21 columns");
  const Eigen::RowVectorXf mean = s.mean.transpose().cast<float>();
  const Eigen::RowVectorXf inv_std = s.stddev.cwiseInverse().transpose().cast<float>();
  rows = (rows.rowwise() - mean).array().rowwise() * inv_std.array();
}

void zscore_invert_inplace(Eigen::MatrixXf& rows, const DimensionStats& s) {
  s.validate();
  if (rows.cols() != kFrameDims) throw InvalidInputError("expected 21 columns");
  const Eigen::RowVectorXf mean = s.mean.transpose().cast<float>();
  const Eigen::RowVectorXf std = s.stddev.transpose().cast<float>();
  rows = (rows.array().rowwise() * std.array()).matrix().rowwise() + mean;
}

NormalizedWindow zscore_apply(const NormalizedWindow& w, const DimensionStats& s) {
  Eigen::MatrixXf data = w.data();
  zscore_apply_inplace(data, s);
  return NormalizedWindow(std::move(data), WindowDomain::kZScored);
}

NormalizedWindow zscore_invert(const NormalizedWindow& w, const DimensionStats& s) {
  Eigen::MatrixXf data = w.data();
  zscore_invert_inplace(data, s);
  // Model outputs may carry off-unit quaternions until renormalize_quaternions.
  return NormalizedWindow::unchecked(std::move(data), WindowDomain::kRaw);
}

void renormalize_quaternions(Eigen::MatrixXf& rows) {
  if (rows.cols() != kFrameDims) throw InvalidInputError("expected 21 columns");
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    for (int d = 0; d < kDeviceCount; ++d) {
      const int c = device_col(d) + 3;
      const double i = rows(r, c), j = rows(r, c + 1), k = rows(r, c + 2), w = rows(r, c + 3);
      const double n = std::sqrt(i * i + j * j + k * k + w * w);
      if (n < 1e-12) throw InvalidInputError("cannot renormalize zero quaternion");
      const float inv = static_cast<float>(1.0 / n);
      rows(r, c) *= inv;
      rows(r, c + 1) *= inv;
      rows(r, c + 2) *= inv;
      rows(r, c + 3) *= inv;
    }
  }
}

}  // namespace dmm::core
