#include "dmm/core/window.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace dmm::core {

namespace {

constexpr double kQuatNormTol = 1e-5;
constexpr double kUniformDtTol = 1e-6;

void check_quaternion_rows(const Eigen::MatrixXf& data) {
  for (Eigen::Index r = 0; r < data.rows(); ++r) {
    for (int d = 0; d < kDeviceCount; ++d) {
      const int c = device_col(d) + 3;
      const double i = data(r, c), j = data(r, c + 1), k = data(r, c + 2), w = data(r, c + 3);
      const double n = std::sqrt(i * i + j * j + k * k + w * w);
      if (std::abs(n - 1.0) > kQuatNormTol) {
        throw InvalidInputError("raw window row " + std::to_string(r) +
                                " device " + std::to_string(d) +
                                " quaternion norm " + std::to_string(n) + " is not unit");
      }
    }
  }
}

}  // namespace

NormalizedWindow::NormalizedWindow(Eigen::MatrixXf data, WindowDomain domain) {
  data_ = std::move(data);
  domain_ = domain;
  validate();
}

NormalizedWindow NormalizedWindow::unchecked(Eigen::MatrixXf data, WindowDomain domain) {
  NormalizedWindow w;
  if (data.rows() != kWindowFrames || data.cols() != kFrameDims) {
    throw InvalidInputError("window must be exactly 900x21");
  }
  w.data_ = std::move(data);
  w.domain_ = domain;
  return w;
}

void NormalizedWindow::validate() const {
  if (data_.rows() != kWindowFrames || data_.cols() != kFrameDims) {
    throw InvalidInputError("window must be exactly 900x21");
  }
  if (!data_.allFinite()) throw InvalidInputError("window contains non-finite values");
  if (domain_ == WindowDomain::kRaw) check_quaternion_rows(data_);
}

Eigen::RowVectorXf row_from_frame(const MotionFrame& frame) {
  Eigen::RowVectorXf row(kFrameDims);
  for (int d = 0; d < kDeviceCount; ++d) {
    const Pose& p = frame.device(d);
    const int c = device_col(d);
    row(c + 0) = static_cast<float>(p.position.x);
    row(c + 1) = static_cast<float>(p.position.y);
    row(c + 2) = static_cast<float>(p.position.z);
    row(c + 3) = static_cast<float>(p.orientation.i);
    row(c + 4) = static_cast<float>(p.orientation.j);
    row(c + 5) = static_cast<float>(p.orientation.k);
    row(c + 6) = static_cast<float>(p.orientation.w);
  }
  return row;
}

MotionFrame frame_from_row(const Eigen::Ref<const Eigen::RowVectorXf>& row, double t) {
  if (row.size() != kFrameDims) throw InvalidInputError("frame row must have 21 columns");
  MotionFrame frame;
  frame.t = t;
  for (int d = 0; d < kDeviceCount; ++d) {
    const int c = device_col(d);
    Vec3 pos{row(c + 0), row(c + 1), row(c + 2)};
    Quat rot{row(c + 3), row(c + 4), row(c + 5), row(c + 6)};
    frame.device(d) = Pose(pos, rot);
  }
  return frame;
}

Eigen::MatrixXf flatten_sequence(const MotionSequence& seq) {
  Eigen::MatrixXf rows(static_cast<Eigen::Index>(seq.size()), kFrameDims);
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    rows.row(r) = row_from_frame(seq.frames()[static_cast<std::size_t>(r)]);
  }
  return rows;
}

MotionSequence sequence_from_rows(const Eigen::MatrixXf& rows, const std::vector<double>& timestamps) {
  if (rows.rows() != static_cast<Eigen::Index>(timestamps.size())) {
    throw InvalidInputError("row count must match timestamp count");
  }
  std::vector<MotionFrame> frames;
  frames.reserve(timestamps.size());
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    frames.push_back(frame_from_row(rows.row(r), timestamps[static_cast<std::size_t>(r)]));
  }
  return MotionSequence(std::move(frames), kTargetFps);
}

NormalizedWindow window(const MotionSequence& seq, const WindowOptions& opts) {
  if (std::abs(seq.nominal_fps() - kTargetFps) > 1e-9) {
    throw InvalidInputError("window() expects a 30 fps sequence; resample first");
  }
  const auto& frames = seq.frames();
  for (std::size_t i = 1; i < frames.size(); ++i) {
    if (std::abs((frames[i].t - frames[i - 1].t) - 1.0 / kTargetFps) > kUniformDtTol) {
      throw InvalidInputError("window() expects uniform 30 fps timestamps");
    }
  }
  if (frames.size() < kWindowFrames && !opts.pad_with_last_frame) {
    throw TooShortError("sequence has " + std::to_string(frames.size()) +
                        " frames; 900 required and padding is disabled");
  }

  Eigen::MatrixXf data(kWindowFrames, kFrameDims);
  const std::size_t n = std::min<std::size_t>(frames.size(), kWindowFrames);
  for (std::size_t r = 0; r < n; ++r) data.row(static_cast<Eigen::Index>(r)) = row_from_frame(frames[r]);
  for (std::size_t r = n; r < kWindowFrames; ++r) data.row(static_cast<Eigen::Index>(r)) = data.row(static_cast<Eigen::Index>(n - 1));
  return NormalizedWindow(std::move(data), WindowDomain::kRaw);
}

void FeatureSubset::validate() const {
  if (columns.empty()) throw InvalidInputError("feature subset must not be empty");
  std::unordered_set<int> seen;
  for (int c : columns) {
    if (c < 0 || c >= kFrameDims) throw InvalidInputError("feature subset index out of range");
    if (!seen.insert(c).second) throw InvalidInputError("feature subset indices must be unique");
  }
}

FeatureSubset FeatureSubset::full() {
  FeatureSubset fs;
  fs.name = "full_21";
  for (int c = 0; c < kFrameDims; ++c) fs.columns.push_back(c);
  return fs;
}

FeatureSubset FeatureSubset::hands_full() {
  FeatureSubset fs;
  fs.name = "hands_14";
  for (int c = device_col(1); c < kFrameDims; ++c) fs.columns.push_back(c);
  return fs;
}

FeatureSubset FeatureSubset::hands_rotation() {
  FeatureSubset fs;
  fs.name = "hands_rotation_8";
  for (int d = 1; d < kDeviceCount; ++d) {
    for (int q = 3; q < kPerDeviceDims; ++q) fs.columns.push_back(device_col(d) + q);
  }
  return fs;
}

FeatureSubset FeatureSubset::left_rotation() {
  FeatureSubset fs;
  fs.name = "left_rotation_4";
  for (int q = 3; q < kPerDeviceDims; ++q) fs.columns.push_back(device_col(1) + q);
  return fs;
}

FeatureSubset FeatureSubset::left_w() {
  FeatureSubset fs;
  fs.name = "left_w_1";
  fs.columns.push_back(device_col(1) + 6);
  return fs;
}

Eigen::MatrixXf select_features(const NormalizedWindow& w, const FeatureSubset& fs) {
  fs.validate();
  Eigen::MatrixXf out(w.data().rows(), static_cast<Eigen::Index>(fs.columns.size()));
  for (std::size_t c = 0; c < fs.columns.size(); ++c) {
    out.col(static_cast<Eigen::Index>(c)) = w.data().col(fs.columns[c]);
  }
  return out;
}

}  // namespace dmm::core
