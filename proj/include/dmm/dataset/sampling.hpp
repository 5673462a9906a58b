#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <unordered_map>
#include <vector>

#include "dmm/core/stats.hpp"
#include "dmm/core/window.hpp"
#include "dmm/dataset/recording_io.hpp"

namespace dmm::dataset {

inline constexpr int kNoiseDim = 32;

// Resamples to 30 fps when needed, windows, and caches per recording.
class WindowLoader {
 public:
  explicit WindowLoader(const RecordingStore& store, core::WindowOptions opts = {});

  core::WindowPtr window_for(const ManifestEntry& entry);
  core::MotionSequence sequence_for(const ManifestEntry& entry) const;

  std::vector<core::WindowPtr> windows_for(const std::vector<const ManifestEntry*>& entries);

 private:
  const RecordingStore* store_;
  core::WindowOptions opts_;
  std::unordered_map<std::string, core::WindowPtr> cache_;
};

struct PairSample {
  core::WindowPtr window_a;
  core::WindowPtr window_b;
  bool same = false;  // same activity (action pairs) or same user (user pairs)
  RecordingMeta meta_a;
  RecordingMeta meta_b;
};

struct AnonTrainSample {
  core::WindowPtr window_a;
  core::WindowPtr window_b;
  Eigen::VectorXf noise_a;
  Eigen::VectorXf noise_b;
  bool noise_equal = false;
  RecordingMeta meta_a;
  RecordingMeta meta_b;
};

// n_same pairs with equal activity_id and n_diff pairs with different
// activity_id; both users always differ. Pairs are distinct unordered
// recording tuples, deterministic under seed. split=kNone uses all entries.
std::vector<PairSample> sample_action_pairs(const Manifest& m, WindowLoader& loader,
                                            std::size_t n_same, std::size_t n_diff,
                                            std::uint64_t seed, Split split = Split::kNone);

// Mirror of sample_action_pairs with user/activity roles swapped: label is
// user equality and the two activities always differ.
std::vector<PairSample> sample_user_pairs(const Manifest& m, WindowLoader& loader,
                                          std::size_t n_same, std::size_t n_diff,
                                          std::uint64_t seed, Split split = Split::kNone);

// n same-user pairs; half carry identical Gaussian noise vectors, half
// independent ones.
std::vector<AnonTrainSample> sample_anonymizer_pairs(const Manifest& m, WindowLoader& loader,
                                                     std::size_t n, std::uint64_t seed,
                                                     Split split = Split::kNone,
                                                     int noise_dim = kNoiseDim);

Eigen::VectorXf sample_noise(std::mt19937_64& rng, int dim = kNoiseDim);

}  // namespace dmm::dataset
