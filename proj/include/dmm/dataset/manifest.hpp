#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "dmm/core/error.hpp"

namespace dmm::dataset {

struct RecordingMeta {
  std::string recording_id;
  std::string user_id;
  std::string activity_id;
  std::int64_t created_at = 0;  // unix seconds
};

enum class Split { kNone, kTrain, kVal, kTest, kSession1, kSession2 };

std::string split_name(Split s);
Split split_from_name(const std::string& name);

struct ManifestEntry {
  RecordingMeta meta;
  std::string path;  // store-relative locator
  Split split = Split::kNone;
};

// Immutable after construction; (user_id, recording_id) is unique.
class Manifest {
 public:
  Manifest() = default;
  explicit Manifest(std::vector<ManifestEntry> entries);

  const std::vector<ManifestEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  std::vector<const ManifestEntry*> with_split(Split s) const;
  std::set<std::string> user_ids() const;
  std::set<std::string> activity_ids() const;

  // Returns a copy whose split labels are all reset to kNone.
  Manifest without_splits() const;

 private:
  std::vector<ManifestEntry> entries_;
};

void save_manifest(const Manifest& m, const std::filesystem::path& path);
Manifest load_manifest(const std::filesystem::path& path);

// Per user: two disjoint recording sets ordered by created_at (session 1
// earlier). Users are eligible when their recording count lies within
// [min_recordings, max_recordings] and covers 2*per_session.
Manifest split_sessions(const Manifest& m, std::size_t users, std::size_t per_session,
                        std::uint64_t seed, std::size_t min_recordings = 0,
                        std::size_t max_recordings = SIZE_MAX);

// Assign train/val/test splits at the recording level, stratified per user.
// Fractions must sum to <= 1; remainder goes to train.
Manifest assign_splits(const Manifest& m, double val_fraction, double test_fraction,
                       std::uint64_t seed);

}  // namespace dmm::dataset
