#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>

#include "dmm/core/types.hpp"
#include "dmm/dataset/manifest.hpp"

namespace dmm::dataset {

struct Recording {
  RecordingMeta meta;
  core::MotionSequence sequence;
};

// JSON-lines format: line 1 is the metadata object
//   {"recording_id","user_id","activity_id","created_at","fps"}
// followed by one frame object per line:
//   {"t", "head":{x,y,z,i,j,k,w}, "left":{...}, "right":{...}}
Recording read_recording(std::istream& in, const std::string& origin);
Recording read_recording_file(const std::filesystem::path& path);
void write_recording(std::ostream& out, const Recording& rec);
void write_recording_file(const std::filesystem::path& path, const Recording& rec);

// Single-frame JSON codec, shared with the streaming CLI.
core::MotionFrame frame_from_json_line(const std::string& line);
std::string frame_to_json_line(const core::MotionFrame& frame);

// Where manifest entries resolve their motion data from.
class RecordingStore {
 public:
  virtual ~RecordingStore() = default;
  virtual Recording load(const ManifestEntry& entry) const = 0;
};

class FileRecordingStore : public RecordingStore {
 public:
  explicit FileRecordingStore(std::filesystem::path root) : root_(std::move(root)) {}
  Recording load(const ManifestEntry& entry) const override;
  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path root_;
};

class MemoryRecordingStore : public RecordingStore {
 public:
  void put(Recording rec);
  Recording load(const ManifestEntry& entry) const override;
  std::size_t size() const { return recordings_.size(); }

 private:
  static std::string key(const RecordingMeta& meta);
  std::map<std::string, Recording> recordings_;
};

}  // namespace dmm::dataset
