#include "dmm/dataset/recording_io.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "dmm/core/error.hpp"

namespace dmm::dataset {

using nlohmann::json;

namespace {

core::Pose pose_from_json(const json& j) {
  for (const char* k : {"x", "y", "z", "i", "j", "k", "w"}) {
    if (!j.contains(k) || !j.at(k).is_number()) {
      throw DataError(std::string("pose is missing numeric field '") + k + "'");
    }
  }
  return core::Pose({j.at("x").get<double>(), j.at("y").get<double>(), j.at("z").get<double>()},
                    {j.at("i").get<double>(), j.at("j").get<double>(), j.at("k").get<double>(),
                     j.at("w").get<double>()});
}

json pose_to_json(const core::Pose& p) {
  return json{{"x", p.position.x}, {"y", p.position.y}, {"z", p.position.z},
              {"i", p.orientation.i}, {"j", p.orientation.j}, {"k", p.orientation.k},
              {"w", p.orientation.w}};
}

core::MotionFrame frame_from_json(const json& j) {
  if (!j.contains("t") || !j.at("t").is_number()) throw DataError("frame is missing numeric 't'");
  core::MotionFrame f;
  f.t = j.at("t").get<double>();
  for (const char* dev : {"head", "left", "right"}) {
    if (!j.contains(dev)) throw DataError(std::string("frame is missing device '") + dev + "'");
  }
  f.head = pose_from_json(j.at("head"));
  f.left_hand = pose_from_json(j.at("left"));
  f.right_hand = pose_from_json(j.at("right"));
  return f;
}

json frame_to_json(const core::MotionFrame& f) {
  return json{{"t", f.t},
              {"head", pose_to_json(f.head)},
              {"left", pose_to_json(f.left_hand)},
              {"right", pose_to_json(f.right_hand)}};
}

std::string require_string(const json& j, const char* key, const std::string& origin) {
  if (!j.contains(key) || !j.at(key).is_string()) {
    throw DataError(origin + ": metadata is missing string field '" + key + "'");
  }
  return j.at(key).get<std::string>();
}

}  // namespace

core::MotionFrame frame_from_json_line(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw DataError(std::string("bad frame JSON: ") + e.what());
  }
  try {
    return frame_from_json(j);
  } catch (const InvalidInputError& e) {
    throw DataError(std::string("bad frame values: ") + e.what());
  }
}

std::string frame_to_json_line(const core::MotionFrame& frame) {
  return frame_to_json(frame).dump();
}

Recording read_recording(std::istream& in, const std::string& origin) {
  std::string line;
  if (!std::getline(in, line)) throw DataError(origin + ": empty recording file");

  json meta_json;
  try {
    meta_json = json::parse(line);
  } catch (const json::exception& e) {
    throw DataError(origin + ": bad metadata JSON: " + e.what());
  }

  Recording rec{RecordingMeta{}, core::MotionSequence({core::MotionFrame{}}, 1.0)};
  rec.meta.recording_id = require_string(meta_json, "recording_id", origin);
  rec.meta.user_id = require_string(meta_json, "user_id", origin);
  rec.meta.activity_id = require_string(meta_json, "activity_id", origin);
  if (!meta_json.contains("created_at") || !meta_json.at("created_at").is_number_integer()) {
    throw DataError(origin + ": metadata is missing integer field 'created_at'");
  }
  rec.meta.created_at = meta_json.at("created_at").get<std::int64_t>();
  if (!meta_json.contains("fps") || !meta_json.at("fps").is_number()) {
    throw DataError(origin + ": metadata is missing numeric field 'fps'");
  }
  const double fps = meta_json.at("fps").get<double>();
  if (!(fps > 0.0)) throw DataError(origin + ": fps must be positive");

  std::vector<core::MotionFrame> frames;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      frames.push_back(frame_from_json_line(line));
    } catch (const Error& e) {
      throw DataError(origin + " line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (frames.empty()) throw DataError(origin + ": recording has no frames");

  try {
    rec.sequence = core::MotionSequence(std::move(frames), fps);
  } catch (const InvalidInputError& e) {
    throw DataError(origin + ": " + e.what());
  }
  return rec;
}

Recording read_recording_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open recording file " + path.string());
  return read_recording(in, path.string());
}

void write_recording(std::ostream& out, const Recording& rec) {
  json meta{{"recording_id", rec.meta.recording_id},
            {"user_id", rec.meta.user_id},
            {"activity_id", rec.meta.activity_id},
            {"created_at", rec.meta.created_at},
            {"fps", rec.sequence.nominal_fps()}};
  out << meta.dump() << '\n';
  for (const auto& f : rec.sequence.frames()) out << frame_to_json(f).dump() << '\n';
}

void write_recording_file(const std::filesystem::path& path, const Recording& rec) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write recording file " + path.string());
  write_recording(out, rec);
  out.flush();
  if (!out) throw IoError("failed writing recording file " + path.string());
}

Recording FileRecordingStore::load(const ManifestEntry& entry) const {
  return read_recording_file(root_ / entry.path);
}

std::string MemoryRecordingStore::key(const RecordingMeta& meta) {
  return meta.user_id + "/" + meta.recording_id;
}

void MemoryRecordingStore::put(Recording rec) {
  recordings_.insert_or_assign(key(rec.meta), std::move(rec));
}

Recording MemoryRecordingStore::load(const ManifestEntry& entry) const {
  auto it = recordings_.find(key(entry.meta));
  if (it == recordings_.end()) {
    throw DataError("recording not in memory store: " + key(entry.meta));
  }
  return it->second;
}

}  // namespace dmm::dataset
