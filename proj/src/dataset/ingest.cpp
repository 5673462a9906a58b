#include "dmm/dataset/ingest.hpp"

#include <algorithm>

#include "dmm/dataset/recording_io.hpp"

namespace dmm::dataset {

namespace fs = std::filesystem;

std::size_t IngestResult::error_count() const {
  std::size_t n = 0;
  for (const auto& i : issues) {
    if (i.severity == IngestIssue::Severity::kError) ++n;
  }
  return n;
}

IngestResult ingest(const fs::path& root) {
  std::error_code ec;
  if (!fs::exists(root, ec) || !fs::is_directory(root, ec)) {
    throw DataError("ingest root is not a directory: " + root.string());
  }

  std::vector<fs::path> files;
  for (auto it = fs::recursive_directory_iterator(root, ec);
       it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec) throw DataError("cannot scan " + root.string() + ": " + ec.message());
    if (it->is_regular_file() && it->path().extension() == ".jsonl") {
      files.push_back(it->path());
    }
  }
  std::sort(files.begin(), files.end());

  IngestResult result;
  std::vector<ManifestEntry> entries;
  std::set<std::string> seen;
  for (const auto& file : files) {
    try {
      Recording rec = read_recording_file(file);
      const std::string key = rec.meta.user_id + "/" + rec.meta.recording_id;
      if (!seen.insert(key).second) {
        result.issues.push_back({IngestIssue::Severity::kError, file.string(),
                                 "duplicate (user_id, recording_id) " + key + "; rejected"});
        continue;
      }
      ManifestEntry e;
      e.meta = rec.meta;
      e.path = fs::relative(file, root).generic_string();
      entries.push_back(std::move(e));
    } catch (const Error& err) {
      result.issues.push_back({IngestIssue::Severity::kError, file.string(), err.what()});
    }
  }

  if (entries.empty()) {
    result.issues.push_back(
        {IngestIssue::Severity::kWarning, root.string(), "no valid recordings found"});
  }
  result.manifest = Manifest(std::move(entries));
  return result;
}

}  // namespace dmm::dataset
