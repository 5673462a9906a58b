#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dmm/dataset/manifest.hpp"

namespace dmm::dataset {

struct IngestIssue {
  enum class Severity { kWarning, kError };
  Severity severity = Severity::kError;
  std::string path;
  std::string message;
};

struct IngestResult {
  Manifest manifest;
  std::vector<IngestIssue> issues;

  std::size_t error_count() const;
};

// Scans a directory tree for *.jsonl recordings, fully validating each file.
// Malformed or duplicate recordings are reported in issues, never silently
// dropped. Throws DataError only if the root path itself is unusable.
IngestResult ingest(const std::filesystem::path& root);

}  // namespace dmm::dataset
