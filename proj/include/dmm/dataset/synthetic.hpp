#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>

#include "dmm/dataset/recording_io.hpp"

namespace dmm::dataset {

// Desk-scale synthetic corpus: users carry five persistent traits (height
// offset, arm span, tempo bias, smoothness, rotation amplitude) layered on
// per-activity periodic waveforms, with smoothed per-frame jitter.
struct SynthConfig {
  int n_users = 2;
  int n_activities = 2;
  int recordings_per_user = 2;
  std::uint64_t seed = 0;
  double base_duration_s = 36.0;  // per-recording duration is >= this
};

struct SynthCorpus {
  Manifest manifest;
  std::shared_ptr<MemoryRecordingStore> store;
};

SynthCorpus synth_generate(const SynthConfig& cfg);

// Writes one JSONL file per recording under root plus manifest.json.
void write_corpus(const SynthCorpus& corpus, const std::filesystem::path& root);

}  // namespace dmm::dataset
