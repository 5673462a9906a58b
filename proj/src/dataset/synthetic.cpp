#include "dmm/dataset/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "dmm/core/rng.hpp"

namespace dmm::dataset {

namespace {

using core::derive_seed;
using core::fnv1a64;

struct UserTraits {
  double height_offset;  // meters, shifts head and hands vertically
  double arm_scale;      // lateral reach multiplier
  double tempo;          // waveform frequency multiplier
  double roughness;      // jitter amplitude (inverse smoothness)
  double rot_amp;        // rotation amplitude multiplier
};

UserTraits make_user(std::uint64_t seed, int u) {
  auto rng = core::make_rng(derive_seed(seed, fnv1a64("user"), static_cast<std::uint64_t>(u)));
  std::normal_distribution<double> g(0.0, 1.0);
  UserTraits t;
  t.height_offset = 0.12 * g(rng);
  t.arm_scale = std::clamp(1.0 + 0.10 * g(rng), 0.7, 1.3);
  t.tempo = std::clamp(1.0 + 0.04 * g(rng), 0.88, 1.12);
  t.roughness = std::uniform_real_distribution<double>(0.5, 1.5)(rng);
  t.rot_amp = std::clamp(1.0 + 0.18 * g(rng), 0.5, 1.6);
  return t;
}

struct Harmonic {
  double amp, freq, phase;
  double eval(double t, double tempo, double phase_shift) const {
    return amp * std::sin(2.0 * M_PI * freq * tempo * t + phase + phase_shift);
  }
};

// Two harmonics per channel; frequencies are shared per activity so devices
// move coherently, amplitudes/phases differ per channel.
struct ActivityWaveform {
  // [device][axis] position harmonics, [device][euler] orientation harmonics
  Harmonic pos[3][3][2];
  Harmonic eul[3][3][2];
};

ActivityWaveform make_activity(std::uint64_t seed, int a) {
  auto rng = core::make_rng(derive_seed(seed, fnv1a64("activity"), static_cast<std::uint64_t>(a)));
  std::uniform_real_distribution<double> uf(0.0, 1.0);
  const double f1 = 0.3 + 0.6 * uf(rng);
  const double f2 = f1 * (1.7 + 0.9 * uf(rng));

  ActivityWaveform w;
  for (int d = 0; d < 3; ++d) {
    const double pos_scale = d == 0 ? 0.05 : 0.22;
    const double eul_scale = d == 0 ? 0.22 : 0.55;
    for (int c = 0; c < 3; ++c) {
      w.pos[d][c][0] = {pos_scale * (0.5 + uf(rng)), f1, 2.0 * M_PI * uf(rng)};
      w.pos[d][c][1] = {0.4 * pos_scale * (0.5 + uf(rng)), f2, 2.0 * M_PI * uf(rng)};
      w.eul[d][c][0] = {eul_scale * (0.5 + uf(rng)), f1, 2.0 * M_PI * uf(rng)};
      w.eul[d][c][1] = {0.4 * eul_scale * (0.5 + uf(rng)), f2, 2.0 * M_PI * uf(rng)};
    }
  }
  return w;
}

core::Quat quat_from_euler(double yaw, double pitch, double roll) {
  const double cy = std::cos(yaw * 0.5), sy = std::sin(yaw * 0.5);
  const double cp = std::cos(pitch * 0.5), sp = std::sin(pitch * 0.5);
  const double cr = std::cos(roll * 0.5), sr = std::sin(roll * 0.5);
  return core::Quat{sr * cp * cy - cr * sp * sy, cr * sp * cy + sr * cp * sy,
                    cr * cp * sy - sr * sp * cy, cr * cp * cy + sr * sp * sy};
}

Recording make_recording(const SynthConfig& cfg, int u, int r, const UserTraits& traits,
                         const std::vector<ActivityWaveform>& activities) {
  const int a = r % cfg.n_activities;
  auto rng = core::make_rng(derive_seed(cfg.seed, fnv1a64("recording"),
                                        static_cast<std::uint64_t>(u),
                                        static_cast<std::uint64_t>(r)));
  std::uniform_real_distribution<double> uf(0.0, 1.0);
  std::normal_distribution<double> g(0.0, 1.0);

  const double phase_shift = 2.0 * M_PI * uf(rng);
  const double wobble = std::clamp(1.0 + 0.02 * g(rng), 0.94, 1.06);
  const int n_frames = static_cast<int>(cfg.base_duration_s * core::kTargetFps) +
                       static_cast<int>(rng() % 60);

  const double jitter_pos = 0.006 * traits.roughness;
  const double jitter_eul = 0.015 * traits.roughness;
  const double pole = 0.92;  // one-pole smoothing of the jitter stream

  const core::Vec3 base[3] = {
      {0.0, 1.70 + traits.height_offset, 0.0},
      {-0.35 * traits.arm_scale, 1.15 + 0.8 * traits.height_offset, 0.25},
      {0.35 * traits.arm_scale, 1.15 + 0.8 * traits.height_offset, 0.25},
  };

  double jp[3][3] = {};  // smoothed position jitter state
  double je[3][3] = {};  // smoothed euler jitter state

  const ActivityWaveform& w = activities[static_cast<std::size_t>(a)];
  std::vector<core::MotionFrame> frames;
  frames.reserve(static_cast<std::size_t>(n_frames));
  for (int k = 0; k < n_frames; ++k) {
    const double t = static_cast<double>(k) / core::kTargetFps;
    core::MotionFrame f;
    f.t = t;
    for (int d = 0; d < 3; ++d) {
      double p[3];
      double e[3];
      for (int c = 0; c < 3; ++c) {
        jp[d][c] = pole * jp[d][c] + (1.0 - pole) * jitter_pos * g(rng);
        je[d][c] = pole * je[d][c] + (1.0 - pole) * jitter_eul * g(rng);
        double wave = wobble * (w.pos[d][c][0].eval(t, traits.tempo, phase_shift) +
                                w.pos[d][c][1].eval(t, traits.tempo, phase_shift));
        if (d > 0 && c != 1) wave *= traits.arm_scale;  // hands reach sideways/forward
        p[c] = wave + jp[d][c];
        e[c] = traits.rot_amp * wobble *
                   (w.eul[d][c][0].eval(t, traits.tempo, phase_shift) +
                    w.eul[d][c][1].eval(t, traits.tempo, phase_shift)) +
               je[d][c];
      }
      f.device(d) = core::Pose(base[d] + core::Vec3{p[0], p[1], p[2]},
                               quat_from_euler(e[0], e[1], e[2]));
    }
    frames.push_back(f);
  }

  Recording rec{RecordingMeta{}, core::MotionSequence(std::move(frames), core::kTargetFps)};
  std::ostringstream uid, rid, aid;
  uid << "s" << cfg.seed << "_u" << u;
  rid << "r" << r;
  aid << "act" << a;
  rec.meta.user_id = uid.str();
  rec.meta.recording_id = rid.str();
  rec.meta.activity_id = aid.str();
  rec.meta.created_at = 1700000000LL + static_cast<std::int64_t>(u) * 1000000 +
                        static_cast<std::int64_t>(r) * 3600;
  return rec;
}

}  // namespace

SynthCorpus synth_generate(const SynthConfig& cfg) {
  if (cfg.n_users < 1 || cfg.n_activities < 1 || cfg.recordings_per_user < 1) {
    throw InvalidInputError("synth_generate counts must be >= 1");
  }
  if (cfg.base_duration_s < 35.0) {
    throw InvalidInputError("synthetic recordings must span at least 35 seconds");
  }

  std::vector<ActivityWaveform> activities;
  activities.reserve(static_cast<std::size_t>(cfg.n_activities));
  for (int a = 0; a < cfg.n_activities; ++a) activities.push_back(make_activity(cfg.seed, a));

  auto store = std::make_shared<MemoryRecordingStore>();
  std::vector<ManifestEntry> entries;
  for (int u = 0; u < cfg.n_users; ++u) {
    const UserTraits traits = make_user(cfg.seed, u);
    for (int r = 0; r < cfg.recordings_per_user; ++r) {
      Recording rec = make_recording(cfg, u, r, traits, activities);
      ManifestEntry e;
      e.meta = rec.meta;
      e.path = rec.meta.user_id + "/" + rec.meta.recording_id + ".jsonl";
      entries.push_back(e);
      store->put(std::move(rec));
    }
  }
  return SynthCorpus{Manifest(std::move(entries)), std::move(store)};
}

void write_corpus(const SynthCorpus& corpus, const std::filesystem::path& root) {
  std::filesystem::create_directories(root);
  for (const auto& e : corpus.manifest.entries()) {
    const auto path = root / e.path;
    std::filesystem::create_directories(path.parent_path());
    write_recording_file(path, corpus.store->load(e));
  }
  save_manifest(corpus.manifest, root / "manifest.json");
}

}  // namespace dmm::dataset
