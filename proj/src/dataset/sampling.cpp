#include "dmm/dataset/sampling.hpp"

#include <algorithm>
#include <random>
#include <unordered_set>

#include "dmm/core/geometry.hpp"
#include "dmm/core/rng.hpp"

namespace dmm::dataset {

namespace {

bool needs_resample(const core::MotionSequence& seq) {
  if (std::abs(seq.nominal_fps() - core::kTargetFps) > 1e-9) return true;
  const auto& frames = seq.frames();
  for (std::size_t i = 1; i < frames.size(); ++i) {
    if (std::abs((frames[i].t - frames[i - 1].t) - 1.0 / core::kTargetFps) > 1e-6) return true;
  }
  return false;
}

// Pair classes for the two samplers. Both demand distinct users or distinct
// activities on at least one axis; see the sampler contracts.
enum class PairKind { kActionSame, kActionDiff, kUserSame, kUserDiff };

bool pair_matches(PairKind kind, const RecordingMeta& a, const RecordingMeta& b) {
  const bool same_user = a.user_id == b.user_id;
  const bool same_act = a.activity_id == b.activity_id;
  switch (kind) {
    case PairKind::kActionSame: return !same_user && same_act;
    case PairKind::kActionDiff: return !same_user && !same_act;
    case PairKind::kUserSame: return same_user && !same_act;
    case PairKind::kUserDiff: return !same_user && !same_act;
  }
  return false;
}

std::vector<std::pair<std::size_t, std::size_t>> enumerate_pairs(
    const std::vector<const ManifestEntry*>& pool, PairKind kind) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    for (std::size_t j = i + 1; j < pool.size(); ++j) {
      if (pair_matches(kind, pool[i]->meta, pool[j]->meta)) out.emplace_back(i, j);
    }
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> draw_pairs(
    const std::vector<const ManifestEntry*>& pool, PairKind kind, std::size_t n,
    std::mt19937_64& rng, const char* what) {
  if (n == 0) return {};
  if (pool.size() < 2) throw DataError(std::string("not enough recordings to sample ") + what);

  // Desk-scale pools are enumerated exactly; large pools fall back to
  // rejection sampling with a distinctness set.
  if (pool.size() <= 3000) {
    auto all = enumerate_pairs(pool, kind);
    if (all.size() < n) {
      throw DataError(std::string("cannot sample ") + std::to_string(n) + " distinct " + what +
                      " pairs; only " + std::to_string(all.size()) + " exist");
    }
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(n);
    return all;
  }

  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::unordered_set<std::uint64_t> seen;
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::size_t attempts = 0;
  const std::size_t max_attempts = 1000 * n + 100000;
  while (out.size() < n) {
    if (++attempts > max_attempts) {
      throw DataError(std::string("sampling ") + what +
                      " pairs did not converge; request may exceed the distinct pool");
    }
    std::size_t i = pick(rng), j = pick(rng);
    if (i == j) continue;
    if (i > j) std::swap(i, j);
    if (!pair_matches(kind, pool[i]->meta, pool[j]->meta)) continue;
    const std::uint64_t key = static_cast<std::uint64_t>(i) * pool.size() + j;
    if (!seen.insert(key).second) continue;
    out.emplace_back(i, j);
  }
  return out;
}

std::vector<PairSample> sample_labeled_pairs(const Manifest& m, WindowLoader& loader,
                                             std::size_t n_same, std::size_t n_diff,
                                             std::uint64_t seed, Split split, PairKind same_kind,
                                             PairKind diff_kind, const char* what) {
  auto pool = m.with_split(split);
  auto rng = core::make_rng(core::derive_seed(seed, core::fnv1a64(what)));

  auto same_idx = draw_pairs(pool, same_kind, n_same, rng, what);
  auto diff_idx = draw_pairs(pool, diff_kind, n_diff, rng, what);

  std::vector<PairSample> out;
  out.reserve(n_same + n_diff);
  auto emit = [&](const std::pair<std::size_t, std::size_t>& idx, bool same) {
    PairSample s;
    s.window_a = loader.window_for(*pool[idx.first]);
    s.window_b = loader.window_for(*pool[idx.second]);
    s.same = same;
    s.meta_a = pool[idx.first]->meta;
    s.meta_b = pool[idx.second]->meta;
    out.push_back(std::move(s));
  };
  for (const auto& p : same_idx) emit(p, true);
  for (const auto& p : diff_idx) emit(p, false);
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

}  // namespace

WindowLoader::WindowLoader(const RecordingStore& store, core::WindowOptions opts)
    : store_(&store), opts_(opts) {}

core::MotionSequence WindowLoader::sequence_for(const ManifestEntry& entry) const {
  Recording rec = store_->load(entry);
  if (needs_resample(rec.sequence)) return core::resample(rec.sequence, core::kTargetFps);
  return rec.sequence;
}

core::WindowPtr WindowLoader::window_for(const ManifestEntry& entry) {
  const std::string key = entry.meta.user_id + "/" + entry.meta.recording_id;
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  auto ptr = std::make_shared<const core::NormalizedWindow>(core::window(sequence_for(entry), opts_));
  cache_.emplace(key, ptr);
  return ptr;
}

std::vector<core::WindowPtr> WindowLoader::windows_for(
    const std::vector<const ManifestEntry*>& entries) {
  std::vector<core::WindowPtr> out;
  out.reserve(entries.size());
  for (const auto* e : entries) out.push_back(window_for(*e));
  return out;
}

std::vector<PairSample> sample_action_pairs(const Manifest& m, WindowLoader& loader,
                                            std::size_t n_same, std::size_t n_diff,
                                            std::uint64_t seed, Split split) {
  return sample_labeled_pairs(m, loader, n_same, n_diff, seed, split, PairKind::kActionSame,
                              PairKind::kActionDiff, "action");
}

std::vector<PairSample> sample_user_pairs(const Manifest& m, WindowLoader& loader,
                                          std::size_t n_same, std::size_t n_diff,
                                          std::uint64_t seed, Split split) {
  return sample_labeled_pairs(m, loader, n_same, n_diff, seed, split, PairKind::kUserSame,
                              PairKind::kUserDiff, "user");
}

Eigen::VectorXf sample_noise(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::VectorXf noise(dim);
  for (int i = 0; i < dim; ++i) noise(i) = static_cast<float>(g(rng));
  return noise;
}

std::vector<AnonTrainSample> sample_anonymizer_pairs(const Manifest& m, WindowLoader& loader,
                                                     std::size_t n, std::uint64_t seed,
                                                     Split split, int noise_dim) {
  if (noise_dim <= 0) throw InvalidInputError("noise_dim must be positive");
  auto pool = m.with_split(split);
  auto rng = core::make_rng(core::derive_seed(seed, core::fnv1a64("anonymizer")));

  // Same-user pairs, any activity mix.
  std::vector<std::pair<std::size_t, std::size_t>> idx;
  if (n > 0) {
    if (pool.size() < 2) throw DataError("not enough recordings to sample anonymizer pairs");
    std::vector<std::pair<std::size_t, std::size_t>> all;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      for (std::size_t j = i + 1; j < pool.size(); ++j) {
        if (pool[i]->meta.user_id == pool[j]->meta.user_id) all.emplace_back(i, j);
      }
    }
    if (all.empty()) throw DataError("no user has two recordings; cannot sample anonymizer pairs");
    if (all.size() >= n) {
      std::shuffle(all.begin(), all.end(), rng);
      all.resize(n);
      idx = std::move(all);
    } else {
      // Windows may repeat across pairs once the distinct pool is exhausted;
      // the noise vectors still make every sample unique.
      idx.reserve(n);
      std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
      for (std::size_t i = 0; i < n; ++i) idx.push_back(all[pick(rng)]);
    }
  }

  std::vector<AnonTrainSample> out;
  out.reserve(n);
  const std::size_t n_equal = (n + 1) / 2;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    AnonTrainSample s;
    s.window_a = loader.window_for(*pool[idx[i].first]);
    s.window_b = loader.window_for(*pool[idx[i].second]);
    s.meta_a = pool[idx[i].first]->meta;
    s.meta_b = pool[idx[i].second]->meta;
    s.noise_a = sample_noise(rng, noise_dim);
    s.noise_equal = i < n_equal;
    s.noise_b = s.noise_equal ? s.noise_a : sample_noise(rng, noise_dim);
    out.push_back(std::move(s));
  }
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

}  // namespace dmm::dataset
