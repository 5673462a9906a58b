#include "dmm/dataset/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>
#include <unordered_set>

#include "dmm/core/rng.hpp"

namespace dmm::dataset {

using nlohmann::json;

std::string split_name(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
    case Split::kSession1: return "session1";
    case Split::kSession2: return "session2";
    case Split::kNone: break;
  }
  return "";
}

Split split_from_name(const std::string& name) {
  if (name.empty()) return Split::kNone;
  if (name == "train") return Split::kTrain;
  if (name == "val") return Split::kVal;
  if (name == "test") return Split::kTest;
  if (name == "session1") return Split::kSession1;
  if (name == "session2") return Split::kSession2;
  throw DataError("unknown split label '" + name + "'");
}

Manifest::Manifest(std::vector<ManifestEntry> entries) : entries_(std::move(entries)) {
  std::unordered_set<std::string> seen;
  for (const auto& e : entries_) {
    if (e.meta.recording_id.empty() || e.meta.user_id.empty()) {
      throw DataError("manifest entries need non-empty user_id and recording_id");
    }
    if (!seen.insert(e.meta.user_id + "/" + e.meta.recording_id).second) {
      throw DataError("duplicate (user_id, recording_id): " + e.meta.user_id + "/" +
                      e.meta.recording_id);
    }
  }
}

std::vector<const ManifestEntry*> Manifest::with_split(Split s) const {
  std::vector<const ManifestEntry*> out;
  for (const auto& e : entries_) {
    if (s == Split::kNone || e.split == s) out.push_back(&e);
  }
  return out;
}

std::set<std::string> Manifest::user_ids() const {
  std::set<std::string> out;
  for (const auto& e : entries_) out.insert(e.meta.user_id);
  return out;
}

std::set<std::string> Manifest::activity_ids() const {
  std::set<std::string> out;
  for (const auto& e : entries_) out.insert(e.meta.activity_id);
  return out;
}

Manifest Manifest::without_splits() const {
  auto entries = entries_;
  for (auto& e : entries) e.split = Split::kNone;
  return Manifest(std::move(entries));
}

void save_manifest(const Manifest& m, const std::filesystem::path& path) {
  json entries = json::array();
  for (const auto& e : m.entries()) {
    entries.push_back(json{{"recording_id", e.meta.recording_id},
                           {"user_id", e.meta.user_id},
                           {"activity_id", e.meta.activity_id},
                           {"created_at", e.meta.created_at},
                           {"path", e.path},
                           {"split", split_name(e.split)}});
  }
  json doc{{"version", 1}, {"entries", entries}};
  std::ofstream out(path);
  if (!out) throw IoError("cannot write manifest " + path.string());
  out << doc.dump(2) << '\n';
}

Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw DataError("bad manifest JSON in " + path.string() + ": " + e.what());
  }
  if (!doc.contains("entries") || !doc.at("entries").is_array()) {
    throw DataError("manifest " + path.string() + " is missing 'entries'");
  }
  std::vector<ManifestEntry> entries;
  for (const auto& j : doc.at("entries")) {
    ManifestEntry e;
    e.meta.recording_id = j.at("recording_id").get<std::string>();
    e.meta.user_id = j.at("user_id").get<std::string>();
    e.meta.activity_id = j.at("activity_id").get<std::string>();
    e.meta.created_at = j.at("created_at").get<std::int64_t>();
    e.path = j.at("path").get<std::string>();
    e.split = split_from_name(j.value("split", ""));
    entries.push_back(std::move(e));
  }
  return Manifest(std::move(entries));
}

Manifest split_sessions(const Manifest& m, std::size_t users, std::size_t per_session,
                        std::uint64_t seed, std::size_t min_recordings,
                        std::size_t max_recordings) {
  if (per_session == 0) throw DataError("per_session must be positive");
  const std::size_t need = 2 * per_session;
  const std::size_t min_count = std::max(min_recordings, need);

  std::map<std::string, std::vector<const ManifestEntry*>> by_user;
  for (const auto& e : m.entries()) by_user[e.meta.user_id].push_back(&e);

  std::vector<std::string> eligible;
  std::vector<std::string> short_users;
  for (const auto& [user, recs] : by_user) {
    if (recs.size() >= min_count && recs.size() <= max_recordings) {
      eligible.push_back(user);
    } else if (recs.size() < need) {
      short_users.push_back(user);
    }
  }
  if (eligible.size() < users) {
    std::ostringstream msg;
    msg << "split_sessions: need " << users << " eligible users, found " << eligible.size()
        << " (require " << min_count << ".." << (max_recordings == SIZE_MAX
                                                     ? std::string("inf")
                                                     : std::to_string(max_recordings))
        << " recordings); users below " << need << " recordings:";
    for (const auto& u : short_users) msg << ' ' << u;
    throw DataError(msg.str());
  }

  auto rng = core::make_rng(core::derive_seed(seed, core::fnv1a64("split_sessions")));
  std::shuffle(eligible.begin(), eligible.end(), rng);
  eligible.resize(users);
  std::sort(eligible.begin(), eligible.end());

  std::vector<ManifestEntry> out;
  for (const auto& user : eligible) {
    auto recs = by_user.at(user);
    std::sort(recs.begin(), recs.end(), [](const ManifestEntry* a, const ManifestEntry* b) {
      if (a->meta.created_at != b->meta.created_at) return a->meta.created_at < b->meta.created_at;
      return a->meta.recording_id < b->meta.recording_id;
    });
    for (std::size_t i = 0; i < need; ++i) {
      ManifestEntry e = *recs[i];
      e.split = i < per_session ? Split::kSession1 : Split::kSession2;
      out.push_back(std::move(e));
    }
  }
  return Manifest(std::move(out));
}

Manifest assign_splits(const Manifest& m, double val_fraction, double test_fraction,
                       std::uint64_t seed) {
  if (val_fraction < 0 || test_fraction < 0 || val_fraction + test_fraction > 1.0) {
    throw DataError("invalid split fractions");
  }
  std::map<std::string, std::vector<std::size_t>> by_user;
  for (std::size_t i = 0; i < m.entries().size(); ++i) {
    by_user[m.entries()[i].meta.user_id].push_back(i);
  }
  auto entries = m.entries();
  auto rng = core::make_rng(core::derive_seed(seed, core::fnv1a64("assign_splits")));
  for (auto& [user, idxs] : by_user) {
    std::shuffle(idxs.begin(), idxs.end(), rng);
    const auto n = idxs.size();
    // Round but keep at least one training recording per user.
    auto n_val = static_cast<std::size_t>(val_fraction * static_cast<double>(n) + 0.5);
    auto n_test = static_cast<std::size_t>(test_fraction * static_cast<double>(n) + 0.5);
    while (n_val + n_test >= n && (n_val > 0 || n_test > 0)) {
      if (n_val >= n_test && n_val > 0) --n_val;
      else --n_test;
    }
    for (std::size_t i = 0; i < n; ++i) {
      Split s = Split::kTrain;
      if (i < n_val) s = Split::kVal;
      else if (i < n_val + n_test) s = Split::kTest;
      entries[idxs[i]].split = s;
    }
  }
  return Manifest(std::move(entries));
}

}  // namespace dmm::dataset
