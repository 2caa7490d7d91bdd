#pragma once

#include <array>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <unordered_map>

#include "laman/canonical.hpp"
#include "laman/errors.hpp"
#include "laman/lam_value.hpp"

namespace laman {

/// Canonical key -> Laman number, safe for concurrent readers and writers.
/// Re-inserting a key must supply the same value; a conflicting value means
/// the recursion is broken and raises InternalError.
class MemoTable {
public:
  static constexpr std::size_t kShards = 64;

  std::optional<LamValue> find(const CanonicalKey& key) const {
    const Shard& s = shard(key);
    std::shared_lock lock(s.mutex);
    auto it = s.map.find(key);
    if (it == s.map.end()) return std::nullopt;
    return it->second;
  }

  void insert(const CanonicalKey& key, LamValue value) {
    Shard& s = shard(key);
    std::unique_lock lock(s.mutex);
    auto [it, inserted] = s.map.emplace(key, value);
    if (!inserted && it->second != value)
      throw InternalError("memo table: conflicting Laman numbers for one key");
  }

  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& s : shards_) {
      std::shared_lock lock(s.mutex);
      n += s.map.size();
    }
    return n;
  }

  void clear() {
    for (auto& s : shards_) {
      std::unique_lock lock(s.mutex);
      s.map.clear();
    }
  }

private:
  struct Shard {
    mutable std::shared_mutex mutex;
    std::unordered_map<CanonicalKey, LamValue, CanonicalKeyHash> map;
  };

  Shard& shard(const CanonicalKey& k) { return shards_[CanonicalKeyHash{}(k) % kShards]; }
  const Shard& shard(const CanonicalKey& k) const { return shards_[CanonicalKeyHash{}(k) % kShards]; }

  std::array<Shard, kShards> shards_;
};

} // namespace laman
