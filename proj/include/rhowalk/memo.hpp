#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <utility>

namespace rhowalk {

struct PairHash {
    template <typename A, typename B>
    std::size_t operator()(const std::pair<A, B>& p) const noexcept {
        const std::size_t h = std::hash<A>{}(p.first);
        return h ^ (std::hash<B>{}(p.second) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
    }
};

// Sharded get-or-compute cache. The computation runs without holding a lock,
// so it may recurse into the same memo; when two threads race on one key the
// first stored value wins. Callers must only memoise pure functions.
template <typename Key, typename Value, typename Hash = PairHash>
class ConcurrentMemo {
public:
    std::optional<Value> find(const Key& key) const {
        const std::size_t h = Hash{}(key);
        auto& shard = shards_[h % kShards];
        std::lock_guard lock(shard.mutex);
        auto it = shard.map.find(key);
        if (it == shard.map.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    Value insert(const Key& key, Value value) {
        const std::size_t h = Hash{}(key);
        auto& shard = shards_[h % kShards];
        std::lock_guard lock(shard.mutex);
        return shard.map.try_emplace(key, std::move(value)).first->second;
    }

    template <typename F>
    Value get_or_compute(const Key& key, F&& compute) {
        if (auto hit = find(key)) {
            return *hit;
        }
        return insert(key, compute());
    }

    void clear() {
        for (auto& shard : shards_) {
            std::lock_guard lock(shard.mutex);
            shard.map.clear();
        }
    }

    std::size_t size() const {
        std::size_t n = 0;
        for (auto& shard : shards_) {
            std::lock_guard lock(shard.mutex);
            n += shard.map.size();
        }
        return n;
    }

private:
    static constexpr std::size_t kShards = 16;
    struct Shard {
        mutable std::mutex mutex;
        std::unordered_map<Key, Value, Hash> map;
    };
    mutable std::array<Shard, kShards> shards_;
};

} // namespace rhowalk
