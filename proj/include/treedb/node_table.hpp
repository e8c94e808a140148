#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <utility>

#include "treedb/state_vector.hpp"

namespace treedb {

inline constexpr std::uint64_t kDefaultHashSeed = 0x5bd1e9955bd1e995ULL;

struct TableConfig {
    /// Number of entry slots; a power of two, at least 2, at most 2^ref_bits.
    std::uint64_t capacity = std::uint64_t{1} << 20;
    /// Width of slot values and references.
    unsigned ref_bits = 32;
    /// Inserts fail once this fraction of the slots is occupied.
    double max_load = 0.95;
    /// Cache-line pairs visited before an insert gives up.
    std::size_t probe_limit = 1024;
    std::uint64_t seed = kDefaultHashSeed;

    static TableConfig with_bits(unsigned table_bits, unsigned ref_bits = 32) {
        TableConfig c;
        c.capacity = std::uint64_t{1} << table_bits;
        c.ref_bits = ref_bits;
        return c;
    }
};

struct FindResult {
    Ref ref = 0;
    bool seen = false;
};

struct TableStats {
    std::uint64_t capacity = 0;
    std::uint64_t entries = 0;
    std::uint64_t roots = 0;
    std::uint64_t bytes_allocated = 0;
    /// Footprint of one entry including its share of the inline tag word.
    double entry_stride_bytes = 0;
    unsigned entries_per_bucket = 0;
    unsigned bucket_bytes = 0;
};

/// Fixed-capacity lockless set of (left, right) word pairs with stable
/// indices and one root tag bit per entry.
///
/// Layout: 128-byte aligned buckets (an adjacent cache-line pair), each holding
/// 15 entries packed into 64-bit words plus one word carrying the 15 tag bits.
/// A bucket index and slot give the reference `bucket * 15 + slot`. Entries are
/// stored complemented so that zeroed memory reads as empty; the pair
/// (2^b-1, 2^b-1) is therefore not storable.
///
/// Probing hashes the pair to a bucket, walks the bucket starting at a hashed
/// offset, then rehashes to another bucket, up to probe_limit buckets. An entry
/// is published with a single CAS, so any reader that obtains a reference sees
/// the complete pair.
class NodeTable {
public:
    static constexpr unsigned kBucketEntries = 15;
    static constexpr unsigned kBucketBytes = 128;

    explicit NodeTable(const TableConfig& config);
    ~NodeTable();

    NodeTable(const NodeTable&) = delete;
    NodeTable& operator=(const NodeTable&) = delete;

    /// Linearizable insert-or-find. Throws CapacityError when the load limit
    /// or the probe limit is hit, ConfigError for out-of-range words.
    FindResult find_or_put(Slot left, Slot right);

    /// Returns the pair stored under `ref`; InvalidReference for free slots.
    std::pair<Slot, Slot> get(Ref ref) const;

    /// Flips the tag of `ref` from non-root to root. True only for the caller
    /// that performed the flip.
    bool tag_root(Ref ref);

    bool is_root(Ref ref) const;
    bool occupied(Ref ref) const noexcept;

    std::uint64_t capacity() const noexcept { return capacity_; }
    unsigned ref_bits() const noexcept { return ref_bits_; }
    const TableConfig& config() const noexcept { return config_; }

    /// Occupied entries; exact at quiescence.
    std::uint64_t size() const noexcept;

    /// Scans the table; exact at quiescence.
    TableStats stats() const;

    /// Visits occupied entries in index order as (ref, left, right, is_root).
    void for_each(const std::function<void(Ref, Slot, Slot, bool)>& fn) const;

    /// One line per occupied entry: "index\tleft\tright\ttag", decimal, tag 0/1.
    void dump(std::ostream& out) const;

private:
    struct alignas(kBucketBytes) Bucket {
        std::uint64_t words[kBucketEntries];
        std::uint64_t tags;
    };
    static_assert(sizeof(Bucket) == kBucketBytes);

    struct alignas(64) Counter {
        std::atomic<std::uint64_t> value{0};
    };
    static constexpr std::size_t kStripes = 16;

    void check_ref(Ref ref) const;
    bool over_limit() const noexcept;

    TableConfig config_;
    std::uint64_t capacity_;
    unsigned ref_bits_;
    Slot max_word_;
    std::uint64_t usable_;  // indices below this are handed out
    std::uint64_t buckets_count_;
    std::uint64_t load_limit_;
    void* raw_ = nullptr;
    Bucket* buckets_ = nullptr;
    std::unique_ptr<Counter[]> counts_;
};

}  // namespace treedb
