#include "treedb/vector_table.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

#include "hash.hpp"
#include "treedb/errors.hpp"

namespace treedb {

namespace {
constexpr std::uint64_t kDone = std::uint64_t{1} << 63;
constexpr std::uint64_t kLine = 8;
}  // namespace

VectorTable::VectorTable(std::size_t k, const TableConfig& config)
    : k_(k), config_(config), capacity_(config.capacity) {
    if (k_ == 0) throw ConfigError("vector table needs k >= 1");
    if (capacity_ < kLine || !std::has_single_bit(capacity_)) {
        throw ConfigError("vector table capacity must be a power of two >= 8");
    }
    if (capacity_ > (std::uint64_t{1} << config.ref_bits)) {
        throw ConfigError("vector table capacity does not fit the reference width");
    }
    load_limit_ = static_cast<std::uint64_t>(std::floor(config.max_load * static_cast<double>(capacity_)));
    hashes_ = std::make_unique<std::atomic<std::uint64_t>[]>(capacity_);
    data_ = static_cast<Slot*>(std::calloc(capacity_ * k_, sizeof(Slot)));
    if (data_ == nullptr) throw ConfigError("cannot allocate the vector table");
}

VectorTable::~VectorTable() { std::free(data_); }

FindResult VectorTable::find_or_put(StateView v) {
    if (v.size() != k_) throw ConfigError("vector length does not match the table");
    std::uint64_t h = config_.seed;
    for (Slot s : v) h = detail::mix64(h ^ (s + detail::kGolden));
    // never zero, never carrying the done bit
    const std::uint64_t memo = (h & ~kDone) | 1;
    const std::uint64_t lines = capacity_ / kLine;
    std::uint64_t line_hash = h;
    for (std::size_t attempt = 0; attempt < config_.probe_limit; ++attempt) {
        const std::uint64_t line = detail::reduce(line_hash, lines);
        for (std::uint64_t i = 0; i < kLine; ++i) {
            const std::uint64_t idx = line * kLine + ((h + i) & (kLine - 1));
            auto& bucket = hashes_[idx];
            std::uint64_t cur = bucket.load(std::memory_order_acquire);
            if (cur == 0) {
                if (count_.load(std::memory_order_relaxed) >= load_limit_) {
                    throw CapacityError("vector table full: " + std::to_string(size()) + " of " +
                                        std::to_string(capacity_) + " buckets used");
                }
                if (bucket.compare_exchange_strong(cur, memo, std::memory_order_acq_rel)) {
                    std::copy(v.begin(), v.end(), data_ + idx * k_);
                    bucket.store(memo | kDone, std::memory_order_release);
                    count_.fetch_add(1, std::memory_order_relaxed);
                    return {static_cast<Ref>(idx), false};
                }
            }
            if ((cur & ~kDone) != memo) continue;
            while ((cur & kDone) == 0) {
                std::this_thread::yield();
                cur = bucket.load(std::memory_order_acquire);
            }
            if (std::equal(v.begin(), v.end(), data_ + idx * k_)) return {static_cast<Ref>(idx), true};
        }
        line_hash = detail::mix64(line_hash + detail::kGolden);
    }
    throw CapacityError("vector table probe limit exhausted with " + std::to_string(size()) + " entries");
}

void VectorTable::get(Ref ref, std::span<Slot> out) const {
    if (out.size() != k_) throw ConfigError("output span has the wrong length");
    if (ref >= capacity_ || (hashes_[ref].load(std::memory_order_acquire) & kDone) == 0) {
        throw InvalidReference("reference " + std::to_string(ref) + " is not a stored vector");
    }
    std::copy(data_ + std::size_t(ref) * k_, data_ + (std::size_t(ref) + 1) * k_, out.begin());
}

std::uint64_t VectorTable::size() const { return count_.load(std::memory_order_relaxed); }

CompressionStats VectorTable::stats() const {
    CompressionStats s;
    s.store = to_string(kind());
    s.k = k_;
    s.n = size();
    s.entries_total = s.n;
    s.root_entries = s.n;
    s.part_kind = "vector";
    s.words_compressed = s.n * k_;
    s.overhead_words = 2 * s.n;  // memoized hash word
    s.entry_stride_bytes = static_cast<double>(k_ * sizeof(Slot) + sizeof(std::uint64_t));
    s.bytes_actual = s.n * (k_ * sizeof(Slot) + sizeof(std::uint64_t));
    s.bytes_allocated = capacity_ * (k_ * sizeof(Slot) + sizeof(std::uint64_t));
    return s;
}

}  // namespace treedb
