#include "treedb/node_table.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <string>

#include "hash.hpp"
#include "treedb/errors.hpp"

namespace treedb {

namespace {

using Word = std::uint64_t;

inline std::atomic_ref<Word> atomic(const Word& w) noexcept {
    return std::atomic_ref<Word>(const_cast<Word&>(w));
}

inline Word pack(Slot left, Slot right) noexcept {
    // complemented so that a zero word means "free"
    return ~((Word{left} << 32) | Word{right});
}

}  // namespace

NodeTable::NodeTable(const TableConfig& config)
    : config_(config), capacity_(config.capacity), ref_bits_(config.ref_bits) {
    if (ref_bits_ == 0 || ref_bits_ > kMaxRefBits) {
        throw ConfigError("reference width must be 1..32 bits, got " + std::to_string(ref_bits_));
    }
    if (capacity_ < 2 || !std::has_single_bit(capacity_)) {
        throw ConfigError("table capacity must be a power of two >= 2, got " + std::to_string(capacity_));
    }
    if (capacity_ > (std::uint64_t{1} << ref_bits_)) {
        throw ConfigError("table capacity " + std::to_string(capacity_) + " does not fit " +
                          std::to_string(ref_bits_) + "-bit references");
    }
    if (!(config.max_load > 0.0 && config.max_load <= 1.0)) {
        throw ConfigError("max load must be in (0, 1]");
    }
    if (config.probe_limit == 0) throw ConfigError("probe limit must be positive");

    max_word_ = reserved_value(ref_bits_);
    // the all-ones index would alias the reserved slot value
    usable_ = capacity_ == (std::uint64_t{1} << ref_bits_) ? capacity_ - 1 : capacity_;
    buckets_count_ = (usable_ + kBucketEntries - 1) / kBucketEntries;
    load_limit_ = static_cast<std::uint64_t>(std::floor(config.max_load * static_cast<double>(usable_)));

    const std::size_t bytes = buckets_count_ * sizeof(Bucket) + kBucketBytes;
    // calloc hands large requests straight to zeroed pages, so untouched
    // parts of a big table cost nothing
    raw_ = std::calloc(1, bytes);
    if (raw_ == nullptr) throw ConfigError("cannot allocate " + std::to_string(bytes) + " bytes");
    auto addr = reinterpret_cast<std::uintptr_t>(raw_);
    addr = (addr + kBucketBytes - 1) & ~std::uintptr_t{kBucketBytes - 1};
    buckets_ = reinterpret_cast<Bucket*>(addr);
    counts_ = std::make_unique<Counter[]>(kStripes);
}

NodeTable::~NodeTable() { std::free(raw_); }

bool NodeTable::over_limit() const noexcept {
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < kStripes; ++i) total += counts_[i].value.load(std::memory_order_relaxed);
    return total >= load_limit_;
}

FindResult NodeTable::find_or_put(Slot left, Slot right) {
    if (left > max_word_ || right > max_word_) {
        throw ConfigError("tuple word exceeds " + std::to_string(ref_bits_) + " bits");
    }
    if (left == max_word_ && right == max_word_) {
        throw ConfigError("the all-ones tuple is reserved as the empty marker");
    }
    const Word key = pack(left, right);
    std::uint64_t h = detail::mix64(((Word{left} << 32) | right) ^ config_.seed);
    for (std::size_t attempt = 0; attempt < config_.probe_limit; ++attempt) {
        const std::uint64_t line = detail::reduce(h, buckets_count_);
        Bucket& bucket = buckets_[line];
        const unsigned start = static_cast<unsigned>(h % kBucketEntries);
        for (unsigned i = 0; i < kBucketEntries; ++i) {
            unsigned slot = start + i;
            if (slot >= kBucketEntries) slot -= kBucketEntries;
            const std::uint64_t idx = line * kBucketEntries + slot;
            if (idx >= usable_) continue;
            auto cell = atomic(bucket.words[slot]);
            Word cur = cell.load(std::memory_order_acquire);
            if (cur == key) return {static_cast<Ref>(idx), true};
            if (cur != 0) continue;
            auto& stripe = counts_[line & (kStripes - 1)].value;
            if (stripe.load(std::memory_order_relaxed) >= load_limit_ / kStripes && over_limit()) {
                throw CapacityError("node table full: " + std::to_string(size()) + " of " +
                                    std::to_string(usable_) + " slots used (load limit " +
                                    std::to_string(config_.max_load) + ")");
            }
            if (cell.compare_exchange_strong(cur, key, std::memory_order_acq_rel,
                                             std::memory_order_acquire)) {
                stripe.fetch_add(1, std::memory_order_relaxed);
                return {static_cast<Ref>(idx), false};
            }
            if (cur == key) return {static_cast<Ref>(idx), true};
        }
        h = detail::mix64(h + detail::kGolden);
    }
    throw CapacityError("node table probe limit of " + std::to_string(config_.probe_limit) +
                        " buckets exhausted with " + std::to_string(size()) + " entries");
}

void NodeTable::check_ref(Ref ref) const {
    if (!occupied(ref)) {
        throw InvalidReference("reference " + std::to_string(ref) + " is not an occupied entry");
    }
}

bool NodeTable::occupied(Ref ref) const noexcept {
    if (ref >= usable_) return false;
    const Bucket& b = buckets_[ref / kBucketEntries];
    return atomic(b.words[ref % kBucketEntries]).load(std::memory_order_acquire) != 0;
}

std::pair<Slot, Slot> NodeTable::get(Ref ref) const {
    if (ref >= usable_) throw InvalidReference("reference " + std::to_string(ref) + " out of range");
    const Bucket& b = buckets_[ref / kBucketEntries];
    const Word w = atomic(b.words[ref % kBucketEntries]).load(std::memory_order_acquire);
    if (w == 0) throw InvalidReference("reference " + std::to_string(ref) + " is a free slot");
    const Word v = ~w;
    return {static_cast<Slot>(v >> 32), static_cast<Slot>(v)};
}

bool NodeTable::tag_root(Ref ref) {
    check_ref(ref);
    const Word bit = Word{1} << (ref % kBucketEntries);
    Bucket& b = buckets_[ref / kBucketEntries];
    auto tags = atomic(b.tags);
    if (tags.load(std::memory_order_relaxed) & bit) return false;
    return (tags.fetch_or(bit, std::memory_order_acq_rel) & bit) == 0;
}

bool NodeTable::is_root(Ref ref) const {
    check_ref(ref);
    const Bucket& b = buckets_[ref / kBucketEntries];
    return (atomic(b.tags).load(std::memory_order_acquire) >> (ref % kBucketEntries)) & 1U;
}

std::uint64_t NodeTable::size() const noexcept {
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < kStripes; ++i) total += counts_[i].value.load(std::memory_order_relaxed);
    return total;
}

TableStats NodeTable::stats() const {
    TableStats s;
    s.capacity = capacity_;
    s.entries = size();
    for (std::uint64_t i = 0; i < buckets_count_; ++i) {
        s.roots += static_cast<std::uint64_t>(
            std::popcount(atomic(buckets_[i].tags).load(std::memory_order_acquire)));
    }
    s.bytes_allocated = buckets_count_ * sizeof(Bucket);
    s.entry_stride_bytes = static_cast<double>(kBucketBytes) / kBucketEntries;
    s.entries_per_bucket = kBucketEntries;
    s.bucket_bytes = kBucketBytes;
    return s;
}

void NodeTable::for_each(const std::function<void(Ref, Slot, Slot, bool)>& fn) const {
    for (std::uint64_t line = 0; line < buckets_count_; ++line) {
        const Bucket& b = buckets_[line];
        const Word tags = atomic(b.tags).load(std::memory_order_acquire);
        for (unsigned slot = 0; slot < kBucketEntries; ++slot) {
            const Word w = atomic(b.words[slot]).load(std::memory_order_acquire);
            if (w == 0) continue;
            const Word v = ~w;
            fn(static_cast<Ref>(line * kBucketEntries + slot), static_cast<Slot>(v >> 32),
               static_cast<Slot>(v), (tags >> slot) & 1U);
        }
    }
}

void NodeTable::dump(std::ostream& out) const {
    for_each([&out](Ref ref, Slot l, Slot r, bool root) {
        out << ref << '\t' << l << '\t' << r << '\t' << (root ? 1 : 0) << '\n';
    });
}

}  // namespace treedb
