#include "treedb/tuple_table.hpp"

#include <algorithm>
#include <string>

#include "hash.hpp"
#include "treedb/errors.hpp"

namespace treedb {

TupleTable::TupleTable(std::size_t width, std::uint64_t seed, Ref max_entries)
    : width_(width), seed_(seed), max_entries_(max_entries), index_(16, kEmpty) {
    if (width_ == 0) throw ConfigError("tuple width must be positive");
}

std::uint64_t TupleTable::hash(std::span<const Slot> tuple) const noexcept {
    std::uint64_t h = seed_;
    for (Slot s : tuple) h = detail::mix64(h ^ (s + detail::kGolden));
    return h;
}

FindResult TupleTable::find_or_put(std::span<const Slot> tuple) {
    if (tuple.size() != width_) {
        throw ConfigError("tuple of width " + std::to_string(tuple.size()) + " in a table of width " +
                          std::to_string(width_));
    }
    const std::uint64_t mask = index_.size() - 1;
    std::uint64_t pos = hash(tuple) & mask;
    for (;;) {
        const Ref r = index_[pos];
        if (r == kEmpty) break;
        if (std::equal(tuple.begin(), tuple.end(), data_.begin() + std::ptrdiff_t(r * width_))) {
            return {r, true};
        }
        pos = (pos + 1) & mask;
    }
    if (count_ >= max_entries_) {
        throw CapacityError("tuple table reached " + std::to_string(max_entries_) + " entries");
    }
    const Ref ref = static_cast<Ref>(count_++);
    data_.insert(data_.end(), tuple.begin(), tuple.end());
    index_[pos] = ref;
    if (count_ * 4 > index_.size() * 3) grow();
    return {ref, false};
}

void TupleTable::grow() {
    std::vector<Ref> bigger(index_.size() * 2, kEmpty);
    const std::uint64_t mask = bigger.size() - 1;
    for (Ref r = 0; r < count_; ++r) {
        std::uint64_t pos = hash(std::span<const Slot>(data_.data() + r * width_, width_)) & mask;
        while (bigger[pos] != kEmpty) pos = (pos + 1) & mask;
        bigger[pos] = r;
    }
    index_.swap(bigger);
}

std::span<const Slot> TupleTable::get(Ref ref) const {
    if (ref >= count_) throw InvalidReference("reference " + std::to_string(ref) + " was never handed out");
    return {data_.data() + std::size_t(ref) * width_, width_};
}

std::uint64_t TupleTable::bytes() const noexcept {
    return data_.capacity() * sizeof(Slot) + index_.capacity() * sizeof(Ref);
}

}  // namespace treedb
