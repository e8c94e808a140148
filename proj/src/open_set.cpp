#include "treedb/open_set.hpp"

#include <algorithm>

#include "treedb/errors.hpp"

namespace treedb {

OpenSet::OpenSet(std::size_t width, SearchOrder order) : width_(width), order_(order) {
    if (width_ == 0) throw ConfigError("open set records need a positive width");
    cap_ = 64;
    buf_.resize(cap_ * width_);
}

void OpenSet::grow() {
    std::vector<Slot> bigger(cap_ * 2 * width_);
    for (std::size_t i = 0; i < count_; ++i) {
        const Slot* src = at(i);
        std::copy(src, src + width_, bigger.data() + i * width_);
    }
    buf_.swap(bigger);
    cap_ *= 2;
    head_ = 0;
}

void OpenSet::put(std::span<const Slot> record) {
    if (count_ == cap_) grow();
    std::copy(record.begin(), record.end(), at(count_));
    ++count_;
    peak_ = std::max(peak_, count_);
}

bool OpenSet::get(std::span<Slot> out) {
    if (count_ == 0) return false;
    if (order_ == SearchOrder::stack) {
        const Slot* src = at(count_ - 1);
        std::copy(src, src + width_, out.begin());
    } else {
        const Slot* src = at(0);
        std::copy(src, src + width_, out.begin());
        head_ = (head_ + 1) % cap_;
    }
    --count_;
    return true;
}

void OpenSet::take_oldest(std::size_t n, std::vector<Slot>& batch) {
    n = std::min(n, count_);
    batch.reserve(batch.size() + n * width_);
    for (std::size_t i = 0; i < n; ++i) {
        const Slot* src = at(i);
        batch.insert(batch.end(), src, src + width_);
    }
    head_ = (head_ + n) % cap_;
    count_ -= n;
}

void OpenSet::put_all(std::span<const Slot> batch) {
    for (std::size_t off = 0; off + width_ <= batch.size(); off += width_) put(batch.subspan(off, width_));
}

}  // namespace treedb
