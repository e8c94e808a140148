#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "treedb/state_vector.hpp"

namespace treedb {

enum class SearchOrder { stack, queue };

/// Growable ring buffer of fixed-width records, used as a LIFO or FIFO
/// open set. Owned by one worker; batches leave through take_oldest.
class OpenSet {
public:
    OpenSet(std::size_t width, SearchOrder order);

    std::size_t width() const noexcept { return width_; }
    std::size_t size() const noexcept { return count_; }
    bool empty() const noexcept { return count_ == 0; }
    std::size_t peak() const noexcept { return peak_; }

    void put(std::span<const Slot> record);
    /// Removes the next record per search order into `out`; false when empty.
    bool get(std::span<Slot> out);

    /// Moves the `n` oldest records to the end of `batch`.
    void take_oldest(std::size_t n, std::vector<Slot>& batch);
    /// Appends every record of a batch produced by take_oldest.
    void put_all(std::span<const Slot> batch);

private:
    void grow();
    Slot* at(std::size_t logical) noexcept { return buf_.data() + ((head_ + logical) % cap_) * width_; }

    std::size_t width_;
    SearchOrder order_;
    std::vector<Slot> buf_;
    std::size_t cap_ = 0;  // records
    std::size_t head_ = 0;
    std::size_t count_ = 0;
    std::size_t peak_ = 0;
};

}  // namespace treedb
