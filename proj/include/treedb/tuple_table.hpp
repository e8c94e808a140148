#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "treedb/node_table.hpp"
#include "treedb/state_vector.hpp"

namespace treedb {

/// Sequential, growable set of fixed-width tuples with stable indices.
///
/// Tuples are appended to a dense array and never move; a separate open
/// addressing index of references locates them and is rebuilt on growth. This
/// is the extra reference per entry that stable indexing costs when tables
/// have to resize.
class TupleTable {
public:
    explicit TupleTable(std::size_t width, std::uint64_t seed = kDefaultHashSeed, Ref max_entries = 0xFFFFFFFEu);

    FindResult find_or_put(std::span<const Slot> tuple);
    std::span<const Slot> get(Ref ref) const;

    std::size_t width() const noexcept { return width_; }
    std::uint64_t size() const noexcept { return count_; }
    /// Bytes of the tuple array plus the index, by capacity.
    std::uint64_t bytes() const noexcept;
    std::uint64_t index_slots() const noexcept { return index_.size(); }

private:
    static constexpr Ref kEmpty = 0xFFFFFFFFu;

    std::uint64_t hash(std::span<const Slot> tuple) const noexcept;
    void grow();

    std::size_t width_;
    std::uint64_t seed_;
    Ref max_entries_;
    std::uint64_t count_ = 0;
    std::vector<Slot> data_;
    std::vector<Ref> index_;
};

}  // namespace treedb
