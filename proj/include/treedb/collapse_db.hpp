#pragma once

#include <vector>

#include "treedb/model.hpp"
#include "treedb/store.hpp"
#include "treedb/tuple_table.hpp"

namespace treedb {

/// Process-table store: each block of the layout is deduplicated in its own
/// table and the tuple of block references goes into a root table. The root
/// table's verdict is the store's verdict. Single-threaded only.
class CollapseDb final : public StateStore {
public:
    explicit CollapseDb(ProcessLayout layout, std::uint64_t seed = kDefaultHashSeed);

    StoreKind kind() const noexcept override { return StoreKind::collapse; }
    std::size_t k() const noexcept override { return k_; }
    bool thread_safe() const noexcept override { return false; }
    bool supports_get() const noexcept override { return true; }

    FindResult find_or_put(StateView v) override;
    using StateStore::get;
    void get(Ref ref, std::span<Slot> out) const override;
    std::uint64_t size() const override { return root_.size(); }
    CompressionStats stats() const override;

    const ProcessLayout& layout() const noexcept { return layout_; }
    const std::vector<TupleTable>& block_tables() const noexcept { return blocks_; }
    const TupleTable& root_table() const noexcept { return root_; }

private:
    ProcessLayout layout_;
    std::size_t k_;
    std::vector<TupleTable> blocks_;
    TupleTable root_;
    std::vector<Slot> scratch_;
};

}  // namespace treedb
