#pragma once

#include <vector>

#include "treedb/store.hpp"
#include "treedb/tree_shape.hpp"
#include "treedb/tuple_table.hpp"

namespace treedb {

/// Sequential tree database with one growable table per internal tree node.
///
/// Tuples at different tree positions never share an entry, so the root
/// table's seen flag is a sound verdict. References are indices into the
/// child's own table. Single-threaded only.
class BasicTreeDb final : public StateStore {
public:
    explicit BasicTreeDb(std::size_t k, std::uint64_t seed = kDefaultHashSeed);

    StoreKind kind() const noexcept override { return StoreKind::tree_basic; }
    std::size_t k() const noexcept override { return shape_.k(); }
    bool thread_safe() const noexcept override { return false; }
    bool supports_get() const noexcept override { return true; }

    FindResult find_or_put(StateView v) override;
    using StateStore::get;
    void get(Ref ref, std::span<Slot> out) const override;
    std::uint64_t size() const override;
    CompressionStats stats() const override;

    const TreeShape& shape() const noexcept { return shape_; }
    /// Node tables in post-order node id order (k = 1: the single leaf table).
    const std::vector<TupleTable>& tables() const noexcept { return tables_; }

private:
    TreeShape shape_;
    std::vector<TupleTable> tables_;
    mutable std::vector<Ref> scratch_;
};

}  // namespace treedb
