#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "treedb/node_table.hpp"
#include "treedb/store.hpp"
#include "treedb/tree_shape.hpp"

namespace treedb {

/// Table references of every internal node of one stored vector, indexed by
/// the post-order node id of its TreeShape.
struct ReferenceTree {
    std::vector<Ref> refs;

    friend bool operator==(const ReferenceTree&, const ReferenceTree&) = default;
};

struct TreeResult {
    Ref ref = 0;
    bool seen = false;
    /// find_or_put calls issued on the node table by this insert.
    unsigned accesses = 0;
};

enum class TreeMode { concurrent, incremental };

/// Tree-compressed vector database over one merged node table.
///
/// Every internal node of every tree shares the table, so equal tuples at
/// different positions are stored once. Because an internal tuple of one
/// vector can coincide with the root tuple of another, the seen/new verdict
/// comes from flipping the root tag of the returned entry, never from the
/// table's own seen flag.
///
/// With k = 1 a vector is its own reference; membership is then kept as
/// (value, 0) records in the table.
class TreeDb final : public StateStore {
public:
    TreeDb(std::size_t k, const TableConfig& config, TreeMode mode = TreeMode::concurrent);

    StoreKind kind() const noexcept override {
        return mode_ == TreeMode::incremental ? StoreKind::tree_incremental : StoreKind::tree;
    }
    std::size_t k() const noexcept override { return shape_.k(); }
    bool thread_safe() const noexcept override { return true; }
    bool supports_get() const noexcept override { return true; }
    TreeMode mode() const noexcept { return mode_; }

    FindResult find_or_put(StateView v) override;
    using StateStore::get;
    void get(Ref ref, std::span<Slot> out) const override;
    std::uint64_t size() const override;
    CompressionStats stats() const override;

    /// Full insert; fills `refs` (if given) with the node references of v.
    TreeResult insert(StateView v, ReferenceTree* refs = nullptr);

    /// Incremental insert of v, a successor of `pred` whose node references
    /// are in `refs`. Only nodes covering changed slots touch the table;
    /// `refs` is updated in place to describe v.
    TreeResult insert_incremental(StateView v, StateView pred, ReferenceTree& refs);

    /// Rebuilds the vector of a root reference and optionally its node references.
    void get(Ref ref, std::span<Slot> out, ReferenceTree* refs) const;

    /// Imaginary predecessor holding the reserved value in every slot, with a
    /// reference tree of reserved values; forces a full insert of the first state.
    std::pair<StateVector, ReferenceTree> bootstrap() const;

    const TreeShape& shape() const noexcept { return shape_; }
    const NodeTable& table() const noexcept { return table_; }
    NodeTable& table() noexcept { return table_; }

    /// Test hook: take the verdict from the table's seen flag (the unsound
    /// multi-table rule) instead of the root tag.
    void set_table_verdict_for_testing(bool on) noexcept { table_verdict_ = on; }

private:
    TreeResult finish(FindResult root, unsigned accesses);
    void check_vector(StateView v) const;

    TreeShape shape_;
    NodeTable table_;
    TreeMode mode_;
    Slot reserved_;
    bool table_verdict_ = false;
};

}  // namespace treedb
