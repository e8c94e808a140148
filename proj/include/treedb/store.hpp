#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "treedb/model.hpp"
#include "treedb/node_table.hpp"
#include "treedb/state_vector.hpp"
#include "treedb/stats.hpp"

namespace treedb {

enum class StoreKind { hashtable, tree, tree_basic, tree_incremental, collapse };

std::string to_string(StoreKind kind);
StoreKind parse_store_kind(std::string_view text);

/// A closed set of state vectors: find_or_put inserts a vector unless present
/// and reports which of the two happened.
class StateStore {
public:
    virtual ~StateStore() = default;

    virtual StoreKind kind() const noexcept = 0;
    virtual std::size_t k() const noexcept = 0;
    /// Whether find_or_put / get may be called from several threads at once.
    virtual bool thread_safe() const noexcept = 0;
    /// Whether references returned by find_or_put can be turned back into vectors.
    virtual bool supports_get() const noexcept { return false; }

    virtual FindResult find_or_put(StateView v) = 0;
    virtual void get(Ref ref, std::span<Slot> out) const;
    /// Distinct vectors stored; exact at quiescence.
    virtual std::uint64_t size() const = 0;
    virtual CompressionStats stats() const = 0;

    StateVector get(Ref ref) const {
        StateVector v(k());
        get(ref, v);
        return v;
    }
};

struct StoreConfig {
    StoreKind kind = StoreKind::tree;
    TableConfig table;
    /// Block partition for collapse stores; empty means the model's layout.
    ProcessLayout layout;
};

std::unique_ptr<StateStore> make_store(std::size_t k, const StoreConfig& config);

}  // namespace treedb
