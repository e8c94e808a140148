#include "treedb/store.hpp"

#include <string>

#include "treedb/basic_tree_db.hpp"
#include "treedb/collapse_db.hpp"
#include "treedb/errors.hpp"
#include "treedb/tree_db.hpp"
#include "treedb/vector_table.hpp"

namespace treedb {

void StateStore::get(Ref, std::span<Slot>) const {
    throw ConfigError("store '" + to_string(kind()) + "' cannot reconstruct vectors from references");
}

std::string to_string(StoreKind kind) {
    switch (kind) {
        case StoreKind::hashtable: return "hashtable";
        case StoreKind::tree: return "tree";
        case StoreKind::tree_basic: return "tree-basic";
        case StoreKind::tree_incremental: return "tree-incremental";
        case StoreKind::collapse: return "collapse";
    }
    return "?";
}

StoreKind parse_store_kind(std::string_view text) {
    if (text == "hashtable") return StoreKind::hashtable;
    if (text == "tree") return StoreKind::tree;
    if (text == "tree-basic") return StoreKind::tree_basic;
    if (text == "tree-incremental") return StoreKind::tree_incremental;
    if (text == "collapse") return StoreKind::collapse;
    throw ConfigError("unknown store '" + std::string(text) + "'");
}

std::unique_ptr<StateStore> make_store(std::size_t k, const StoreConfig& config) {
    switch (config.kind) {
        case StoreKind::hashtable: return std::make_unique<VectorTable>(k, config.table);
        case StoreKind::tree: return std::make_unique<TreeDb>(k, config.table, TreeMode::concurrent);
        case StoreKind::tree_incremental:
            return std::make_unique<TreeDb>(k, config.table, TreeMode::incremental);
        case StoreKind::tree_basic: return std::make_unique<BasicTreeDb>(k, config.table.seed);
        case StoreKind::collapse:
            return std::make_unique<CollapseDb>(config.layout.empty() ? balanced_layout(k, 1) : config.layout,
                                                config.table.seed);
    }
    throw ConfigError("unknown store kind");
}

}  // namespace treedb
