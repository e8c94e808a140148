#pragma once

#include <memory>
#include <string>
#include <vector>

#include "treedb/model.hpp"
#include "treedb/reachability.hpp"
#include "treedb/stats.hpp"
#include "treedb/store.hpp"

namespace treedb {

struct RunOptions {
    StoreConfig store;
    ReachabilityConfig reach;
};

struct RunResult {
    std::string model;
    std::size_t k = 0;
    StoreKind store = StoreKind::tree;
    std::size_t workers = 1;
    SearchOrder order = SearchOrder::stack;
    ExplorationReport report;
    CompressionStats stats;
};

/// Builds the configured store for `model` (collapse stores take the model's
/// process layout unless one is given), explores, and collects store stats.
/// With `keep` the store is handed back for inspection.
RunResult run_model(const Model& model, const RunOptions& options,
                    std::unique_ptr<StateStore>* keep = nullptr);

/// JSON report of one run. Ratios are derived only from the counters that
/// are also in the report.
std::string report_json(const RunResult& result, int indent = 2);

/// JSON array of several runs.
std::string report_json(const std::vector<RunResult>& results, int indent = 2);

}  // namespace treedb
