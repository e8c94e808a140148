#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "treedb/model.hpp"

namespace treedb {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    /// Soft criteria are reported but do not fail the suite.
    bool gating = true;
    std::string measured;
    std::string expected;
    double seconds = 0;
};

struct AcceptanceOptions {
    std::filesystem::path models_dir;
    /// Node table size for runs that fit the default; larger workloads grow it.
    unsigned table_bits = 20;
    std::uint64_t seed = 1;
    /// Run only these criteria (empty: all).
    std::set<int> only;
    /// Break the seen/new rule of every tree store (suite sensitivity check).
    bool mutate_tag = false;
    /// Called after each criterion finishes.
    std::function<void(const CriterionResult&)> on_result;
};

/// The bundled models: every .gcm file of models_dir plus the synthetic scenarios.
std::vector<ModelPtr> bundled_suite(const std::filesystem::path& models_dir);

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options);

/// "PASS  7 merged-table seen/new: measured ... | expected ..."
std::string format_result(const CriterionResult& r);

/// True when every gating criterion passed.
bool all_gating_passed(const std::vector<CriterionResult>& results);

}  // namespace treedb
