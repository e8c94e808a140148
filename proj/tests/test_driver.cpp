#include <doctest.h>

#include <filesystem>
#include <json.hpp>

#include "treedb/driver.hpp"
#include "treedb/gcm.hpp"

using namespace treedb;
using nlohmann::json;

namespace {

RunOptions options(StoreKind kind, std::size_t workers = 1) {
    RunOptions o;
    o.store.kind = kind;
    o.store.table = TableConfig::with_bits(18);
    o.reach.workers = workers;
    return o;
}

}  // namespace

TEST_CASE("report fields are consistent with the counters") {
    auto m = load_model_file(std::filesystem::path(TREEDB_MODELS_DIR) / "counter.gcm");
    const auto r = run_model(*m, options(StoreKind::tree, 4));
    const auto j = json::parse(report_json(r));
    CHECK(j["model"] == "counter");
    CHECK(j["exploration"]["states"] == 12);
    CHECK(j["exploration"]["deadlocks"] == 1);
    CHECK(j["exploration"]["valid"] == true);
    CHECK(j["exploration"]["first_deadlock"] == json::array({3, 2}));
    CHECK(j["exploration"]["per_worker"].size() == 4);
    const auto& c = j["compression"];
    CHECK(c["n"] == 12);
    CHECK(c["words_plain"] == c["n"].get<int>() * c["k"].get<int>());
    // ratios are recomputable from the reported counters
    CHECK(c["ratio"].get<double>() ==
          doctest::Approx(c["words_compressed"].get<double>() / c["words_plain"].get<double>()));
    CHECK(c["per_state_bytes"].get<double>() ==
          doctest::Approx(c["bytes_actual"].get<double>() / c["n"].get<double>()));
    CHECK(c["part_kind"] == "merged");
}

TEST_CASE("synthetic worst case through the driver") {
    auto m = generate_synthetic(parse_synthetic("identical:n=1000,k=8"));
    const auto basic = run_model(*m, options(StoreKind::tree_basic));
    CHECK(basic.stats.ratio_exact() == Rational(7, 4));
    const auto j = json::parse(report_json(basic));
    CHECK(j["compression"]["ratio_exact"] == "7/4");
    CHECK(j["compression"]["ratio"].get<double>() == doctest::Approx(1.75));
    CHECK(j["compression"]["entries_per_part"] == json::array({1000, 2000, 4000}));
    // the merged table can only share more
    const auto merged = run_model(*m, options(StoreKind::tree));
    CHECK(merged.stats.ratio() <= 1.75);
}

TEST_CASE("collapse runs use the model layout") {
    auto m = load_model_file(std::filesystem::path(TREEDB_MODELS_DIR) / "philosophers3.gcm");
    std::unique_ptr<StateStore> keep;
    const auto r = run_model(*m, options(StoreKind::collapse), &keep);
    CHECK(r.stats.entries_per_part.size() == m->process_layout().size());
    CHECK(keep != nullptr);
    CHECK(keep->size() == r.report.states);
}

TEST_CASE("array reports") {
    auto m = generate_synthetic(parse_synthetic("cross:m=8,k=4"));
    std::vector<RunResult> rs;
    for (auto kind : {StoreKind::tree, StoreKind::collapse, StoreKind::hashtable}) rs.push_back(run_model(*m, options(kind)));
    const auto j = json::parse(report_json(rs));
    REQUIRE(j.is_array());
    CHECK(j.size() == 3);
    CHECK(j[2]["compression"]["ratio_exact"] == "1/1");
}
