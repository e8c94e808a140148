// treedb: explore models with compressed state storage, compare stores, run
// the acceptance suite.
//
// Exit codes: 0 success, 1 usage or input error, 2 store capacity exhausted
// (verify: 1 when a gating criterion fails).

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "treedb/acceptance.hpp"
#include "treedb/analytics.hpp"
#include "treedb/driver.hpp"
#include "treedb/errors.hpp"
#include "treedb/gcm.hpp"
#include "treedb/tree_db.hpp"

using namespace treedb;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kCapacity = 2;

struct Input {
    std::string model_path;
    std::string synthetic;
    unsigned table_bits = 20;
    unsigned ref_bits = 32;
    std::size_t workers = 1;
    std::string order = "stack";
    std::size_t max_work = 100;
    std::uint64_t seed = 1;
    std::string report;
};

unsigned default_table_bits() {
    if (const char* env = std::getenv("TREEDB_TABLE_BITS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1 && v <= 32) return static_cast<unsigned>(v);
        std::cerr << "warning: ignoring TREEDB_TABLE_BITS='" << env << "'\n";
    }
    return 20;
}

void add_input_options(CLI::App& cmd, Input& in) {
    auto* model = cmd.add_option("--model", in.model_path, "Guarded-command model file")->check(CLI::ExistingFile);
    auto* synth = cmd.add_option("--synthetic", in.synthetic,
                                 "Synthetic set, e.g. identical:n=1000,k=8 | cross:m=64,k=16 | uniform:r=4,k=8");
    model->excludes(synth);
    synth->excludes(model);
    cmd.add_option("--table-bits", in.table_bits, "Node table capacity 2^B (env TREEDB_TABLE_BITS)")
        ->check(CLI::Range(1, 32))
        ->capture_default_str();
    cmd.add_option("--ref-bits", in.ref_bits, "Slot and reference width b")->check(CLI::Range(1, 32))->capture_default_str();
    cmd.add_option("--workers", in.workers, "Exploration threads")->check(CLI::PositiveNumber)->capture_default_str();
    cmd.add_option("--order", in.order, "Search order")
        ->check(CLI::IsMember({"stack", "queue", "dfs", "bfs"}))
        ->capture_default_str();
    cmd.add_option("--max-work", in.max_work, "Successors processed between work polls")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd.add_option("--seed", in.seed, "Seed for load-balancing victim selection")->capture_default_str();
    cmd.add_option("--report", in.report, "Write the JSON report to this path instead of stdout");
}

ModelPtr load_input(const Input& in) {
    if (!in.model_path.empty()) return load_model_file(in.model_path);
    if (!in.synthetic.empty()) return generate_synthetic(parse_synthetic(in.synthetic));
    throw ConfigError("one of --model or --synthetic is required");
}

RunOptions run_options(const Input& in, StoreKind kind, std::optional<Payload> payload) {
    RunOptions o;
    o.store.kind = kind;
    o.store.table = TableConfig::with_bits(in.table_bits, in.ref_bits);
    o.reach.workers = in.workers;
    o.reach.order = parse_order(in.order);
    o.reach.max_work = in.max_work;
    o.reach.payload = payload;
    o.reach.seed = in.seed;
    return o;
}

// Closed-form ratios for synthetic inputs, next to the measured ones.
json predictions(const Input& in, const Model& m) {
    if (in.synthetic.empty()) return nullptr;
    const SyntheticSpec s = parse_synthetic(in.synthetic);
    const auto k = static_cast<std::int64_t>(s.k);
    const auto p = static_cast<std::int64_t>(m.process_layout().size());
    json j;
    switch (s.kind) {
        case SyntheticKind::identical_slots:
            j["tree_basic"] = analytic::tree_worst(k).str();
            j["collapse"] = analytic::collapse_worst(p, k).str();
            break;
        case SyntheticKind::cross_product:
            j["tree_basic"] = analytic::tree_cross_product(k, static_cast<std::int64_t>(s.m)).str();
            if (p == 2) j["collapse"] = analytic::collapse_symmetric(2, k / 2, static_cast<std::int64_t>(s.m)).str();
            break;
        case SyntheticKind::uniform_slots:
            j["tree_basic"] = analytic::uniform_ratio(s.r, k).str();
            break;
    }
    j["tree_best"] = analytic::tree_best(k).str();
    j["collapse_best"] = analytic::collapse_best(p, k).str();
    return j;
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text << "\n";
        return;
    }
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write report '" + path + "'");
    out << text << "\n";
}

std::string summary(const RunResult& r) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "%s store=%s workers=%zu states=%llu transitions=%llu deadlocks=%llu ratio=%.4f "
                  "words/state=%.3f bytes/state=%.3f time=%.3fs%s",
                  r.model.c_str(), to_string(r.store).c_str(), r.workers,
                  static_cast<unsigned long long>(r.report.states),
                  static_cast<unsigned long long>(r.report.transitions),
                  static_cast<unsigned long long>(r.report.deadlocks), r.stats.ratio(), r.stats.per_state_words(),
                  r.stats.per_state_bytes(), r.report.wall_seconds, r.report.valid ? "" : " ABORTED");
    return buf;
}

int cmd_explore(const Input& in, const std::string& store, const std::string& payload, const std::string& dump_path) {
    const StoreKind kind = parse_store_kind(store);
    if (in.workers > 1 && (kind == StoreKind::collapse || kind == StoreKind::tree_basic)) {
        throw ConfigError("store '" + store + "' is sequential; use --workers 1");
    }
    auto model = load_input(in);
    std::optional<Payload> pl;
    if (!payload.empty()) pl = parse_payload(payload);
    std::unique_ptr<StateStore> kept;
    const RunResult r = run_model(*model, run_options(in, kind, pl), &kept);
    json j = json::parse(report_json(r));
    if (auto pred = predictions(in, *model); !pred.is_null()) j["predicted_ratio"] = pred;
    emit(in.report, j.dump(2));
    if (!in.report.empty()) std::cout << summary(r) << "\n";
    if (!dump_path.empty()) {
        auto* tree = dynamic_cast<TreeDb*>(kept.get());
        if (tree == nullptr) throw ConfigError("--dump-table needs a tree store");
        std::ofstream out(dump_path);
        if (!out) throw ConfigError("cannot write '" + dump_path + "'");
        tree->table().dump(out);
    }
    if (!r.report.valid) {
        std::cerr << "error: " << r.report.abort_reason << " (counts are partial)\n";
        return kCapacity;
    }
    return kOk;
}

int cmd_compare(const Input& in, const std::vector<std::string>& stores) {
    if (stores.size() < 2) throw ConfigError("compare needs at least two stores");
    auto model = load_input(in);
    std::vector<RunResult> results;
    bool aborted = false;
    std::printf("%-18s %10s %12s %12s %10s %10s\n", "store", "states", "words/state", "bytes/state", "ratio", "seconds");
    for (const auto& name : stores) {
        const StoreKind kind = parse_store_kind(name);
        Input local = in;
        // the sequential baselines always run single-threaded here
        if (kind == StoreKind::collapse || kind == StoreKind::tree_basic) local.workers = 1;
        results.push_back(run_model(*model, run_options(local, kind, std::nullopt)));
        const auto& r = results.back();
        aborted |= !r.report.valid;
        std::printf("%-18s %10llu %12.3f %12.3f %10.4f %10.3f%s\n", name.c_str(),
                    static_cast<unsigned long long>(r.report.states), r.stats.per_state_words(),
                    r.stats.per_state_bytes(), r.stats.ratio(), r.report.wall_seconds,
                    r.report.valid ? "" : "  aborted");
    }
    if (auto pred = predictions(in, *model); !pred.is_null()) std::printf("predicted ratios: %s\n", pred.dump().c_str());
    if (!in.report.empty()) {
        json j = json::parse(report_json(results));
        emit(in.report, j.dump(2));
    }
    return aborted ? kCapacity : kOk;
}

int cmd_verify(unsigned table_bits, const std::vector<int>& only, bool mutate, const std::string& models_dir,
               std::uint64_t seed) {
    AcceptanceOptions o;
    o.table_bits = table_bits;
    o.only = {only.begin(), only.end()};
    o.mutate_tag = mutate;
    o.models_dir = models_dir;
    o.seed = seed;
    o.on_result = [](const CriterionResult& r) {
        std::printf("%s\n", format_result(r).c_str());
        std::fflush(stdout);
    };
    const bool ok = all_gating_passed(run_acceptance(o));
    std::printf("acceptance: %s\n", ok ? "all gating criteria passed" : "FAILED");
    return ok ? kOk : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tree-compressed state storage and parallel reachability"};
    app.require_subcommand(1);

    Input in;
    in.table_bits = default_table_bits();

    auto* explore_cmd = app.add_subcommand("explore", "Explore a model and report state counts and compression");
    add_input_options(*explore_cmd, in);
    std::string store = "tree";
    std::string payload;
    std::string dump_path;
    explore_cmd->add_option("--store", store, "hashtable | tree | tree-basic | tree-incremental | collapse")
        ->check(CLI::IsMember({"hashtable", "tree", "tree-basic", "tree-incremental", "collapse"}))
        ->capture_default_str();
    explore_cmd->add_option("--payload", payload, "Open-set payload: vector | ref | reftree")
        ->check(CLI::IsMember({"vector", "ref", "reftree"}));
    explore_cmd->add_option("--dump-table", dump_path, "Write the node table (index, left, right, tag) here");

    auto* compare_cmd = app.add_subcommand("compare", "Run one model against several stores");
    Input cin_ = in;
    add_input_options(*compare_cmd, cin_);
    std::vector<std::string> stores{"tree", "collapse", "hashtable"};
    compare_cmd->add_option("--stores", stores, "Stores to compare")->delimiter(',')->capture_default_str();

    auto* verify_cmd = app.add_subcommand("verify", "Run the acceptance suite");
    unsigned vbits = in.table_bits;
    std::vector<int> only;
    bool mutate = false;
    std::string models_dir;
    std::uint64_t vseed = 1;
    verify_cmd->add_option("--table-bits", vbits, "Default node table size 2^B")->check(CLI::Range(1, 32))->capture_default_str();
    verify_cmd->add_option("--only", only, "Criteria to run, e.g. 1,7,10")->delimiter(',');
    verify_cmd->add_flag("--mutate-tag", mutate, "Use the unsound table-flag verdict (the suite must fail)");
    verify_cmd->add_option("--models-dir", models_dir, "Directory of bundled .gcm models")->check(CLI::ExistingDirectory);
    verify_cmd->add_option("--seed", vseed, "Seed for randomized criteria")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*explore_cmd) return cmd_explore(in, store, payload, dump_path);
        if (*compare_cmd) return cmd_compare(cin_, stores);
        if (*verify_cmd) return cmd_verify(vbits, only, mutate, models_dir, vseed);
    } catch (const CapacityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kCapacity;
    } catch (const ParseError& e) {
        const std::string& file = *explore_cmd ? in.model_path : cin_.model_path;
        std::cerr << "error: " << (file.empty() ? "" : file + ":") << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
