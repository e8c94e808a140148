#include "treedb/driver.hpp"

#include <json.hpp>

namespace treedb {

RunResult run_model(const Model& model, const RunOptions& options, std::unique_ptr<StateStore>* keep) {
    StoreConfig sc = options.store;
    if (sc.kind == StoreKind::collapse && sc.layout.empty()) sc.layout = model.process_layout();
    auto store = make_store(model.k(), sc);

    RunResult r;
    r.model = model.name();
    r.k = model.k();
    r.store = sc.kind;
    r.workers = options.reach.workers;
    r.order = options.reach.order;
    r.report = explore(model, *store, options.reach);
    r.stats = store->stats();
    if (keep != nullptr) *keep = std::move(store);
    return r;
}

namespace {

nlohmann::json to_json(const RunResult& r) {
    using nlohmann::json;
    const auto& rep = r.report;
    const auto& s = r.stats;
    json workers = json::array();
    for (const auto& w : rep.workers) {
        workers.push_back({{"states", w.states},
                           {"explored", w.explored},
                           {"transitions", w.transitions},
                           {"deadlocks", w.deadlocks},
                           {"steals", w.steals},
                           {"handoffs", w.handoffs},
                           {"peak_open", w.peak_open}});
    }
    json j = {
        {"model", r.model},
        {"k", r.k},
        {"store", to_string(r.store)},
        {"workers", r.workers},
        {"order", to_string(r.order)},
        {"exploration",
         {{"valid", rep.valid},
          {"abort_reason", rep.abort_reason},
          {"states", rep.states},
          {"initial_states", rep.initial_states},
          {"transitions", rep.transitions},
          {"deadlocks", rep.deadlocks},
          {"wall_seconds", rep.wall_seconds},
          {"payload", to_string(rep.payload)},
          {"payload_words", rep.payload_words},
          {"peak_open_words", rep.peak_open_words},
          {"per_worker", workers}}},
        {"compression",
         {{"n", s.n},
          {"k", s.k},
          {"entries_total", s.entries_total},
          {"root_entries", s.root_entries},
          {"entries_per_part", s.entries_per_part},
          {"part_kind", s.part_kind},
          {"words_compressed", s.words_compressed},
          {"words_plain", s.words_plain()},
          {"overhead_words", s.overhead_words},
          {"ratio", s.ratio()},
          {"ratio_exact", s.ratio_exact().str()},
          {"bytes_actual", s.bytes_actual},
          {"bytes_allocated", s.bytes_allocated},
          {"entry_stride_bytes", s.entry_stride_bytes},
          {"per_state_words", s.per_state_words()},
          {"per_state_bytes", s.per_state_bytes()}}},
    };
    if (rep.first_deadlock) j["exploration"]["first_deadlock"] = *rep.first_deadlock;
    return j;
}

}  // namespace

std::string report_json(const RunResult& result, int indent) { return to_json(result).dump(indent); }

std::string report_json(const std::vector<RunResult>& results, int indent) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : results) arr.push_back(to_json(r));
    return arr.dump(indent);
}

}  // namespace treedb
