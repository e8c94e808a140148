#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "treedb/model.hpp"
#include "treedb/open_set.hpp"
#include "treedb/store.hpp"

namespace treedb {

/// What the open sets hold: whole vectors, root references (vectors are
/// rebuilt on pop), or vectors with their reference trees for incremental
/// inserts.
enum class Payload { vector, ref, reftree };

std::string to_string(Payload p);
Payload parse_payload(std::string_view text);
std::string to_string(SearchOrder o);
SearchOrder parse_order(std::string_view text);

/// Payload used when none is requested: ref for the tree, reftree for the
/// incremental tree, whole vectors otherwise.
Payload default_payload(StoreKind kind);

struct ReachabilityConfig {
    std::size_t workers = 1;
    SearchOrder order = SearchOrder::stack;
    /// Work units (successors) processed between polls for work requests.
    std::size_t max_work = 100;
    std::optional<Payload> payload;
    std::uint64_t seed = 1;
};

struct WorkerCounters {
    std::uint64_t states = 0;       // states this worker inserted as new
    std::uint64_t explored = 0;     // states whose successors this worker evaluated
    std::uint64_t transitions = 0;
    std::uint64_t deadlocks = 0;
    std::uint64_t steals = 0;       // batches received
    std::uint64_t handoffs = 0;     // batches given away
    std::uint64_t peak_open = 0;    // records
};

struct ExplorationReport {
    std::uint64_t states = 0;
    std::uint64_t transitions = 0;
    std::uint64_t deadlocks = 0;
    std::uint64_t initial_states = 0;
    /// False when the run aborted (store full); counts are then partial.
    bool valid = true;
    std::string abort_reason;
    double wall_seconds = 0;
    Payload payload = Payload::vector;
    std::size_t payload_words = 0;
    std::uint64_t peak_open_words = 0;
    std::optional<StateVector> first_deadlock;
    std::vector<WorkerCounters> workers;
};

/// Explores every state reachable from the model's initial states, inserting
/// each exactly once into `store`. Workers poll each other for work in
/// random order and stop once all are idle with no batch in flight.
///
/// Throws ConfigError for impossible combinations (a sequential store with
/// several workers, a payload the store cannot serve). Capacity exhaustion
/// yields a report with valid = false; model errors propagate.
ExplorationReport explore(const Model& model, StateStore& store, const ReachabilityConfig& config);

}  // namespace treedb
