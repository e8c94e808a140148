#include "treedb/reachability.hpp"

#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

#include "treedb/errors.hpp"
#include "treedb/tree_db.hpp"

namespace treedb {

std::string to_string(Payload p) {
    switch (p) {
        case Payload::vector: return "vector";
        case Payload::ref: return "ref";
        case Payload::reftree: return "reftree";
    }
    return "?";
}

Payload parse_payload(std::string_view text) {
    if (text == "vector") return Payload::vector;
    if (text == "ref") return Payload::ref;
    if (text == "reftree") return Payload::reftree;
    throw ConfigError("unknown payload '" + std::string(text) + "'");
}

std::string to_string(SearchOrder o) { return o == SearchOrder::stack ? "stack" : "queue"; }

SearchOrder parse_order(std::string_view text) {
    if (text == "stack" || text == "dfs") return SearchOrder::stack;
    if (text == "queue" || text == "bfs") return SearchOrder::queue;
    throw ConfigError("unknown search order '" + std::string(text) + "'");
}

Payload default_payload(StoreKind kind) {
    switch (kind) {
        case StoreKind::tree: return Payload::ref;
        case StoreKind::tree_incremental: return Payload::reftree;
        default: return Payload::vector;
    }
}

namespace {

constexpr int kNoRequest = -1;
enum Reply : int { kWaiting = 0, kNoWork = 1, kWork = 2 };

struct alignas(64) Mailbox {
    std::atomic<int> request{kNoRequest};  // id of the worker asking this one for work
    std::atomic<int> reply{kWaiting};      // answer to this worker's own request
    std::vector<Slot> batch;               // written by the victim before reply = kWork
};

class Exploration {
public:
    Exploration(const Model& model, StateStore& store, const ReachabilityConfig& config, Payload payload)
        : model_(model),
          store_(store),
          tree_(dynamic_cast<TreeDb*>(&store)),
          config_(config),
          payload_(payload),
          k_(model.k()),
          n_(config.workers),
          boxes_(config.workers) {
        incremental_ = payload_ == Payload::reftree ||
                       (payload_ == Payload::ref && tree_ != nullptr && tree_->mode() == TreeMode::incremental);
        nodes_ = tree_ != nullptr ? tree_->shape().internal_nodes() : 0;
        switch (payload_) {
            case Payload::vector: width_ = k_; break;
            case Payload::ref: width_ = 1; break;
            case Payload::reftree: width_ = k_ + nodes_; break;
        }
        for (std::size_t i = 0; i < n_; ++i) open_.emplace_back(width_, config.order);
        counters_.resize(n_);
    }

    ExplorationReport run() {
        const auto start = std::chrono::steady_clock::now();
        try {
            seed();
        } catch (const CapacityError& e) {
            abort_reason_ = e.what();
            aborted_.store(true);
        }
        if (!aborted_.load()) {
            if (n_ == 1) {
                worker(0);
            } else {
                std::vector<std::thread> threads;
                for (std::size_t id = 0; id < n_; ++id) threads.emplace_back([this, id] { worker(id); });
                for (auto& t : threads) t.join();
            }
        }
        if (error_) std::rethrow_exception(error_);

        ExplorationReport rep;
        rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        rep.valid = !aborted_.load();
        rep.abort_reason = abort_reason_;
        rep.payload = payload_;
        rep.payload_words = width_;
        rep.initial_states = initial_new_;
        rep.first_deadlock = first_deadlock_;
        for (std::size_t id = 0; id < n_; ++id) {
            counters_[id].peak_open = open_[id].peak();
            rep.states += counters_[id].states;
            rep.transitions += counters_[id].transitions;
            rep.deadlocks += counters_[id].deadlocks;
            rep.peak_open_words += counters_[id].peak_open * width_;
        }
        rep.workers = counters_;
        return rep;
    }

private:
    // Thread-local buffers of one worker.
    struct Scratch {
        std::vector<Slot> record;
        StateVector state;
        ReferenceTree refs;
        ReferenceTree new_refs;
        std::vector<Slot> succs;
        std::vector<Slot> out;
    };

    Scratch make_scratch() const {
        Scratch s;
        s.record.resize(width_);
        s.state.resize(k_);
        s.refs.refs.resize(nodes_);
        s.out.resize(width_);
        return s;
    }

    // Inserts an initial state into the store and worker 0's open set.
    void seed() {
        Scratch s = make_scratch();
        auto [pred, boot] = incremental_ ? tree_->bootstrap() : std::pair<StateVector, ReferenceTree>{};
        for (const auto& init : model_.initial_states()) {
            if (incremental_) {
                s.new_refs = boot;
                const TreeResult r = tree_->insert_incremental(init, pred, s.new_refs);
                if (!r.seen) {
                    ++initial_new_;
                    ++counters_[0].states;
                    push(0, init, r.ref, s.new_refs, s);
                }
            } else {
                const FindResult r = store_.find_or_put(init);
                if (!r.seen) {
                    ++initial_new_;
                    ++counters_[0].states;
                    push(0, init, r.ref, s.refs, s);
                }
            }
        }
    }

    void push(std::size_t id, StateView v, Ref ref, const ReferenceTree& refs, Scratch& s) {
        switch (payload_) {
            case Payload::vector: open_[id].put(v); return;
            case Payload::ref: open_[id].put(std::span<const Slot>(&ref, 1)); return;
            case Payload::reftree:
                std::copy(v.begin(), v.end(), s.out.begin());
                std::copy(refs.refs.begin(), refs.refs.end(), s.out.begin() + std::ptrdiff_t(k_));
                open_[id].put(s.out);
                return;
        }
    }

    // Expands one popped record; returns the number of successors.
    std::size_t expand(std::size_t id, Scratch& s) {
        StateView state;
        switch (payload_) {
            case Payload::vector: state = StateView(s.record.data(), k_); break;
            case Payload::ref:
                if (incremental_) tree_->get(s.record[0], s.state, &s.refs);
                else store_.get(s.record[0], s.state);
                state = s.state;
                break;
            case Payload::reftree:
                state = StateView(s.record.data(), k_);
                s.refs.refs.assign(s.record.begin() + std::ptrdiff_t(k_), s.record.end());
                break;
        }
        s.succs.clear();
        const std::size_t count = model_.next_state(state, s.succs);
        auto& c = counters_[id];
        ++c.explored;
        c.transitions += count;
        for (std::size_t i = 0; i < count; ++i) {
            const StateView succ(s.succs.data() + i * k_, k_);
            if (incremental_) {
                s.new_refs = s.refs;
                const TreeResult r = tree_->insert_incremental(succ, state, s.new_refs);
                if (!r.seen) {
                    ++c.states;
                    push(id, succ, r.ref, s.new_refs, s);
                }
            } else {
                const FindResult r = store_.find_or_put(succ);
                if (!r.seen) {
                    ++c.states;
                    push(id, succ, r.ref, s.refs, s);
                }
            }
        }
        if (count == 0) {
            ++c.deadlocks;
            std::lock_guard lock(deadlock_mutex_);
            if (!first_deadlock_) first_deadlock_ = StateVector(state.begin(), state.end());
        }
        return count;
    }

    // Answers a pending work request: half of the open set, or a refusal.
    void serve(std::size_t id) {
        auto& box = boxes_[id];
        const int requester = box.request.load(std::memory_order_acquire);
        if (requester == kNoRequest) return;
        auto& theirs = boxes_[static_cast<std::size_t>(requester)];
        auto& mine = open_[id];
        box.request.store(kNoRequest, std::memory_order_release);
        if (mine.size() >= 2) {
            theirs.batch.clear();
            mine.take_oldest(mine.size() / 2, theirs.batch);
            // the requester becomes busy before its work is visible
            idle_.fetch_sub(1, std::memory_order_acq_rel);
            ++counters_[id].handoffs;
            theirs.reply.store(kWork, std::memory_order_release);
        } else {
            theirs.reply.store(kNoWork, std::memory_order_release);
        }
    }

    bool terminated() const { return idle_.load(std::memory_order_acquire) == n_ || aborted_.load(); }

    // Synchronous random polling. Returns true with work in the open set,
    // false on global termination or abort.
    bool balance(std::size_t id, std::mt19937_64& rng) {
        if (!open_[id].empty()) return true;
        if (n_ == 1) return false;
        idle_.fetch_add(1, std::memory_order_acq_rel);
        std::uniform_int_distribution<std::size_t> pick(0, n_ - 2);
        unsigned failures = 0;
        auto backoff = [&failures] {
            if (++failures < 64) std::this_thread::yield();
            else std::this_thread::sleep_for(std::chrono::microseconds(50));
        };
        auto& box = boxes_[id];
        while (!terminated()) {
            serve(id);
            std::size_t victim = pick(rng);
            if (victim >= id) ++victim;
            box.reply.store(kWaiting, std::memory_order_relaxed);
            int expected = kNoRequest;
            if (!boxes_[victim].request.compare_exchange_strong(expected, static_cast<int>(id),
                                                                std::memory_order_acq_rel)) {
                backoff();
                continue;
            }
            int reply = kWaiting;
            while ((reply = box.reply.load(std::memory_order_acquire)) == kWaiting) {
                // an idle victim may have left already; all idle means nobody can answer with work
                if (terminated()) return false;
                serve(id);
                backoff();
            }
            if (reply == kWork) {
                open_[id].put_all(box.batch);
                box.batch.clear();
                ++counters_[id].steals;
                return true;
            }
            backoff();
        }
        return false;
    }

    void worker(std::size_t id) {
        std::mt19937_64 rng(config_.seed * 0x9E3779B97F4A7C15ULL + id);
        Scratch s = make_scratch();
        try {
            while (balance(id, rng)) {
                std::size_t work = 0;
                while (work < config_.max_work && open_[id].get(s.record)) {
                    // a deadlock still counts as one unit so the poll interval stays bounded
                    work += std::max<std::size_t>(1, expand(id, s));
                    if (aborted_.load(std::memory_order_relaxed)) return;
                }
                serve(id);
            }
        } catch (const CapacityError& e) {
            fail(std::current_exception(), e.what(), false);
        } catch (...) {
            fail(std::current_exception(), "", true);
        }
    }

    void fail(std::exception_ptr ep, const std::string& reason, bool fatal) {
        std::lock_guard lock(deadlock_mutex_);
        if (!aborted_.exchange(true)) {
            abort_reason_ = reason;
            if (fatal) error_ = ep;
        }
    }

    const Model& model_;
    StateStore& store_;
    TreeDb* tree_;
    const ReachabilityConfig& config_;
    Payload payload_;
    bool incremental_ = false;
    std::size_t k_;
    std::size_t n_;
    std::size_t nodes_ = 0;
    std::size_t width_ = 0;
    std::vector<OpenSet> open_;
    std::vector<Mailbox> boxes_;
    std::vector<WorkerCounters> counters_;
    std::atomic<std::size_t> idle_{0};
    std::atomic<bool> aborted_{false};
    std::mutex deadlock_mutex_;
    std::optional<StateVector> first_deadlock_;
    std::string abort_reason_;
    std::exception_ptr error_;
    std::uint64_t initial_new_ = 0;
};

}  // namespace

ExplorationReport explore(const Model& model, StateStore& store, const ReachabilityConfig& config) {
    if (config.workers == 0) throw ConfigError("need at least one worker");
    if (config.max_work == 0) throw ConfigError("work chunk size must be positive");
    if (model.k() != store.k()) {
        throw ConfigError("model has k=" + std::to_string(model.k()) + " but the store expects k=" +
                          std::to_string(store.k()));
    }
    if (config.workers > 1 && !store.thread_safe()) {
        throw ConfigError("store '" + to_string(store.kind()) + "' is sequential and needs --workers 1");
    }
    const Payload payload = config.payload.value_or(default_payload(store.kind()));
    if (payload == Payload::ref && !store.supports_get()) {
        throw ConfigError("store '" + to_string(store.kind()) + "' cannot serve reference payloads");
    }
    if (payload == Payload::reftree) {
        auto* tree = dynamic_cast<TreeDb*>(&store);
        if (tree == nullptr || tree->mode() != TreeMode::incremental) {
            throw ConfigError("reference-tree payloads need the tree-incremental store");
        }
    }
    return Exploration(model, store, config, payload).run();
}

}  // namespace treedb
