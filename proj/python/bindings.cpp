#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "treedb/acceptance.hpp"
#include "treedb/analytics.hpp"
#include "treedb/basic_tree_db.hpp"
#include "treedb/driver.hpp"
#include "treedb/errors.hpp"
#include "treedb/gcm.hpp"
#include "treedb/reachability.hpp"
#include "treedb/tree_db.hpp"

namespace py = pybind11;
using namespace treedb;

namespace {

// Rationals cross over as fractions.Fraction so exact checks stay exact.
py::object fraction(Rational r) {
    return py::module_::import("fractions").attr("Fraction")(r.num, r.den);
}

py::dict stats_dict(const CompressionStats& s) {
    py::dict d;
    d["store"] = s.store;
    d["n"] = s.n;
    d["k"] = s.k;
    d["entries_total"] = s.entries_total;
    d["entries_per_part"] = s.entries_per_part;
    d["part_kind"] = s.part_kind;
    d["root_entries"] = s.root_entries;
    d["words_compressed"] = s.words_compressed;
    d["words_plain"] = s.words_plain();
    d["overhead_words"] = s.overhead_words;
    d["bytes_actual"] = s.bytes_actual;
    d["bytes_allocated"] = s.bytes_allocated;
    d["entry_stride_bytes"] = s.entry_stride_bytes;
    d["ratio"] = fraction(s.ratio_exact());
    return d;
}

py::dict report_dict(const ExplorationReport& r) {
    py::dict d;
    d["states"] = r.states;
    d["transitions"] = r.transitions;
    d["deadlocks"] = r.deadlocks;
    d["initial_states"] = r.initial_states;
    d["valid"] = r.valid;
    d["abort_reason"] = r.abort_reason;
    d["wall_seconds"] = r.wall_seconds;
    d["payload"] = to_string(r.payload);
    d["payload_words"] = r.payload_words;
    d["peak_open_words"] = r.peak_open_words;
    d["first_deadlock"] = r.first_deadlock ? py::cast(*r.first_deadlock) : py::none();
    d["workers"] = r.workers.size();
    return d;
}

TableConfig table_config(unsigned table_bits, unsigned ref_bits) { return TableConfig::with_bits(table_bits, ref_bits); }

ReachabilityConfig reach_config(std::size_t workers, const std::string& order, std::size_t max_work,
                                const std::optional<std::string>& payload, std::uint64_t seed) {
    ReachabilityConfig c;
    c.workers = workers;
    c.order = parse_order(order);
    c.max_work = max_work;
    if (payload) c.payload = parse_payload(*payload);
    c.seed = seed;
    return c;
}

py::dict run(const Model& model, const std::string& store, unsigned table_bits, unsigned ref_bits,
             std::size_t workers, const std::string& order, std::size_t max_work,
             const std::optional<std::string>& payload, std::uint64_t seed) {
    RunOptions o;
    o.store.kind = parse_store_kind(store);
    o.store.table = table_config(table_bits, ref_bits);
    o.reach = reach_config(workers, order, max_work, payload, seed);
    RunResult r;
    {
        py::gil_scoped_release nogil;
        r = run_model(model, o);
    }
    py::dict d;
    d["model"] = r.model;
    d["k"] = r.k;
    d["store"] = to_string(r.store);
    d["order"] = to_string(r.order);
    d["exploration"] = report_dict(r.report);
    d["compression"] = stats_dict(r.stats);
    d["json"] = report_json(r);
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Tree-compressed state storage and parallel reachability";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<CapacityError>(m, "CapacityError", PyExc_RuntimeError);
    py::register_exception<InvalidReference>(m, "InvalidReference", PyExc_IndexError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<ModelError>(m, "ModelError", PyExc_RuntimeError);

    m.def("reserved_value", &reserved_value, py::arg("ref_bits") = 32);

    py::class_<NodeTable>(m, "NodeTable")
        .def(py::init([](unsigned table_bits, unsigned ref_bits) {
                 return std::make_unique<NodeTable>(table_config(table_bits, ref_bits));
             }),
             py::arg("table_bits") = 20, py::arg("ref_bits") = 32)
        .def("find_or_put",
             [](NodeTable& t, Slot l, Slot r) {
                 const FindResult f = t.find_or_put(l, r);
                 return py::make_tuple(f.ref, f.seen);
             })
        .def("get", &NodeTable::get)
        .def("tag_root", &NodeTable::tag_root)
        .def("is_root", &NodeTable::is_root)
        .def_property_readonly("capacity", &NodeTable::capacity)
        .def("__len__", &NodeTable::size)
        .def("dump", [](const NodeTable& t) {
            std::ostringstream out;
            t.dump(out);
            return out.str();
        });

    py::class_<Model, std::shared_ptr<Model>>(m, "Model")
        .def_property_readonly("k", &Model::k)
        .def_property_readonly("name", &Model::name)
        .def_property_readonly("initial_states", &Model::initial_states)
        .def_property_readonly("layout",
                               [](const Model& md) {
                                   py::list out;
                                   for (const auto& b : md.process_layout())
                                       out.append(py::make_tuple(b.name, b.offset, b.length));
                                   return out;
                               })
        .def("successors", [](const Model& md, const StateVector& s) {
            if (s.size() != md.k()) throw ConfigError("state has the wrong length");
            std::vector<Slot> flat;
            const std::size_t count = md.next_state(s, flat);
            std::vector<StateVector> out;
            for (std::size_t i = 0; i < count; ++i)
                out.emplace_back(flat.begin() + i * md.k(), flat.begin() + (i + 1) * md.k());
            return out;
        });

    // ModelPtr holds const models; the bindings only expose const methods.
    auto model_out = [](ModelPtr p) { return std::const_pointer_cast<Model>(std::move(p)); };
    m.def("load_model", [=](const std::string& text, const std::string& name) { return model_out(load_model(text, name)); },
          py::arg("text"), py::arg("name") = "model");
    m.def("load_model_file", [=](const std::filesystem::path& p) { return model_out(load_model_file(p)); });
    m.def("synthetic", [=](const std::string& spec) { return model_out(generate_synthetic(parse_synthetic(spec))); },
          "Builds a synthetic set, e.g. 'identical:n=1000,k=8', 'cross:m=64,k=16', 'uniform:r=4,k=8'.");
    m.def("synthetic_cardinality", [](const std::string& spec) { return synthetic_cardinality(parse_synthetic(spec)); });

    py::class_<StateStore>(m, "StateStore")
        .def_property_readonly("k", &StateStore::k)
        .def_property_readonly("kind", [](const StateStore& s) { return to_string(s.kind()); })
        .def_property_readonly("thread_safe", &StateStore::thread_safe)
        .def("find_or_put",
             [](StateStore& s, const StateVector& v) {
                 const FindResult f = s.find_or_put(v);
                 return py::make_tuple(f.ref, f.seen);
             })
        .def("get",
             [](const StateStore& s, Ref ref) {
                 if (!s.supports_get()) throw ConfigError("store cannot rebuild vectors");
                 return s.get(ref);
             })
        .def("__len__", &StateStore::size)
        .def("stats", [](const StateStore& s) { return stats_dict(s.stats()); });

    m.def(
        "make_store",
        [](std::size_t k, const std::string& kind, unsigned table_bits, unsigned ref_bits) {
            StoreConfig c;
            c.kind = parse_store_kind(kind);
            c.table = table_config(table_bits, ref_bits);
            return make_store(k, c);
        },
        py::arg("k"), py::arg("kind") = "tree", py::arg("table_bits") = 20, py::arg("ref_bits") = 32,
        "hashtable | tree | tree-basic | tree-incremental | collapse (balanced halves)");

    py::class_<TreeDb, StateStore>(m, "TreeDb")
        .def(py::init([](std::size_t k, unsigned table_bits, unsigned ref_bits, bool incremental) {
                 return std::make_unique<TreeDb>(k, table_config(table_bits, ref_bits),
                                                 incremental ? TreeMode::incremental : TreeMode::concurrent);
             }),
             py::arg("k"), py::arg("table_bits") = 20, py::arg("ref_bits") = 32, py::arg("incremental") = false)
        .def("insert",
             [](TreeDb& db, const StateVector& v) {
                 ReferenceTree refs;
                 const TreeResult r = db.insert(v, &refs);
                 return py::make_tuple(r.ref, r.seen, refs.refs);
             })
        .def("insert_incremental",
             [](TreeDb& db, const StateVector& v, const StateVector& pred, std::vector<Ref> refs) {
                 ReferenceTree t{std::move(refs)};
                 const TreeResult r = db.insert_incremental(v, pred, t);
                 return py::make_tuple(r.ref, r.seen, t.refs, r.accesses);
             },
             "Returns (root, seen, updated reference tree, table accesses).")
        .def("bootstrap",
             [](const TreeDb& db) {
                 auto [v, t] = db.bootstrap();
                 return py::make_tuple(v, t.refs);
             })
        .def("table", py::overload_cast<>(&TreeDb::table), py::return_value_policy::reference_internal)
        .def("set_table_verdict_for_testing", &TreeDb::set_table_verdict_for_testing);

    m.def(
        "explore",
        [](const Model& model, StateStore& store, std::size_t workers, const std::string& order,
           std::size_t max_work, const std::optional<std::string>& payload, std::uint64_t seed) {
            const ReachabilityConfig c = reach_config(workers, order, max_work, payload, seed);
            ExplorationReport r;
            {
                py::gil_scoped_release nogil;
                r = explore(model, store, c);
            }
            return report_dict(r);
        },
        py::arg("model"), py::arg("store"), py::arg("workers") = 1, py::arg("order") = "stack",
        py::arg("max_work") = 100, py::arg("payload") = py::none(), py::arg("seed") = 1);

    m.def("run", &run, py::arg("model"), py::arg("store") = "tree", py::arg("table_bits") = 20,
          py::arg("ref_bits") = 32, py::arg("workers") = 1, py::arg("order") = "stack", py::arg("max_work") = 100,
          py::arg("payload") = py::none(), py::arg("seed") = 1,
          "Builds a store for the model, explores it and returns the report (dict, plus its JSON text).");

    auto a = m.def_submodule("analytic", "Closed-form compression ratios");
    a.def("tree_worst", [](std::int64_t k) { return fraction(analytic::tree_worst(k)); });
    a.def("tree_best", [](std::int64_t k) { return fraction(analytic::tree_best(k)); });
    a.def("tree_cross_product", [](std::int64_t k, std::int64_t mm) { return fraction(analytic::tree_cross_product(k, mm)); });
    a.def("collapse_best", [](std::int64_t p, std::int64_t k) { return fraction(analytic::collapse_best(p, k)); });
    a.def("collapse_worst", [](std::int64_t p, std::int64_t k) { return fraction(analytic::collapse_worst(p, k)); });
    a.def("collapse_symmetric", [](std::int64_t p, std::int64_t mm, std::int64_t s) {
        return fraction(analytic::collapse_symmetric(p, mm, s));
    });
    a.def("uniform_ratio", [](std::uint64_t r, std::int64_t k) { return fraction(analytic::uniform_ratio(r, k)); });
    a.def("optimal_level_entries", &analytic::optimal_level_entries);

    m.def(
        "run_acceptance",
        [](const std::string& models_dir, unsigned table_bits, const std::set<int>& only, bool mutate_tag,
           std::uint64_t seed) {
            AcceptanceOptions o;
            o.models_dir = models_dir;
            o.table_bits = table_bits;
            o.only = only;
            o.mutate_tag = mutate_tag;
            o.seed = seed;
            std::vector<CriterionResult> results;
            {
                py::gil_scoped_release nogil;
                results = run_acceptance(o);
            }
            py::list out;
            for (const auto& r : results) {
                py::dict d;
                d["id"] = r.id;
                d["name"] = r.name;
                d["passed"] = r.passed;
                d["gating"] = r.gating;
                d["measured"] = r.measured;
                d["expected"] = r.expected;
                d["line"] = format_result(r);
                out.append(d);
            }
            return out;
        },
        py::arg("models_dir") = "", py::arg("table_bits") = 20, py::arg("only") = std::set<int>{},
        py::arg("mutate_tag") = false, py::arg("seed") = 1);
}
