#include <doctest.h>

#include <map>
#include <set>
#include <thread>

#include "oracle.hpp"
#include "treedb/analytics.hpp"
#include "treedb/basic_tree_db.hpp"
#include "treedb/collapse_db.hpp"
#include "treedb/errors.hpp"
#include "treedb/tree_db.hpp"
#include "treedb/tuple_table.hpp"
#include "treedb/vector_table.hpp"

using namespace treedb;

namespace {

template <class Store>
void insert_all(Store& db, const Model& m) {
    for (const auto& v : m.initial_states()) db.find_or_put(v);
}

// Differential check against std::map: verdicts, references and read-back.
void check_set_semantics(StateStore& db, const std::vector<StateVector>& vs) {
    std::map<StateVector, Ref> ref;
    bool ok = true;
    for (const auto& v : vs) {
        auto r = db.find_or_put(v);
        auto [it, fresh] = ref.emplace(v, r.ref);
        ok &= r.seen != fresh;
        ok &= it->second == r.ref;
    }
    CHECK(ok);
    CHECK(db.size() == ref.size());
    std::set<Ref> roots;
    for (const auto& [v, r] : ref) {
        ok &= db.get(r) == v;
        roots.insert(r);
    }
    CHECK(ok);
    CHECK(roots.size() == ref.size());
    CHECK(db.stats().n == ref.size());
}

}  // namespace

TEST_CASE("tuple table grows with stable indices") {
    TupleTable t(3);
    std::vector<Ref> refs;
    for (Slot i = 0; i < 5000; ++i) {
        auto r = t.find_or_put(std::vector<Slot>{i, i * 2, i * 3});
        CHECK(r.ref == i);
        CHECK_FALSE(r.seen);
        refs.push_back(r.ref);
    }
    for (Slot i = 0; i < 5000; ++i) {
        auto r = t.find_or_put(std::vector<Slot>{i, i * 2, i * 3});
        CHECK(r.seen);
        CHECK(r.ref == i);
        CHECK(t.get(i)[2] == i * 3);
    }
    CHECK(t.size() == 5000);
    CHECK(t.index_slots() * 3 >= 5000 * 4);
    CHECK_THROWS_AS(t.get(5000), InvalidReference);
    CHECK_THROWS_AS(t.find_or_put(std::vector<Slot>{1, 2}), ConfigError);

    TupleTable capped(1, kDefaultHashSeed, 4);
    for (Slot i = 0; i < 4; ++i) capped.find_or_put(std::vector<Slot>{i});
    CHECK_THROWS_AS(capped.find_or_put(std::vector<Slot>{9}), CapacityError);
}

TEST_CASE("basic tree: identical slots hit the worst case exactly") {
    for (std::int64_t k : {2, 4, 8, 16}) {
        BasicTreeDb db(static_cast<std::size_t>(k));
        auto m = generate_synthetic({SyntheticKind::identical_slots, 1000, std::size_t(k), 0, 0, 0});
        insert_all(db, *m);
        const auto s = db.stats();
        CHECK(s.entries_total == analytic::identical_entries(1000, k));
        CHECK(s.entries_total == 1000 * std::uint64_t(k - 1));
        CHECK(s.ratio_exact() == analytic::tree_worst(k));
        CHECK(s.ratio() < 2.0);
    }
    CHECK(analytic::tree_worst(8) == Rational(7, 4));
}

TEST_CASE("basic tree: cross product matches the closed form") {
    for (std::int64_t m : {2, 16, 64}) {
        for (std::int64_t k : {4, 8, 16}) {
            CAPTURE(m);
            CAPTURE(k);
            BasicTreeDb db(static_cast<std::size_t>(k));
            insert_all(db, *generate_synthetic(
                               {SyntheticKind::cross_product, 0, std::size_t(k), std::uint64_t(m), 0, 0}));
            const auto s = db.stats();
            CHECK(s.n == std::uint64_t(m * m));
            CHECK(s.entries_total == analytic::cross_product_entries(std::uint64_t(m), k));
            // independent count: m^2 roots, and (j-1) entries per member of P on each side
            CHECK(s.entries_total == std::uint64_t(m * m + 2 * (k / 2 - 1) * m));
            CHECK(s.ratio_exact() == analytic::tree_cross_product(k, m));
        }
    }
}

TEST_CASE("basic tree: uniform sets fill every level completely") {
    for (auto [r, k] : {std::pair<std::uint64_t, std::int64_t>{4, 4}, {4, 8}, {2, 16}, {3, 8}}) {
        BasicTreeDb db(static_cast<std::size_t>(k));
        insert_all(db, *generate_synthetic({SyntheticKind::uniform_slots, 0, std::size_t(k), 0, r, 0}));
        const auto s = db.stats();
        const auto expect = analytic::uniform_level_entries(r, k);
        REQUIRE(s.entries_per_part.size() == expect.size());
        for (std::size_t l = 0; l < expect.size(); ++l) CHECK(s.entries_per_part[l] == expect[l]);
        CHECK(s.ratio_exact() == analytic::uniform_ratio(r, k));
        const auto opt = analytic::optimal_level_entries(double(s.n), k);
        for (std::size_t l = 0; l < expect.size(); ++l) CHECK(opt[l] == doctest::Approx(double(expect[l])));
    }
}

TEST_CASE("basic tree: four vectors sharing subtrees") {
    // v2 changes a slot of the first quarter, v3 one of the last, v4 combines
    // v2's left half with v3's right half
    const StateVector v1{1, 2, 3, 4, 5, 6, 7, 8};
    StateVector v2 = v1;
    v2[0] = 9;
    StateVector v3 = v1;
    v3[7] = 9;
    StateVector v4{9, 2, 3, 4, 5, 6, 7, 9};
    BasicTreeDb db(8);
    std::vector<std::uint64_t> cost;
    std::uint64_t before = 0;
    for (const auto& v : {v1, v2, v3, v4}) {
        db.find_or_put(v);
        const auto s = db.stats();
        cost.push_back(s.words_compressed - before);
        before = s.words_compressed;
    }
    CHECK(cost == std::vector<std::uint64_t>{14, 6, 6, 2});
    const auto s = db.stats();
    CHECK(s.entries_total == 14);
    CHECK(s.words_compressed == 28);
    CHECK(s.words_plain() == 32);
    CHECK(s.ratio_exact() == Rational(7, 8));
}

TEST_CASE("basic tree stores the stable-index overhead") {
    BasicTreeDb db(4);
    insert_all(db, *generate_synthetic({SyntheticKind::uniform_slots, 0, 4, 0, 3, 0}));
    const auto s = db.stats();
    CHECK(s.overhead_words == s.entries_total);
    CHECK(s.bytes_actual >= s.entries_total * 12);
}

TEST_CASE("basic tree set semantics") {
    for (std::size_t k : {1, 2, 3, 7}) {
        BasicTreeDb db(k);
        check_set_semantics(db, oracle::random_vectors(20000, k, 5, k));
    }
    BasicTreeDb db(4);
    check_set_semantics(db, oracle::universe(4, 4));
}

TEST_CASE("collapse tables for common layouts") {
    CollapseDb even(balanced_layout(8, 2));
    CHECK(even.block_tables().size() == 2);
    CHECK(even.block_tables()[0].width() == 4);
    CHECK(even.root_table().width() == 2);

    CollapseDb one(balanced_layout(8, 1));
    CHECK(one.block_tables().size() == 1);
    CHECK(one.root_table().width() == 1);

    // X(a,b,c,d) || Y(p,q) || Z(u,v)
    CollapseDb xyz(ProcessLayout{{"X", 0, 4}, {"Y", 4, 2}, {"Z", 6, 2}});
    REQUIRE(xyz.block_tables().size() == 3);
    CHECK(xyz.block_tables()[0].width() == 4);
    CHECK(xyz.block_tables()[1].width() == 2);
    CHECK(xyz.block_tables()[2].width() == 2);

    CHECK_THROWS_AS(CollapseDb(ProcessLayout{}), ConfigError);
    CHECK_THROWS_AS(CollapseDb(ProcessLayout{{"a", 0, 2}, {"b", 3, 2}}), ConfigError);
}

TEST_CASE("collapse shares unchanged blocks") {
    CollapseDb db(ProcessLayout{{"X", 0, 4}, {"Y", 4, 2}, {"Z", 6, 2}});
    db.find_or_put(StateVector{1, 2, 3, 4, 5, 6, 7, 8});
    db.find_or_put(StateVector{0, 2, 3, 4, 5, 6, 7, 8});
    const auto s = db.stats();
    CHECK(s.entries_per_part == std::vector<std::uint64_t>{2, 1, 1});
    CHECK(s.root_entries == 2);
    CHECK(s.words_compressed == 2 * 4 + 2 + 2 + 2 * 3);
}

TEST_CASE("collapse worst case is 1 + p/k") {
    for (auto [p, k] : {std::pair<std::size_t, std::size_t>{2, 8}, {4, 8}, {3, 12}, {1, 4}}) {
        auto m = generate_synthetic({SyntheticKind::identical_slots, 2000, k, 0, 0, p});
        CollapseDb db(m->process_layout());
        insert_all(db, *m);
        CHECK(db.stats().ratio_exact() == analytic::collapse_worst(std::int64_t(p), std::int64_t(k)));
    }
}

TEST_CASE("collapse symmetric blocks follow the per-block formula") {
    for (auto [m, k] : {std::pair<std::uint64_t, std::size_t>{16, 8}, {256, 8}, {100, 16}}) {
        auto model = generate_synthetic({SyntheticKind::cross_product, 0, k, m, 0, 0});
        CollapseDb db(model->process_layout());
        insert_all(db, *model);
        const auto s = db.stats();
        CHECK(s.ratio_exact() == analytic::collapse_symmetric(2, std::int64_t(k / 2), std::int64_t(m)));
        // independent count: two blocks of m entries each, two words per root
        CHECK(s.words_compressed == 2 * m * m + 2 * m * (k / 2));
    }
    // p/k is the limit
    const auto big = analytic::collapse_symmetric(2, 4, 1000).value();
    CHECK(big == doctest::Approx(0.25).epsilon(0.01));
    CHECK(analytic::collapse_symmetric_shared(2, 4, 1000) < analytic::collapse_symmetric(2, 4, 1000));
}

TEST_CASE("collapse set semantics") {
    CollapseDb db(balanced_layout(6, 3));
    check_set_semantics(db, oracle::random_vectors(20000, 6, 4, 3));
}

TEST_CASE("hashtable store") {
    VectorTable t(5, TableConfig::with_bits(16));
    check_set_semantics(t, oracle::random_vectors(20000, 5, 6, 21));
    const auto s = t.stats();
    CHECK(s.ratio_exact() == Rational(1));
    CHECK_THROWS_AS(VectorTable(3, TableConfig::with_bits(2)), ConfigError);

    VectorTable tiny(2, TableConfig::with_bits(4));
    CHECK_THROWS_AS(
        [&] {
            for (Slot i = 0; i < 100; ++i) tiny.find_or_put(StateVector{i, i});
        }(),
        CapacityError);
}

TEST_CASE("hashtable store under concurrent inserts") {
    VectorTable t(4, TableConfig::with_bits(17));
    const auto vs = oracle::random_vectors(50000, 4, 12, 9);
    std::set<StateVector> distinct(vs.begin(), vs.end());
    std::atomic<std::uint64_t> fresh{0};
    std::vector<std::thread> ts;
    for (unsigned id = 0; id < 8; ++id) {
        ts.emplace_back([&, id] {
            for (std::size_t j = id; j < vs.size() + id; ++j) {
                if (!t.find_or_put(vs[j % vs.size()]).seen) fresh.fetch_add(1);
            }
        });
    }
    for (auto& th : ts) th.join();
    CHECK(fresh.load() == distinct.size());
    CHECK(t.size() == distinct.size());
}

TEST_CASE("store factory") {
    StoreConfig cfg;
    cfg.table = TableConfig::with_bits(12);
    for (auto kind : {StoreKind::hashtable, StoreKind::tree, StoreKind::tree_basic,
                      StoreKind::tree_incremental, StoreKind::collapse}) {
        cfg.kind = kind;
        cfg.layout = balanced_layout(4, 2);
        auto s = make_store(4, cfg);
        CHECK(s->kind() == kind);
        CHECK(s->k() == 4);
        CHECK(parse_store_kind(to_string(kind)) == kind);
        CHECK(s->thread_safe() == (kind != StoreKind::tree_basic && kind != StoreKind::collapse));
    }
    CHECK_THROWS_AS(parse_store_kind("btree"), ConfigError);
}

TEST_CASE("merged tree compresses at least as well as the basic tree") {
    for (const auto& spec : {SyntheticSpec{SyntheticKind::identical_slots, 1000, 8, 0, 0, 0},
                             SyntheticSpec{SyntheticKind::cross_product, 0, 16, 64, 0, 0},
                             SyntheticSpec{SyntheticKind::uniform_slots, 0, 8, 0, 4, 0}}) {
        auto m = generate_synthetic(spec);
        BasicTreeDb basic(spec.k);
        TreeDb merged(spec.k, TableConfig::with_bits(18));
        insert_all(basic, *m);
        insert_all(merged, *m);
        CHECK(merged.stats().entries_total <= basic.stats().entries_total);
        CHECK(merged.stats().n == basic.stats().n);
    }
}
