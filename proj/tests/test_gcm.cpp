#include <doctest.h>

#include <filesystem>
#include <set>
#include <string>

#include "oracle.hpp"
#include "treedb/errors.hpp"
#include "treedb/gcm.hpp"

using namespace treedb;

namespace {

const char* kCounter = R"(
    // 4 x 3 grid
    var x : 0..3 = 0;
    var y : 0..2 = 0;
    cmd x < 3 -> x := x + 1;
    cmd y < 2 -> y := y + 1;
)";

// Dining philosophers written out by hand: s_i in {0 thinking, 1 has left, 2 eating}.
std::string philosophers(int p) {
    std::string t;
    for (int i = 0; i < p; ++i) t += "var f" + std::to_string(i) + " : 0..1 = 0;\n";
    for (int i = 0; i < p; ++i) {
        const std::string s = "s" + std::to_string(i);
        const std::string l = "f" + std::to_string(i);
        const std::string r = "f" + std::to_string((i + 1) % p);
        t += "process P" + std::to_string(i) + " {\n  var " + s + " : 0..2 = 0;\n";
        t += "  cmd " + s + " == 0 && " + l + " == 0 -> " + s + " := 1, " + l + " := 1;\n";
        t += "  cmd " + s + " == 1 && " + r + " == 0 -> " + s + " := 2, " + r + " := 1;\n";
        t += "  cmd " + s + " == 2 -> " + s + " := 0, " + l + " := 0, " + r + " := 0;\n}\n";
    }
    return t;
}

// Direct enumeration of the same philosophers system, independent of the parser.
std::set<StateVector> philosophers_oracle(int p) {
    std::set<StateVector> seen;
    std::vector<StateVector> stack;
    StateVector init(2 * p, 0);  // f0..f(p-1), s0..s(p-1)
    seen.insert(init);
    stack.push_back(init);
    while (!stack.empty()) {
        StateVector v = stack.back();
        stack.pop_back();
        for (int i = 0; i < p; ++i) {
            StateVector w = v;
            Slot& s = w[p + i];
            Slot& l = w[i];
            Slot& r = w[(i + 1) % p];
            bool ok = false;
            if (s == 0 && l == 0) { s = 1; l = 1; ok = true; }
            else if (s == 1 && r == 0) { s = 2; r = 1; ok = true; }
            else if (s == 2) { s = 0; l = 0; r = 0; ok = true; }
            if (ok && seen.insert(w).second) stack.push_back(w);
        }
    }
    return seen;
}

}  // namespace

TEST_CASE("counter grid") {
    auto m = load_model(kCounter, "counter");
    CHECK(m->k() == 2);
    REQUIRE(m->initial_states().size() == 1);
    CHECK(m->initial_states()[0] == StateVector{0, 0});
    auto r = oracle::bfs(*m);
    CHECK(r.states.size() == 12);
    CHECK(r.deadlocks == 1);
    CHECK(r.transitions == 3 * 3 + 4 * 2);
    std::vector<Slot> out;
    CHECK(m->next_state(StateVector{3, 2}, out) == 0);
}

TEST_CASE("no enabled command means the initial state deadlocks") {
    auto m = load_model("var x : 0..1 = 0; cmd x == 1 -> x := 0;");
    auto r = oracle::bfs(*m);
    CHECK(r.states.size() == 1);
    CHECK(r.deadlocks == 1);
}

TEST_CASE("philosophers match a direct enumeration") {
    auto m = load_model(philosophers(3), "phil3");
    CHECK(m->k() == 6);
    auto r = oracle::bfs(*m);
    CHECK(r.states == philosophers_oracle(3));
    // forks first, then one block per process
    REQUIRE(m->process_layout().size() == 4);
    CHECK(m->process_layout()[0].name == "globals");
    CHECK(m->process_layout()[1].name == "P0");
}

TEST_CASE("assignments are simultaneous") {
    auto m = load_model("var a : 0..3 = 1; var b : 0..3 = 2; cmd a == 1 -> a := b, b := a;");
    std::vector<Slot> out;
    REQUIRE(m->next_state(StateVector{1, 2}, out) == 1);
    CHECK(out == std::vector<Slot>{2, 1});
}

TEST_CASE("operators and precedence") {
    auto m = load_model(R"(
        var a : 0..100 = 0;
        var b : 0..1 = 0;
        cmd b == 0 && !(a != 0) || false -> a := 2 + 3 * 4 - -1, b := 1;
        cmd b == 1 ∧ a ≥ 15 ∧ ¬(a ≠ 15) → a := (a - 5) * 2;
        cmd b == 1 && a <= 20 && a > 19 -> a := 20 == 20;
    )");
    auto r = oracle::bfs(*m);
    CHECK(r.states == std::set<StateVector>{{0, 0}, {15, 1}, {20, 1}, {1, 1}});
}

TEST_CASE("init lines and defaults") {
    auto m = load_model("var a : 0..3 = 1; var b : 0..3; init a = 2; init b = 3; init a = 2;");
    std::set<StateVector> init(m->initial_states().begin(), m->initial_states().end());
    CHECK(init == std::set<StateVector>{{2, 0}, {1, 3}});
}

TEST_CASE("forward references to later variables") {
    auto m = load_model("process A { var a : 0..1 = 0; cmd a == 0 && b == 0 -> a := 1; }\n"
                        "process B { var b : 0..1 = 0; cmd b == 0 -> b := 1; }");
    CHECK(oracle::bfs(*m).states.size() == 4);
    CHECK(m->process_layout().size() == 2);
}

TEST_CASE("out of domain update is a model error") {
    auto m = load_model("var x : 0..2 = 2;\ncmd true -> x := x + 1;");
    std::vector<Slot> out;
    CHECK_THROWS_AS(m->next_state(StateVector{2}, out), ModelError);
}

TEST_CASE("parse errors carry a position") {
    auto err = [](const char* text) {
        try {
            load_model(text);
        } catch (const ParseError& e) {
            return std::pair{e.line(), e.column()};
        }
        return std::pair{-1, -1};
    };
    CHECK(err("var x : 0..3 = 0;\ncmd y > 0 -> x := 1;").first == 2);
    CHECK(err("var x : 0..3 = 9;").first == 1);
    CHECK(err("var x : 0..3;\nvar x : 0..1;").first == 2);
    CHECK(err("var x : 0..3;\ncmd x > -> x := 1;").first == 2);
    CHECK(err("var x : 0..3; cmd x > 0 -> x := 1").first == 1);
    CHECK(err("var x : 3..1;").first == 1);
    CHECK(err("process P { process Q { } }").first == 1);
    CHECK(err("").first == 1);
    const auto [line, col] = err("var x : 0..3;\n  cmd x @ 1 -> x := 0;");
    CHECK(line == 2);
    CHECK(col == 9);
}

TEST_CASE("deeply nested expressions are rejected, not crashed on") {
    std::string e(200, '(');
    e += "1";
    e += std::string(200, ')');
    std::string text = "var x : 0..1;\ncmd " + e + " -> x := 1;";
    CHECK_THROWS_AS(load_model(text), ParseError);
    std::string sum = "var x : 0..1;\ncmd x == 0 -> x := 0";
    for (int i = 0; i < 500; ++i) sum += " + 0";
    sum += ";";
    CHECK_NOTHROW(load_model(sum));
}

TEST_CASE("every bundled model parses and yields in-domain successors") {
    std::size_t count = 0;
    for (const auto& entry : std::filesystem::directory_iterator(TREEDB_MODELS_DIR)) {
        if (entry.path().extension() != ".gcm") continue;
        ++count;
        CAPTURE(entry.path().string());
        auto m = load_model_file(entry.path());
        CHECK(m->name() == entry.path().stem().string());
        auto r = oracle::bfs(*m);
        CHECK(r.states.size() > 1);
        const auto* g = dynamic_cast<const GuardedCommandModel*>(m.get());
        REQUIRE(g != nullptr);
        for (const auto& s : r.states) {
            REQUIRE(s.size() == m->k());
            for (std::size_t i = 0; i < s.size(); ++i) {
                CHECK(std::int64_t(s[i]) >= g->variables()[i].low);
                CHECK(std::int64_t(s[i]) <= g->variables()[i].high);
            }
        }
        CHECK_NOTHROW(validate_layout(m->process_layout(), m->k()));
    }
    CHECK(count >= 10);
}

TEST_CASE("next_state is deterministic") {
    auto m = load_model(philosophers(4));
    std::vector<Slot> a, b;
    const StateVector s(8, 0);
    m->next_state(s, a);
    m->next_state(s, b);
    CHECK(a == b);
}
