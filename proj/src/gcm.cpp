#include "treedb/gcm.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "treedb/errors.hpp"

namespace treedb {

using Op = GuardedCommandModel::Expr::Op;

std::int64_t GuardedCommandModel::Expr::eval(StateView state) const {
    std::int64_t stack[64];
    int top = 0;
    for (const auto& in : code) {
        switch (in.op) {
            case Op::constant: stack[top++] = in.arg; break;
            case Op::variable: stack[top++] = state[static_cast<std::size_t>(in.arg)]; break;
            case Op::neg: stack[top - 1] = -stack[top - 1]; break;
            case Op::lnot: stack[top - 1] = stack[top - 1] == 0; break;
            default: {
                const std::int64_t b = stack[--top];
                std::int64_t& a = stack[top - 1];
                switch (in.op) {
                    case Op::add: a = a + b; break;
                    case Op::sub: a = a - b; break;
                    case Op::mul: a = a * b; break;
                    case Op::lt: a = a < b; break;
                    case Op::le: a = a <= b; break;
                    case Op::gt: a = a > b; break;
                    case Op::ge: a = a >= b; break;
                    case Op::eq: a = a == b; break;
                    case Op::ne: a = a != b; break;
                    case Op::land: a = (a != 0) && (b != 0); break;
                    case Op::lor: a = (a != 0) || (b != 0); break;
                    default: break;
                }
            }
        }
    }
    return stack[0];
}

GuardedCommandModel::GuardedCommandModel(std::string name, std::vector<Variable> vars,
                                         std::vector<Command> commands,
                                         std::vector<StateVector> initial, ProcessLayout layout)
    : Model(std::move(name), vars.size(), std::move(initial), std::move(layout)),
      vars_(std::move(vars)),
      commands_(std::move(commands)) {}

std::size_t GuardedCommandModel::next_state(StateView state, std::vector<Slot>& out) const {
    std::size_t produced = 0;
    std::int64_t values[64];
    for (const auto& cmd : commands_) {
        if (cmd.guard.eval(state) == 0) continue;
        const std::size_t n = cmd.updates.size();
        for (std::size_t i = 0; i < n; ++i) values[i] = cmd.updates[i].value.eval(state);
        const std::size_t base = out.size();
        out.insert(out.end(), state.begin(), state.end());
        for (std::size_t i = 0; i < n; ++i) {
            const auto& var = vars_[cmd.updates[i].target];
            if (values[i] < var.low || values[i] > var.high) {
                out.resize(base);
                throw ModelError("command at line " + std::to_string(cmd.line) + " assigns " +
                                 std::to_string(values[i]) + " to '" + var.name + "' outside " +
                                 std::to_string(var.low) + ".." + std::to_string(var.high));
            }
            out[base + cmd.updates[i].target] = static_cast<Slot>(values[i]);
        }
        ++produced;
    }
    return produced;
}

namespace {

enum class Tok {
    end, ident, number, colon, dotdot, assign, define, semi, comma, arrow, lparen, rparen, lbrace,
    rbrace, plus, minus, star, lt, le, gt, ge, eq, ne, land, lor, bang
};

struct Token {
    Tok kind = Tok::end;
    std::string text;
    std::int64_t value = 0;
    int line = 1;
    int column = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space();
            Token t;
            t.line = line_;
            t.column = col_;
            if (pos_ >= src_.size()) {
                out.push_back(t);
                return out;
            }
            const char c = src_[pos_];
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t start = pos_;
                while (pos_ < src_.size() &&
                       (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                    advance(1);
                }
                t.kind = Tok::ident;
                t.text = std::string(src_.substr(start, pos_ - start));
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                std::size_t start = pos_;
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                    advance(1);
                }
                t.kind = Tok::number;
                t.text = std::string(src_.substr(start, pos_ - start));
                if (t.text.size() > 12) throw ParseError("integer literal too large", t.line, t.column);
                t.value = std::stoll(t.text);
            } else {
                t.kind = punct(t);
            }
            out.push_back(std::move(t));
        }
    }

private:
    void advance(std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) {
            // count UTF-8 continuation bytes as part of the previous column
            if ((static_cast<unsigned char>(src_[pos_]) & 0xC0) != 0x80) ++col_;
            if (src_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            }
            ++pos_;
        }
    }

    bool starts(std::string_view s) const { return src_.substr(pos_, s.size()) == s; }

    void skip_space() {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance(1);
            } else if (c == '#' || starts("//")) {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance(1);
            } else {
                return;
            }
        }
    }

    Tok punct(Token& t) {
        struct Spelling {
            std::string_view text;
            Tok kind;
        };
        // longest spellings first
        static constexpr Spelling table[] = {
            {"..", Tok::dotdot}, {":=", Tok::define}, {"->", Tok::arrow}, {"<=", Tok::le},
            {">=", Tok::ge},     {"==", Tok::eq},     {"!=", Tok::ne},    {"&&", Tok::land},
            {"||", Tok::lor},    {"\xE2\x88\xA7", Tok::land},  // ∧
            {"\xE2\x88\xA8", Tok::lor},                          // ∨
            {"\xC2\xAC", Tok::bang},                             // ¬
            {"\xE2\x88\x92", Tok::minus},                        // −
            {"\xE2\x89\xA4", Tok::le},                           // ≤
            {"\xE2\x89\xA5", Tok::ge},                           // ≥
            {"\xE2\x89\xA0", Tok::ne},                           // ≠
            {"\xE2\x86\x92", Tok::arrow},                        // →
            {":", Tok::colon},   {"=", Tok::assign},  {";", Tok::semi},   {",", Tok::comma},
            {"(", Tok::lparen},  {")", Tok::rparen},  {"{", Tok::lbrace}, {"}", Tok::rbrace},
            {"+", Tok::plus},    {"-", Tok::minus},   {"*", Tok::star},   {"<", Tok::lt},
            {">", Tok::gt},      {"!", Tok::bang},
        };
        for (const auto& s : table) {
            if (starts(s.text)) {
                t.text = std::string(s.text);
                advance(s.text.size());
                return s.kind;
            }
        }
        throw ParseError("unexpected character '" + std::string(1, src_[pos_]) + "'", line_, col_);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
public:
    Parser(std::vector<Token> toks, std::string name) : toks_(std::move(toks)), name_(std::move(name)) {}

    ModelPtr run() {
        // declarations may follow their first use, so collect names up front
        for (std::size_t i = 0; i + 1 < toks_.size(); ++i) {
            if (is_keyword(toks_[i], "var") && toks_[i + 1].kind == Tok::ident) {
                known_.emplace(toks_[i + 1].text, known_.size());
            }
        }
        while (peek().kind != Tok::end) {
            const Token& t = peek();
            if (is_keyword(t, "var")) {
                parse_var();
            } else if (is_keyword(t, "cmd")) {
                parse_cmd();
            } else if (is_keyword(t, "init")) {
                parse_init();
            } else if (is_keyword(t, "process")) {
                parse_process();
            } else {
                fail(t, "expected 'var', 'cmd', 'init' or 'process'");
            }
        }
        if (vars_.empty()) fail(peek(), "model declares no variables");

        std::vector<StateVector> initial;
        std::set<StateVector> seen;
        if (inits_.empty()) inits_.emplace_back();
        for (const auto& overrides : inits_) {
            StateVector s(defaults_);
            for (const auto& [idx, value] : overrides) s[idx] = value;
            if (seen.insert(s).second) initial.push_back(std::move(s));
        }

        ProcessLayout layout;
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            if (layout.empty() || owner_[i] != owner_[i - 1]) {
                layout.push_back({owner_[i].empty() ? "globals" : owner_[i], i, 0});
            }
            ++layout.back().length;
        }
        return std::make_shared<GuardedCommandModel>(name_, std::move(vars_), std::move(commands_),
                                                     std::move(initial), std::move(layout));
    }

private:
    using Variable = GuardedCommandModel::Variable;
    using Expr = GuardedCommandModel::Expr;

    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_ == toks_.size() - 1 ? pos_ : pos_++]; }

    [[noreturn]] static void fail(const Token& t, const std::string& msg) {
        throw ParseError(msg + (t.kind == Tok::end ? " at end of input" : " near '" + t.text + "'"),
                         t.line, t.column);
    }

    static bool is_keyword(const Token& t, std::string_view kw) {
        return t.kind == Tok::ident && t.text == kw;
    }

    static bool reserved_word(const std::string& s) {
        return s == "var" || s == "cmd" || s == "init" || s == "process" || s == "true" ||
               s == "false";
    }

    const Token& expect(Tok kind, const char* what) {
        if (peek().kind != kind) fail(peek(), std::string("expected ") + what);
        return next();
    }

    std::int64_t signed_number() {
        bool negative = false;
        if (peek().kind == Tok::minus) {
            next();
            negative = true;
        }
        const auto& t = expect(Tok::number, "integer");
        return negative ? -t.value : t.value;
    }

    std::size_t variable_index(const Token& t) const {
        auto it = known_.find(t.text);
        if (it == known_.end()) fail(t, "undeclared variable");
        return it->second;
    }

    void parse_var() {
        next();
        const Token& id = expect(Tok::ident, "variable name");
        if (reserved_word(id.text)) fail(id, "keyword used as variable name");
        if (index_.count(id.text)) fail(id, "variable declared twice");
        expect(Tok::colon, "':'");
        const Token& lo_tok = peek();
        const std::int64_t lo = signed_number();
        expect(Tok::dotdot, "'..'");
        const std::int64_t hi = signed_number();
        if (lo < 0 || hi < lo || hi >= std::int64_t{0xFFFFFFFF}) {
            fail(lo_tok, "domain must satisfy 0 <= low <= high < 2^32-1");
        }
        std::int64_t init = lo;
        if (peek().kind == Tok::assign) {
            next();
            const Token& init_tok = peek();
            init = signed_number();
            if (init < lo || init > hi) fail(init_tok, "initial value outside the declared domain");
        }
        expect(Tok::semi, "';'");
        index_.emplace(id.text, vars_.size());
        vars_.push_back({id.text, lo, hi});
        defaults_.push_back(static_cast<Slot>(init));
        owner_.push_back(process_);
    }

    void parse_process() {
        next();
        if (!process_.empty()) fail(peek(), "processes cannot nest");
        const Token& id = expect(Tok::ident, "process name");
        if (!process_names_.insert(id.text).second) fail(id, "process declared twice");
        expect(Tok::lbrace, "'{'");
        process_ = id.text;
        while (peek().kind != Tok::rbrace) {
            if (is_keyword(peek(), "var")) parse_var();
            else if (is_keyword(peek(), "cmd")) parse_cmd();
            else fail(peek(), "expected 'var', 'cmd' or '}' inside process");
        }
        next();
        process_.clear();
    }

    void parse_cmd() {
        const Token& kw = next();
        GuardedCommandModel::Command cmd;
        cmd.line = kw.line;
        const Token& guard_start = peek();
        parse_or(cmd.guard);
        check_depth(cmd.guard, guard_start);
        expect(Tok::arrow, "'->'");
        std::set<std::size_t> targets;
        for (;;) {
            const Token& id = expect(Tok::ident, "assignment target");
            const std::size_t target = variable_index(id);
            if (!targets.insert(target).second) fail(id, "variable assigned twice in one command");
            expect(Tok::define, "':='");
            GuardedCommandModel::Assignment a;
            a.target = target;
            const Token& value_start = peek();
            parse_or(a.value);
            check_depth(a.value, value_start);
            cmd.updates.push_back(std::move(a));
            if (peek().kind != Tok::comma) break;
            next();
        }
        if (cmd.updates.size() > 64) fail(kw, "too many assignments in one command");
        expect(Tok::semi, "';'");
        commands_.push_back(std::move(cmd));
    }

    void parse_init() {
        next();
        std::vector<std::pair<std::size_t, Slot>> overrides;
        if (peek().kind != Tok::semi) {
            for (;;) {
                const Token& id = expect(Tok::ident, "variable name");
                const std::size_t idx = variable_index(id);
                expect(Tok::assign, "'='");
                const Token& val_tok = peek();
                const std::int64_t v = signed_number();
                if (v < vars_[idx].low || v > vars_[idx].high) {
                    fail(val_tok, "initial value outside the declared domain");
                }
                overrides.emplace_back(idx, static_cast<Slot>(v));
                if (peek().kind != Tok::comma) break;
                next();
            }
        }
        expect(Tok::semi, "';'");
        inits_.push_back(std::move(overrides));
    }

    // Expression grammar, lowest precedence first.
    void parse_or(Expr& e) {
        parse_and(e);
        while (peek().kind == Tok::lor) {
            next();
            parse_and(e);
            emit(e, Op::lor);
        }
    }

    void parse_and(Expr& e) {
        parse_cmp(e);
        while (peek().kind == Tok::land) {
            next();
            parse_cmp(e);
            emit(e, Op::land);
        }
    }

    void parse_cmp(Expr& e) {
        parse_add(e);
        std::optional<Op> op;
        switch (peek().kind) {
            case Tok::lt: op = Op::lt; break;
            case Tok::le: op = Op::le; break;
            case Tok::gt: op = Op::gt; break;
            case Tok::ge: op = Op::ge; break;
            case Tok::eq: op = Op::eq; break;
            case Tok::ne: op = Op::ne; break;
            default: break;
        }
        if (op) {
            next();
            parse_add(e);
            emit(e, *op);
        }
    }

    void parse_add(Expr& e) {
        parse_mul(e);
        while (peek().kind == Tok::plus || peek().kind == Tok::minus) {
            const Op op = next().kind == Tok::plus ? Op::add : Op::sub;
            parse_mul(e);
            emit(e, op);
        }
    }

    void parse_mul(Expr& e) {
        parse_unary(e);
        while (peek().kind == Tok::star) {
            next();
            parse_unary(e);
            emit(e, Op::mul);
        }
    }

    void parse_unary(Expr& e) {
        // parentheses and prefix operators recurse; bound the recursion
        if (++nesting_ > kMaxNesting) fail(peek(), "expression nests too deeply");
        struct Leave {
            int& n;
            ~Leave() { --n; }
        } leave{nesting_};
        if (peek().kind == Tok::minus) {
            next();
            parse_unary(e);
            emit(e, Op::neg);
        } else if (peek().kind == Tok::bang) {
            next();
            parse_unary(e);
            emit(e, Op::lnot);
        } else {
            parse_primary(e);
        }
    }

    void parse_primary(Expr& e) {
        const Token& t = peek();
        if (t.kind == Tok::number) {
            next();
            emit(e, Op::constant, t.value);
        } else if (is_keyword(t, "true") || is_keyword(t, "false")) {
            next();
            emit(e, Op::constant, t.text == "true" ? 1 : 0);
        } else if (t.kind == Tok::ident) {
            next();
            emit(e, Op::variable, static_cast<std::int64_t>(variable_index(t)));
        } else if (t.kind == Tok::lparen) {
            next();
            parse_or(e);
            expect(Tok::rparen, "')'");
        } else {
            fail(t, "expected an expression");
        }
    }

    static constexpr int kMaxNesting = 128;
    int nesting_ = 0;

    static void emit(Expr& e, Op op, std::int64_t arg = 0) { e.code.push_back({op, arg}); }

    // The evaluator runs on a fixed stack of 64 values.
    static void check_depth(const Expr& e, const Token& where) {
        int depth = 0;
        for (const auto& in : e.code) {
            if (in.op == Op::constant || in.op == Op::variable) ++depth;
            else if (in.op != Op::neg && in.op != Op::lnot) --depth;
            if (depth > 64) fail(where, "expression nests too deeply");
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::string name_;
    std::string process_;
    std::set<std::string> process_names_;
    std::vector<Variable> vars_;
    std::vector<Slot> defaults_;
    std::vector<std::string> owner_;
    std::unordered_map<std::string, std::size_t> index_;
    std::unordered_map<std::string, std::size_t> known_;
    std::vector<GuardedCommandModel::Command> commands_;
    std::vector<std::vector<std::pair<std::size_t, Slot>>> inits_;
};

}  // namespace

ModelPtr load_model(std::string_view text, std::string name) {
    return Parser(Lexer(text).run(), std::move(name)).run();
}

ModelPtr load_model_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open model file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_model(buf.str(), path.stem().string());
}

}  // namespace treedb
