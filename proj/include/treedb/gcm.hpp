#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "treedb/model.hpp"

namespace treedb {

/// Guarded-command model.
///
///     // comment
///     var turn : 0..1 = 0;
///     process P0 {
///       var pc0 : 0..2 = 0;
///       cmd pc0 == 0 && turn == 0 -> pc0 := 1, turn := 1;
///     }
///     init turn = 1;
///
/// Slots follow declaration order. Every process is one block of the process
/// layout; globals declared between processes form their own blocks. Each
/// `init` line lists overrides of the declared defaults and adds one initial
/// state; without any `init` line the defaults form the single initial state.
/// Assignments of one command are simultaneous.
class GuardedCommandModel final : public Model {
public:
    struct Variable {
        std::string name;
        std::int64_t low = 0;
        std::int64_t high = 0;
    };

    /// Postfix program evaluated on a small value stack.
    struct Expr {
        enum class Op : std::uint8_t {
            constant, variable, add, sub, mul, neg, lt, le, gt, ge, eq, ne, land, lor, lnot
        };
        struct Instr {
            Op op;
            std::int64_t arg = 0;
        };
        std::vector<Instr> code;
        std::int64_t eval(StateView state) const;
    };

    struct Assignment {
        std::size_t target = 0;
        Expr value;
    };

    struct Command {
        Expr guard;
        std::vector<Assignment> updates;
        int line = 0;
    };

    GuardedCommandModel(std::string name, std::vector<Variable> vars, std::vector<Command> commands,
                        std::vector<StateVector> initial, ProcessLayout layout);

    std::size_t next_state(StateView state, std::vector<Slot>& out) const override;

    const std::vector<Variable>& variables() const noexcept { return vars_; }
    const std::vector<Command>& commands() const noexcept { return commands_; }

private:
    std::vector<Variable> vars_;
    std::vector<Command> commands_;
};

/// Parses model text; throws ParseError with line/column on malformed input.
ModelPtr load_model(std::string_view text, std::string name = "model");

ModelPtr load_model_file(const std::filesystem::path& path);

}  // namespace treedb
