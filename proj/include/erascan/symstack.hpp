// Copyright 2026 The erascan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <erascan/common.hpp>
#include <erascan/evm_isa.hpp>

namespace erascan::sym {

inline constexpr std::size_t kMaxStackDepth = 1024;

/// A stack item: a concrete 256-bit value or an opaque symbol naming where it came from.
class Word {
  public:
    Word() = default;

    static Word concrete(u256 value) { return Word(std::move(value)); }
    static Word symbolic(std::string origin) { return Word(Symbol{std::move(origin)}); }

    [[nodiscard]] bool is_concrete() const noexcept { return std::holds_alternative<u256>(value_); }
    [[nodiscard]] const u256& value() const { return std::get<u256>(value_); }
    [[nodiscard]] const std::string& origin() const { return std::get<Symbol>(value_).origin; }

    bool operator==(const Word&) const = default;

  private:
    struct Symbol {
        std::string origin;
        bool operator==(const Symbol&) const = default;
    };

    explicit Word(u256 v) : value_(std::move(v)) {}
    explicit Word(Symbol s) : value_(std::move(s)) {}

    std::variant<u256, Symbol> value_{u256{0}};
};

struct SymbolicState {
    // Top of stack is the back of the vector; use peek() for top-relative access.
    std::vector<Word> stack;
    std::uint32_t pc = 0;
    std::size_t steps = 0;
    std::size_t path_id = 0;

    /// Index 0 is the top item, index 1 the item below it.
    [[nodiscard]] const Word& peek(std::size_t index) const { return stack[stack.size() - 1 - index]; }
    [[nodiscard]] std::size_t depth() const noexcept { return stack.size(); }
};

struct DepthOutcome {
    enum class Kind { Ok, Underflow, Overflow };

    Kind kind = Kind::Ok;
    std::size_t final_depth = 0;   // meaningful for Ok
    std::uint32_t offset = 0;      // first offending instruction otherwise

    static DepthOutcome ok(std::size_t depth) { return {Kind::Ok, depth, 0}; }
    static DepthOutcome underflow(std::uint32_t at) { return {Kind::Underflow, 0, at}; }
    static DepthOutcome overflow(std::uint32_t at) { return {Kind::Overflow, 0, at}; }

    bool operator==(const DepthOutcome&) const = default;
};

std::string_view to_string(DepthOutcome::Kind kind) noexcept;

/// Depth-only execution of a straight-line block starting from an empty stack.
/// Unknown opcodes are skipped.
DepthOutcome simulate_depth(const evm::BasicBlock& block);

struct CallEvent {
    std::uint8_t call_opcode = 0;     // CALL, CALLCODE, DELEGATECALL or STATICCALL
    std::optional<Address> target;   // nullopt when the operand is symbolic
    std::uint32_t at_offset = 0;
    std::size_t path_id = 0;
};

/// Concrete address operand of BALANCE, EXTCODESIZE or EXTCODECOPY.
struct ProbeEvent {
    std::uint8_t opcode = 0;
    Address target;
    std::uint32_t at_offset = 0;
    std::size_t path_id = 0;
};

struct ExecBudget {
    std::size_t max_paths = 256;
    std::size_t max_steps = 4096;  // per path
    std::chrono::milliseconds time_limit{5000};
    unsigned max_revisits = 2;     // entries into the same jump target per path
};

struct SymExecResult {
    std::vector<CallEvent> calls;
    std::vector<ProbeEvent> probes;
    bool terminated_normally = true;
    std::size_t paths_explored = 0;
    std::size_t total_steps = 0;
    std::size_t loop_cutoffs = 0;
};

/// Explores paths from offset 0, forking at every JUMPI. Events are
/// deduplicated by (opcode, target, offset).
SymExecResult sym_exec(ByteView code, const ExecBudget& budget = {}, evm::Fork fork = evm::kDefaultFork);

bool contains_call_opcode(ByteView code, evm::Fork fork = evm::kDefaultFork);

/// Decoded code with an offset index and the set of valid jump destinations.
class Program {
  public:
    explicit Program(ByteView code, evm::Fork fork = evm::kDefaultFork);

    /// Instruction starting at `offset`, or nullptr inside immediates / past the end.
    [[nodiscard]] const evm::Instruction* at(std::uint32_t offset) const noexcept;
    [[nodiscard]] bool is_jumpdest(const u256& offset) const noexcept;
    [[nodiscard]] std::size_t code_size() const noexcept { return code_size_; }

  private:
    std::vector<evm::Instruction> instructions_;
    std::vector<std::int32_t> index_of_offset_;
    std::size_t code_size_ = 0;
};

enum class StepStatus {
    Continue,
    Branch,          // JUMPI with a valid concrete target; pc set to fall-through
    Halted,          // STOP, RETURN, REVERT, SELFDESTRUCT
    Underflow,
    Overflow,
    BadInstruction,
    BadJump,
    SymbolicJump,
    CodeEnd,
};

std::string_view to_string(StepStatus status) noexcept;

struct StepResult {
    StepStatus status = StepStatus::Continue;
    std::uint32_t branch_target = 0;  // for Branch, and for a taken JUMP
    bool jumped = false;
};

/// Receives the events emitted while stepping.
struct EventSink {
    std::vector<CallEvent> calls;
    std::vector<ProbeEvent> probes;
};

/// Executes the instruction at state.pc.
StepResult step(const Program& program, SymbolicState& state, EventSink& sink);

struct PathOutcome {
    SymbolicState state;
    StepStatus halt = StepStatus::CodeEnd;
    EventSink events;
};

/// Follows a single path, taking the fall-through side of every JUMPI.
PathOutcome run_single_path(ByteView code, std::size_t max_steps, evm::Fork fork = evm::kDefaultFork);

}  // namespace erascan::sym
