// Copyright 2026 The erascan Authors
// SPDX-License-Identifier: Apache-2.0

#include <erascan/symstack.hpp>

#include <set>
#include <tuple>
#include <unordered_map>

namespace erascan::sym {

using evm::Instruction;
using evm::OpcodeInfo;
namespace op = evm::op;

std::string_view to_string(DepthOutcome::Kind kind) noexcept {
    switch (kind) {
        case DepthOutcome::Kind::Ok: return "ok";
        case DepthOutcome::Kind::Underflow: return "underflow";
        case DepthOutcome::Kind::Overflow: return "overflow";
    }
    return "?";
}

std::string_view to_string(StepStatus status) noexcept {
    switch (status) {
        case StepStatus::Continue: return "continue";
        case StepStatus::Branch: return "branch";
        case StepStatus::Halted: return "halted";
        case StepStatus::Underflow: return "underflow";
        case StepStatus::Overflow: return "overflow";
        case StepStatus::BadInstruction: return "bad-instruction";
        case StepStatus::BadJump: return "bad-jump";
        case StepStatus::SymbolicJump: return "symbolic-jump";
        case StepStatus::CodeEnd: return "code-end";
    }
    return "?";
}

DepthOutcome simulate_depth(const evm::BasicBlock& block) {
    std::size_t depth = 0;
    for (const auto& ins : block.instructions) {
        const OpcodeInfo& info = *ins.opcode;
        if (!info.is_known) {
            continue;
        }
        if (info.pops > depth) {
            return DepthOutcome::underflow(ins.offset);
        }
        depth = depth - info.pops + info.pushes;
        if (depth > kMaxStackDepth) {
            return DepthOutcome::overflow(ins.offset);
        }
    }
    return DepthOutcome::ok(depth);
}

namespace {

const u256 kSignBit = u256(1) << 255;
const u256 kMax = ~u256(0);

bool is_negative(const u256& x) { return (x & kSignBit) != 0; }
u256 negate(const u256& x) { return ~x + 1; }
u256 abs_value(const u256& x) { return is_negative(x) ? negate(x) : x; }

u256 wrapping_exp(u256 base, u256 exponent) {
    u256 result = 1;
    while (exponent != 0) {
        if ((exponent & 1) != 0) {
            result *= base;
        }
        base *= base;
        exponent >>= 1;
    }
    return result;
}

u256 sign_extend(const u256& byte_index, const u256& x) {
    if (byte_index >= 31) {
        return x;
    }
    const unsigned bit = static_cast<unsigned>(byte_index) * 8 + 7;
    const u256 mask = (u256(1) << (bit + 1)) - 1;
    return ((x >> bit) & 1) != 0 ? (x | ~mask) : (x & mask);
}

// Folds an arithmetic/bitwise opcode over concrete operands, top of stack first.
std::optional<u256> fold(std::uint8_t opcode, std::span<const u256> a) {
    switch (opcode) {
        case op::ADD: return a[0] + a[1];
        case op::MUL: return a[0] * a[1];
        case op::SUB: return a[0] - a[1];
        case op::DIV: return a[1] == 0 ? u256(0) : a[0] / a[1];
        case op::SDIV: {
            if (a[1] == 0) return u256(0);
            const u256 q = abs_value(a[0]) / abs_value(a[1]);
            return is_negative(a[0]) != is_negative(a[1]) ? negate(q) : q;
        }
        case op::MOD: return a[1] == 0 ? u256(0) : a[0] % a[1];
        case op::SMOD: {
            if (a[1] == 0) return u256(0);
            const u256 r = abs_value(a[0]) % abs_value(a[1]);
            return is_negative(a[0]) ? negate(r) : r;
        }
        case op::ADDMOD:
            return a[2] == 0 ? u256(0) : static_cast<u256>((u512(a[0]) + u512(a[1])) % u512(a[2]));
        case op::MULMOD:
            return a[2] == 0 ? u256(0) : static_cast<u256>((u512(a[0]) * u512(a[1])) % u512(a[2]));
        case op::EXP: return wrapping_exp(a[0], a[1]);
        case op::SIGNEXTEND: return sign_extend(a[0], a[1]);
        case op::LT: return u256(a[0] < a[1] ? 1 : 0);
        case op::GT: return u256(a[0] > a[1] ? 1 : 0);
        case op::SLT: return u256((a[0] ^ kSignBit) < (a[1] ^ kSignBit) ? 1 : 0);
        case op::SGT: return u256((a[0] ^ kSignBit) > (a[1] ^ kSignBit) ? 1 : 0);
        case op::EQ: return u256(a[0] == a[1] ? 1 : 0);
        case op::ISZERO: return u256(a[0] == 0 ? 1 : 0);
        case op::AND: return a[0] & a[1];
        case op::OR: return a[0] | a[1];
        case op::XOR: return a[0] ^ a[1];
        case op::NOT: return ~a[0];
        case op::BYTE:
            return a[0] >= 32 ? u256(0) : (a[1] >> (8 * (31 - static_cast<unsigned>(a[0])))) & 0xff;
        case op::SHL: return a[0] >= 256 ? u256(0) : a[1] << static_cast<unsigned>(a[0]);
        case op::SHR: return a[0] >= 256 ? u256(0) : a[1] >> static_cast<unsigned>(a[0]);
        case op::SAR: {
            const bool neg = is_negative(a[1]);
            if (a[0] >= 256) return neg ? kMax : u256(0);
            const unsigned s = static_cast<unsigned>(a[0]);
            return neg ? ~((~a[1]) >> s) : a[1] >> s;
        }
        default: return std::nullopt;
    }
}

bool is_foldable(std::uint8_t opcode) {
    return (opcode >= op::ADD && opcode <= op::SIGNEXTEND) || (opcode >= op::LT && opcode <= op::SAR);
}

bool is_probe(std::uint8_t opcode) {
    return opcode == op::BALANCE || opcode == op::EXTCODESIZE || opcode == op::EXTCODECOPY;
}

std::string tag(const OpcodeInfo& info, std::uint32_t offset) {
    std::string t(info.mnemonic);
    t += '@';
    t += std::to_string(offset);
    return t;
}

}  // namespace

Program::Program(ByteView code, evm::Fork fork)
    : instructions_(evm::decode(code, fork)), index_of_offset_(code.size(), -1), code_size_(code.size()) {
    for (std::size_t i = 0; i < instructions_.size(); ++i) {
        index_of_offset_[instructions_[i].offset] = static_cast<std::int32_t>(i);
    }
}

const Instruction* Program::at(std::uint32_t offset) const noexcept {
    if (offset >= index_of_offset_.size() || index_of_offset_[offset] < 0) {
        return nullptr;
    }
    return &instructions_[static_cast<std::size_t>(index_of_offset_[offset])];
}

bool Program::is_jumpdest(const u256& offset) const noexcept {
    if (offset >= code_size_) {
        return false;
    }
    const auto* ins = at(static_cast<std::uint32_t>(offset));
    return ins != nullptr && ins->byte() == op::JUMPDEST;
}

StepResult step(const Program& program, SymbolicState& state, EventSink& sink) {
    const Instruction* ins = program.at(state.pc);
    if (ins == nullptr) {
        return {StepStatus::CodeEnd};
    }
    const OpcodeInfo& info = *ins->opcode;
    if (!info.is_known || info.byte_value == op::INVALID) {
        return {StepStatus::BadInstruction};
    }
    auto& st = state.stack;
    if (info.pops > st.size()) {
        return {StepStatus::Underflow};
    }
    if (st.size() - info.pops + info.pushes > kMaxStackDepth) {
        return {StepStatus::Overflow};
    }
    ++state.steps;
    const std::uint8_t b = info.byte_value;
    const std::uint32_t next = ins->next_offset();

    if (evm::is_push(b)) {
        st.push_back(Word::concrete(ins->push_value()));
        state.pc = next;
        return {};
    }
    if (b == op::PUSH0) {
        st.push_back(Word::concrete(0));
        state.pc = next;
        return {};
    }
    if (b >= op::DUP1 && b <= op::DUP16) {
        st.push_back(st[st.size() - (b - op::DUP1 + 1)]);
        state.pc = next;
        return {};
    }
    if (b >= op::SWAP1 && b <= op::SWAP16) {
        std::swap(st.back(), st[st.size() - 1 - (b - op::SWAP1 + 1)]);
        state.pc = next;
        return {};
    }

    // Operands in top-first order.
    std::vector<Word> args;
    args.reserve(info.pops);
    for (unsigned i = 0; i < info.pops; ++i) {
        args.push_back(std::move(st.back()));
        st.pop_back();
    }

    if (is_foldable(b)) {
        bool all_concrete = true;
        std::array<u256, 3> vals{};
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (!args[i].is_concrete()) {
                all_concrete = false;
                break;
            }
            vals[i] = args[i].value();
        }
        if (all_concrete) {
            st.push_back(Word::concrete(*fold(b, std::span<const u256>(vals.data(), args.size()))));
        } else {
            st.push_back(Word::symbolic(tag(info, ins->offset)));
        }
        state.pc = next;
        return {};
    }

    switch (b) {
        case op::STOP:
        case op::RETURN:
        case op::REVERT:
        case op::SELFDESTRUCT:
            return {StepStatus::Halted};
        case op::JUMPDEST:
        case op::POP:
            state.pc = next;
            return {};
        case op::PC:
            st.push_back(Word::concrete(ins->offset));
            state.pc = next;
            return {};
        case op::CODESIZE:
            st.push_back(Word::concrete(program.code_size()));
            state.pc = next;
            return {};
        case op::JUMP: {
            if (!args[0].is_concrete()) return {StepStatus::SymbolicJump};
            if (!program.is_jumpdest(args[0].value())) return {StepStatus::BadJump};
            state.pc = static_cast<std::uint32_t>(args[0].value());
            StepResult r;
            r.branch_target = state.pc;
            r.jumped = true;
            return r;
        }
        case op::JUMPI: {
            // An unusable target only kills the taken side; fall-through continues.
            state.pc = next;
            if (!args[0].is_concrete() || !program.is_jumpdest(args[0].value())) return {};
            return {StepStatus::Branch, static_cast<std::uint32_t>(args[0].value())};
        }
        default:
            break;
    }

    if (evm::is_call_family(b)) {
        CallEvent ev;
        ev.call_opcode = b;
        ev.at_offset = ins->offset;
        ev.path_id = state.path_id;
        if (args[1].is_concrete()) {
            ev.target = address_from_word(args[1].value());
        }
        sink.calls.push_back(ev);
    } else if (is_probe(b) && args[0].is_concrete()) {
        sink.probes.push_back(ProbeEvent{b, address_from_word(args[0].value()), ins->offset, state.path_id});
    }

    // Environment reads, memory, storage, hashing, logs and calls: outputs are symbolic.
    for (unsigned i = 0; i < info.pushes; ++i) {
        st.push_back(Word::symbolic(tag(info, ins->offset)));
    }
    state.pc = next;
    return {};
}

PathOutcome run_single_path(ByteView code, std::size_t max_steps, evm::Fork fork) {
    const Program program(code, fork);
    PathOutcome out;
    while (out.state.steps < max_steps) {
        const StepResult r = step(program, out.state, out.events);
        if (r.status == StepStatus::Continue || r.status == StepStatus::Branch) {
            continue;
        }
        out.halt = r.status;
        return out;
    }
    out.halt = StepStatus::Continue;
    return out;
}

namespace {

struct Path {
    SymbolicState state;
    std::unordered_map<std::uint32_t, unsigned> visits;
};

}  // namespace

SymExecResult sym_exec(ByteView code, const ExecBudget& budget, evm::Fork fork) {
    using Clock = std::chrono::steady_clock;
    const auto deadline = Clock::now() + budget.time_limit;
    const Program program(code, fork);

    SymExecResult result;
    EventSink sink;
    std::vector<Path> worklist;
    worklist.push_back(Path{});
    std::size_t paths_started = 1;
    bool out_of_time = false;

    // Returns false when the path has to stop at this jump target.
    auto enter = [&](Path& p, std::uint32_t target) {
        if (++p.visits[target] > budget.max_revisits) {
            ++result.loop_cutoffs;
            return false;
        }
        return true;
    };

    while (!worklist.empty() && !out_of_time) {
        Path path = std::move(worklist.back());
        worklist.pop_back();
        ++result.paths_explored;

        while (true) {
            if (path.state.steps >= budget.max_steps) {
                result.terminated_normally = false;
                break;
            }
            if ((result.total_steps & 0xff) == 0 && Clock::now() >= deadline) {
                out_of_time = true;
                result.terminated_normally = false;
                break;
            }
            const std::size_t before = path.state.steps;
            const StepResult r = step(program, path.state, sink);
            result.total_steps += path.state.steps - before;

            if (r.status == StepStatus::Continue) {
                if (r.jumped && !enter(path, r.branch_target)) break;
                continue;
            }
            if (r.status == StepStatus::Branch) {
                if (paths_started < budget.max_paths) {
                    Path taken = path;
                    taken.state.pc = r.branch_target;
                    taken.state.path_id = paths_started++;
                    if (enter(taken, r.branch_target)) {
                        worklist.push_back(std::move(taken));
                    }
                } else {
                    result.terminated_normally = false;
                }
                continue;
            }
            // Any other status ends this path.
            break;
        }
    }
    if (!worklist.empty()) {
        result.terminated_normally = false;
    }

    std::set<std::tuple<std::uint8_t, std::optional<Address>, std::uint32_t>> seen;
    for (auto& ev : sink.calls) {
        if (seen.emplace(ev.call_opcode, ev.target, ev.at_offset).second) {
            result.calls.push_back(ev);
        }
    }
    seen.clear();
    for (auto& ev : sink.probes) {
        if (seen.emplace(ev.opcode, ev.target, ev.at_offset).second) {
            result.probes.push_back(ev);
        }
    }
    return result;
}

bool contains_call_opcode(ByteView code, evm::Fork fork) {
    std::size_t pos = 0;
    while (pos < code.size()) {
        const auto& info = evm::opcode_info(code[pos], fork);
        if (info.is_known && evm::is_call_family(info.byte_value)) {
            return true;
        }
        pos += 1u + info.immediate_len;
    }
    return false;
}

}  // namespace erascan::sym
