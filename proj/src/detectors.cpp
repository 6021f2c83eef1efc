// Copyright 2026 The erascan Authors
// SPDX-License-Identifier: Apache-2.0

#include <erascan/detectors.hpp>

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace erascan {

namespace op = evm::op;

namespace {

constexpr std::array<std::string_view, 8> kLabelNames = {
    "MC_S", "MC_RS", "StackError", "OpcodeError", "DoSMalicious", "ParityDependent", "EmptyAccount", "DoSEOA",
};

std::string hex_byte(std::uint8_t b) {
    static constexpr char kDigits[] = "0123456789abcdef";
    return std::string("0x") + kDigits[b >> 4] + kDigits[b & 0xf];
}

}  // namespace

std::string_view to_string(Label label) noexcept { return kLabelNames[static_cast<std::size_t>(label)]; }

std::optional<Label> parse_label(std::string_view name) noexcept {
    for (std::size_t i = 0; i < kLabelNames.size(); ++i) {
        if (kLabelNames[i] == name) return static_cast<Label>(i);
    }
    return std::nullopt;
}

Category category_of(Label label) noexcept {
    switch (label) {
        case Label::MC_S:
        case Label::MC_RS: return Category::MeaninglessContract;
        case Label::StackError:
        case Label::OpcodeError: return Category::StackOpcodeError;
        case Label::DoSMalicious:
        case Label::ParityDependent: return Category::DoSContract;
        case Label::EmptyAccount: return Category::EmptyAccount;
        case Label::DoSEOA: return Category::DoSEOA;
    }
    return Category::DoSContract;
}

std::string_view to_string(Category category) noexcept {
    switch (category) {
        case Category::DoSContract: return "DoS contract";
        case Category::MeaninglessContract: return "Meaningless contract";
        case Category::StackOpcodeError: return "Stack/opcode error contract";
        case Category::EmptyAccount: return "Empty account";
        case Category::DoSEOA: return "DoS EOA";
    }
    return "?";
}

DetectorConfig DetectorConfig::defaults() {
    DetectorConfig c;
    c.removed_contracts.insert(*Address::parse(kParityLibrary));
    for (auto b : {op::EXTCODESIZE, op::EXTCODECOPY, op::BALANCE, op::CALL, op::DELEGATECALL, op::CALLCODE,
                   op::SELFDESTRUCT}) {
        c.dos_ops.set(b);
    }
    return c;
}

void DetectorConfig::validate() const {
    if (dos_op_threshold < 1) throw std::invalid_argument("dos_op_threshold must be >= 1");
    if (exec_budget.max_paths == 0 || exec_budget.max_steps == 0 || exec_budget.time_limit.count() <= 0) {
        throw std::invalid_argument("exec budget limits must be > 0");
    }
}

bool Classification::has(Label l) const noexcept {
    return std::find(labels.begin(), labels.end(), l) != labels.end();
}

bool detect_mc_s(ByteView code) { return !code.empty() && code[0] == op::STOP; }

bool detect_mc_rs(ByteView code, evm::Fork fork) {
    const auto block = evm::first_block(code, fork);
    if (!block) return false;
    return std::any_of(block->instructions.begin(), block->instructions.end(), [](const evm::Instruction& i) {
        return i.opcode->is_known && (i.byte() == op::REVERT || i.byte() == op::SELFDESTRUCT);
    });
}

sym::DepthOutcome first_block_depth(ByteView code, evm::Fork fork) {
    const auto block = evm::first_block(code, fork);
    if (!block) return sym::DepthOutcome::ok(0);
    return sym::simulate_depth(*block);
}

bool detect_stack_error(ByteView code, evm::Fork fork) {
    return first_block_depth(code, fork).kind != sym::DepthOutcome::Kind::Ok;
}

bool detect_opcode_error(ByteView code, evm::Fork fork) {
    const auto block = evm::first_block(code, fork);
    if (!block) return false;
    return std::any_of(block->instructions.begin(), block->instructions.end(),
                       [](const evm::Instruction& i) { return !i.opcode->is_known; });
}

std::optional<std::size_t> single_block_dos_count(ByteView code, const DetectorConfig& config) {
    const auto instructions = evm::decode(code, config.fork);
    if (instructions.empty()) return std::nullopt;
    std::size_t count = 0;
    for (std::size_t i = 0; i < instructions.size(); ++i) {
        const auto& ins = instructions[i];
        if (ins.opcode->is_terminator && i + 1 != instructions.size()) {
            return std::nullopt;
        }
        if (ins.opcode->is_known && config.dos_ops.test(ins.byte())) {
            ++count;
        }
    }
    return count;
}

bool detect_dos_malicious(ByteView code, const DetectorConfig& config) {
    const auto count = single_block_dos_count(code, config);
    return count && *count > config.dos_op_threshold;
}

ParityResult detect_parity_dep(ByteView code, const DetectorConfig& config) {
    ParityResult r;
    if (!sym::contains_call_opcode(code, config.fork)) {
        return r;
    }
    r.ran_symbolic = true;
    const auto exec = sym::sym_exec(code, config.exec_budget, config.fork);
    std::set<Address> hits;
    for (const auto& ev : exec.calls) {
        if (ev.target && config.removed_contracts.contains(*ev.target)) {
            hits.insert(*ev.target);
        }
    }
    r.matched.assign(hits.begin(), hits.end());
    r.hit = !r.matched.empty();
    r.inconclusive = !r.hit && !exec.terminated_normally;
    return r;
}

bool detect_empty_account(const AccountState& state, const AccountHistory& history) {
    if (state.balance != 0 || state.nonce != 0 || !state.code.empty()) return false;
    const TxRef oldest = history.oldest;
    return oldest != nullptr && oldest->is_creation() && oldest->created_address == state.address;
}

namespace {

struct DosEoaFacts {
    bool state_ok = false;
    std::size_t clean_internal_in = 0;
    std::size_t errored_internal_in = 0;
    bool oldest_is_clean_internal = false;
};

DosEoaFacts dos_eoa_facts(const AccountState& state, const AccountHistory& history) {
    DosEoaFacts f;
    f.state_ok = state.balance == 1 && state.nonce == 0 && state.code.empty();
    for (TxRef r : history.internal_in) {
        if (r->error) ++f.errored_internal_in;
        else ++f.clean_internal_in;
    }
    const TxRef oldest = history.oldest;
    f.oldest_is_clean_internal = oldest != nullptr && oldest->kind == TxKind::Internal && !oldest->error &&
                                 (oldest->to == state.address || oldest->created_address == state.address);
    return f;
}

}  // namespace

bool detect_dos_eoa(const AccountState& state, const AccountHistory& history) {
    const DosEoaFacts f = dos_eoa_facts(state, history);
    // Extra errored internal calls are tolerated; the account must have been
    // brought into existence by its single clean internal transfer.
    return f.state_ok && history.external_count() == 0 && history.internal_out.empty() &&
           f.clean_internal_in == 1 && f.oldest_is_clean_internal;
}

Classification classify(const AccountState& state, const AccountHistory& history, const DetectorConfig& config) {
    Classification c;
    c.address = state.address;
    std::set<Label> fired;
    const ByteView code = state.code;

    if (!code.empty()) {
        if (detect_mc_s(code)) {
            fired.insert(Label::MC_S);
            c.evidence[Label::MC_S] = "first byte 0x00 (STOP)";
        }
        if (const auto block = evm::first_block(code, config.fork)) {
            for (const auto& ins : block->instructions) {
                if (!ins.opcode->is_known) {
                    if (!fired.contains(Label::OpcodeError)) {
                        fired.insert(Label::OpcodeError);
                        c.evidence[Label::OpcodeError] = "unknown opcode " + hex_byte(ins.byte()) + " at offset " +
                                                         std::to_string(ins.offset) + " in first block";
                    }
                } else if ((ins.byte() == op::REVERT || ins.byte() == op::SELFDESTRUCT) &&
                           !fired.contains(Label::MC_RS)) {
                    fired.insert(Label::MC_RS);
                    c.evidence[Label::MC_RS] =
                        std::string(ins.opcode->mnemonic) + " at offset " + std::to_string(ins.offset) + " in first block";
                }
            }
            const auto depth = sym::simulate_depth(*block);
            if (depth.kind != sym::DepthOutcome::Kind::Ok) {
                fired.insert(Label::StackError);
                c.evidence[Label::StackError] =
                    std::string(sym::to_string(depth.kind)) + " at offset " + std::to_string(depth.offset);
            }
        }
        if (const auto count = single_block_dos_count(code, config); count && *count > config.dos_op_threshold) {
            fired.insert(Label::DoSMalicious);
            c.evidence[Label::DoSMalicious] = "single basic block with " + std::to_string(*count) +
                                              " resource-heavy operations (threshold " +
                                              std::to_string(config.dos_op_threshold) + ")";
        }
        const ParityResult parity = detect_parity_dep(code, config);
        if (parity.hit) {
            fired.insert(Label::ParityDependent);
            std::ostringstream os;
            os << "calls removed contract";
            for (const auto& a : parity.matched) os << ' ' << a.hex();
            c.evidence[Label::ParityDependent] = os.str();
        } else if (parity.inconclusive) {
            c.evidence[Label::ParityDependent] = "inconclusive: symbolic execution budget exhausted without a hit";
        }
    } else {
        if (detect_empty_account(state, history)) {
            fired.insert(Label::EmptyAccount);
            c.evidence[Label::EmptyAccount] =
                "zero balance, zero nonce, no code; oldest transaction is its creation " + history.oldest->hash.hex();
        }
        if (detect_dos_eoa(state, history)) {
            fired.insert(Label::DoSEOA);
            const DosEoaFacts f = dos_eoa_facts(state, history);
            std::string ev = "1 Wei, zero nonce, no code, no external transactions; created by internal transaction " +
                             history.oldest->hash.hex();
            if (f.errored_internal_in > 0) {
                ev += "; " + std::to_string(f.errored_internal_in) + " errored incoming internal transactions";
            }
            c.evidence[Label::DoSEOA] = ev;
        }
    }

    for (Label l : kLabelPrecedence) {
        if (fired.contains(l)) c.labels.push_back(l);
    }
    if (!c.labels.empty()) c.primary = c.labels.front();
    return c;
}

}  // namespace erascan
