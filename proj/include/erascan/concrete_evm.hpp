// Copyright 2026 The erascan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Minimal concrete interpreter used only as a test oracle. It shares no
// execution code with the symbolic machine: operand counts fall out of each
// opcode's implementation and arithmetic runs on unbounded integers reduced
// modulo 2^256.

#include <cstdint>
#include <map>
#include <string_view>
#include <vector>

#include <erascan/common.hpp>

namespace erascan::oracle {

struct ConcreteEnv {
    Bytes calldata;
    Address caller;
    Address self;
    Wei callvalue = 0;
    std::uint64_t timestamp = 0;
    std::map<Address, Wei> balances;   // absent => 0
    std::map<Address, Bytes> codes;    // absent => empty
    std::uint64_t seed = 0;            // drives values of unmodeled opcodes

    [[nodiscard]] Wei balance_of(const Address& a) const;
    [[nodiscard]] const Bytes& code_of(const Address& a) const;
};

enum class HaltReason {
    Stopped,         // STOP, RETURN, REVERT or SELFDESTRUCT
    Underflow,
    Overflow,
    BadInstruction,
    BadJump,
    CodeEnd,
    StepLimit,
};

std::string_view to_string(HaltReason reason) noexcept;

struct TraceStep {
    std::uint32_t offset = 0;
    std::uint8_t opcode = 0;
    std::size_t depth_after = 0;
};

struct ConcreteCall {
    std::uint8_t opcode = 0;
    Address target;
    std::uint32_t offset = 0;
};

struct Trace {
    std::vector<TraceStep> steps;
    std::vector<ConcreteCall> calls;
    HaltReason halt = HaltReason::CodeEnd;
    std::uint32_t halt_offset = 0;
    std::vector<u256> final_stack;  // top first
};

Trace run_concrete(ByteView code, const ConcreteEnv& env, std::size_t step_limit);

}  // namespace erascan::oracle
