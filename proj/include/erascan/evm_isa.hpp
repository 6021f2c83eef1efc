// Copyright 2026 The erascan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <erascan/common.hpp>

namespace erascan::evm {

/// Hard forks that changed the set of assigned opcodes. Ordered chronologically.
enum class Fork : std::uint8_t {
    Frontier,
    Homestead,
    Byzantium,
    Constantinople,
    Istanbul,
    Berlin,
    London,
    Shanghai,
    Cancun,
};

inline constexpr Fork kDefaultFork = Fork::Istanbul;

std::optional<Fork> parse_fork(std::string_view name);
std::string_view fork_name(Fork fork) noexcept;

namespace op {
inline constexpr std::uint8_t STOP = 0x00;
inline constexpr std::uint8_t ADD = 0x01;
inline constexpr std::uint8_t MUL = 0x02;
inline constexpr std::uint8_t SUB = 0x03;
inline constexpr std::uint8_t DIV = 0x04;
inline constexpr std::uint8_t SDIV = 0x05;
inline constexpr std::uint8_t MOD = 0x06;
inline constexpr std::uint8_t SMOD = 0x07;
inline constexpr std::uint8_t ADDMOD = 0x08;
inline constexpr std::uint8_t MULMOD = 0x09;
inline constexpr std::uint8_t EXP = 0x0a;
inline constexpr std::uint8_t SIGNEXTEND = 0x0b;
inline constexpr std::uint8_t LT = 0x10;
inline constexpr std::uint8_t GT = 0x11;
inline constexpr std::uint8_t SLT = 0x12;
inline constexpr std::uint8_t SGT = 0x13;
inline constexpr std::uint8_t EQ = 0x14;
inline constexpr std::uint8_t ISZERO = 0x15;
inline constexpr std::uint8_t AND = 0x16;
inline constexpr std::uint8_t OR = 0x17;
inline constexpr std::uint8_t XOR = 0x18;
inline constexpr std::uint8_t NOT = 0x19;
inline constexpr std::uint8_t BYTE = 0x1a;
inline constexpr std::uint8_t SHL = 0x1b;
inline constexpr std::uint8_t SHR = 0x1c;
inline constexpr std::uint8_t SAR = 0x1d;
inline constexpr std::uint8_t SHA3 = 0x20;
inline constexpr std::uint8_t ADDRESS = 0x30;
inline constexpr std::uint8_t BALANCE = 0x31;
inline constexpr std::uint8_t ORIGIN = 0x32;
inline constexpr std::uint8_t CALLER = 0x33;
inline constexpr std::uint8_t CALLVALUE = 0x34;
inline constexpr std::uint8_t CALLDATALOAD = 0x35;
inline constexpr std::uint8_t CALLDATASIZE = 0x36;
inline constexpr std::uint8_t CALLDATACOPY = 0x37;
inline constexpr std::uint8_t CODESIZE = 0x38;
inline constexpr std::uint8_t CODECOPY = 0x39;
inline constexpr std::uint8_t GASPRICE = 0x3a;
inline constexpr std::uint8_t EXTCODESIZE = 0x3b;
inline constexpr std::uint8_t EXTCODECOPY = 0x3c;
inline constexpr std::uint8_t RETURNDATASIZE = 0x3d;
inline constexpr std::uint8_t RETURNDATACOPY = 0x3e;
inline constexpr std::uint8_t EXTCODEHASH = 0x3f;
inline constexpr std::uint8_t BLOCKHASH = 0x40;
inline constexpr std::uint8_t COINBASE = 0x41;
inline constexpr std::uint8_t TIMESTAMP = 0x42;
inline constexpr std::uint8_t NUMBER = 0x43;
inline constexpr std::uint8_t DIFFICULTY = 0x44;
inline constexpr std::uint8_t GASLIMIT = 0x45;
inline constexpr std::uint8_t CHAINID = 0x46;
inline constexpr std::uint8_t SELFBALANCE = 0x47;
inline constexpr std::uint8_t BASEFEE = 0x48;
inline constexpr std::uint8_t POP = 0x50;
inline constexpr std::uint8_t MLOAD = 0x51;
inline constexpr std::uint8_t MSTORE = 0x52;
inline constexpr std::uint8_t MSTORE8 = 0x53;
inline constexpr std::uint8_t SLOAD = 0x54;
inline constexpr std::uint8_t SSTORE = 0x55;
inline constexpr std::uint8_t JUMP = 0x56;
inline constexpr std::uint8_t JUMPI = 0x57;
inline constexpr std::uint8_t PC = 0x58;
inline constexpr std::uint8_t MSIZE = 0x59;
inline constexpr std::uint8_t GAS = 0x5a;
inline constexpr std::uint8_t JUMPDEST = 0x5b;
inline constexpr std::uint8_t PUSH0 = 0x5f;
inline constexpr std::uint8_t PUSH1 = 0x60;
inline constexpr std::uint8_t PUSH20 = 0x73;
inline constexpr std::uint8_t PUSH32 = 0x7f;
inline constexpr std::uint8_t DUP1 = 0x80;
inline constexpr std::uint8_t DUP16 = 0x8f;
inline constexpr std::uint8_t SWAP1 = 0x90;
inline constexpr std::uint8_t SWAP16 = 0x9f;
inline constexpr std::uint8_t LOG0 = 0xa0;
inline constexpr std::uint8_t LOG4 = 0xa4;
inline constexpr std::uint8_t CREATE = 0xf0;
inline constexpr std::uint8_t CALL = 0xf1;
inline constexpr std::uint8_t CALLCODE = 0xf2;
inline constexpr std::uint8_t RETURN = 0xf3;
inline constexpr std::uint8_t DELEGATECALL = 0xf4;
inline constexpr std::uint8_t CREATE2 = 0xf5;
inline constexpr std::uint8_t STATICCALL = 0xfa;
inline constexpr std::uint8_t REVERT = 0xfd;
inline constexpr std::uint8_t INVALID = 0xfe;
inline constexpr std::uint8_t SELFDESTRUCT = 0xff;
}  // namespace op

struct OpcodeInfo {
    std::uint8_t byte_value = 0;
    std::string_view mnemonic;
    std::uint8_t pops = 0;
    std::uint8_t pushes = 0;
    std::uint8_t immediate_len = 0;
    bool is_terminator = false;
    bool is_known = false;
};

/// Total over all 256 byte values. Entries live in static storage, so the
/// returned reference stays valid for the program lifetime.
const OpcodeInfo& opcode_info(std::uint8_t byte, Fork fork = kDefaultFork) noexcept;

/// Looks up a known mnemonic ("EXTCODESIZE", "PUSH20", ...), case-sensitive.
std::optional<std::uint8_t> opcode_by_mnemonic(std::string_view mnemonic) noexcept;

inline constexpr bool is_push(std::uint8_t byte) noexcept { return byte >= op::PUSH1 && byte <= op::PUSH32; }

inline constexpr bool is_call_family(std::uint8_t byte) noexcept {
    return byte == op::CALL || byte == op::CALLCODE || byte == op::DELEGATECALL || byte == op::STATICCALL;
}

struct Instruction {
    std::uint32_t offset = 0;
    const OpcodeInfo* opcode = nullptr;
    // Zero-padded when the code ends inside the immediate.
    std::array<std::uint8_t, 32> immediate_data{};

    [[nodiscard]] std::uint8_t byte() const noexcept { return opcode->byte_value; }
    [[nodiscard]] std::span<const std::uint8_t> immediate() const noexcept {
        return {immediate_data.data(), opcode->immediate_len};
    }
    [[nodiscard]] u256 push_value() const { return u256_from_be(immediate()); }
    [[nodiscard]] std::uint32_t size() const noexcept { return 1u + opcode->immediate_len; }
    [[nodiscard]] std::uint32_t next_offset() const noexcept { return offset + size(); }
};

struct BasicBlock {
    std::vector<Instruction> instructions;
    std::uint32_t start_offset = 0;
    bool ends_with_terminator = false;
};

std::vector<Instruction> decode(ByteView code, Fork fork = kDefaultFork);

/// Opcode byte plus immediate for each instruction, including any padding
/// the decoder added past the end of the original code.
Bytes serialize(std::span<const Instruction> instructions);

/// Blocks end only after terminators (or at end of input).
std::vector<BasicBlock> split_blocks(std::span<const Instruction> instructions);

/// Decodes only as far as the first terminator.
std::optional<BasicBlock> first_block(ByteView code, Fork fork = kDefaultFork);

}  // namespace erascan::evm
