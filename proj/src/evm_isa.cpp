// Copyright 2026 The erascan Authors
// SPDX-License-Identifier: Apache-2.0

#include <erascan/evm_isa.hpp>

#include <algorithm>
#include <cctype>

namespace erascan::evm {

namespace {

constexpr std::string_view kPushNames[32] = {
    "PUSH1",  "PUSH2",  "PUSH3",  "PUSH4",  "PUSH5",  "PUSH6",  "PUSH7",  "PUSH8",
    "PUSH9",  "PUSH10", "PUSH11", "PUSH12", "PUSH13", "PUSH14", "PUSH15", "PUSH16",
    "PUSH17", "PUSH18", "PUSH19", "PUSH20", "PUSH21", "PUSH22", "PUSH23", "PUSH24",
    "PUSH25", "PUSH26", "PUSH27", "PUSH28", "PUSH29", "PUSH30", "PUSH31", "PUSH32",
};
constexpr std::string_view kDupNames[16] = {
    "DUP1", "DUP2",  "DUP3",  "DUP4",  "DUP5",  "DUP6",  "DUP7",  "DUP8",
    "DUP9", "DUP10", "DUP11", "DUP12", "DUP13", "DUP14", "DUP15", "DUP16",
};
constexpr std::string_view kSwapNames[16] = {
    "SWAP1", "SWAP2",  "SWAP3",  "SWAP4",  "SWAP5",  "SWAP6",  "SWAP7",  "SWAP8",
    "SWAP9", "SWAP10", "SWAP11", "SWAP12", "SWAP13", "SWAP14", "SWAP15", "SWAP16",
};
constexpr std::string_view kLogNames[5] = {"LOG0", "LOG1", "LOG2", "LOG3", "LOG4"};

struct Entry {
    OpcodeInfo info;
    Fork since = Fork::Frontier;
};

using Table = std::array<Entry, 256>;

constexpr void set(Table& t, std::uint8_t b, std::string_view name, std::uint8_t pops, std::uint8_t pushes,
                   Fork since = Fork::Frontier) {
    const bool terminator = b == op::STOP || b == op::JUMP || b == op::JUMPI || b == op::RETURN ||
                            b == op::SELFDESTRUCT || b == op::REVERT;
    t[b] = Entry{OpcodeInfo{b, name, pops, pushes, 0, terminator, true}, since};
}

constexpr Table build_table() {
    Table t{};
    for (unsigned b = 0; b < 256; ++b) {
        t[b].info = OpcodeInfo{static_cast<std::uint8_t>(b), "UNKNOWN", 0, 0, 0, false, false};
    }
    set(t, 0x00, "STOP", 0, 0);
    set(t, 0x01, "ADD", 2, 1);
    set(t, 0x02, "MUL", 2, 1);
    set(t, 0x03, "SUB", 2, 1);
    set(t, 0x04, "DIV", 2, 1);
    set(t, 0x05, "SDIV", 2, 1);
    set(t, 0x06, "MOD", 2, 1);
    set(t, 0x07, "SMOD", 2, 1);
    set(t, 0x08, "ADDMOD", 3, 1);
    set(t, 0x09, "MULMOD", 3, 1);
    set(t, 0x0a, "EXP", 2, 1);
    set(t, 0x0b, "SIGNEXTEND", 2, 1);
    set(t, 0x10, "LT", 2, 1);
    set(t, 0x11, "GT", 2, 1);
    set(t, 0x12, "SLT", 2, 1);
    set(t, 0x13, "SGT", 2, 1);
    set(t, 0x14, "EQ", 2, 1);
    set(t, 0x15, "ISZERO", 1, 1);
    set(t, 0x16, "AND", 2, 1);
    set(t, 0x17, "OR", 2, 1);
    set(t, 0x18, "XOR", 2, 1);
    set(t, 0x19, "NOT", 1, 1);
    set(t, 0x1a, "BYTE", 2, 1);
    set(t, 0x1b, "SHL", 2, 1, Fork::Constantinople);
    set(t, 0x1c, "SHR", 2, 1, Fork::Constantinople);
    set(t, 0x1d, "SAR", 2, 1, Fork::Constantinople);
    set(t, 0x20, "SHA3", 2, 1);
    set(t, 0x30, "ADDRESS", 0, 1);
    set(t, 0x31, "BALANCE", 1, 1);
    set(t, 0x32, "ORIGIN", 0, 1);
    set(t, 0x33, "CALLER", 0, 1);
    set(t, 0x34, "CALLVALUE", 0, 1);
    set(t, 0x35, "CALLDATALOAD", 1, 1);
    set(t, 0x36, "CALLDATASIZE", 0, 1);
    set(t, 0x37, "CALLDATACOPY", 3, 0);
    set(t, 0x38, "CODESIZE", 0, 1);
    set(t, 0x39, "CODECOPY", 3, 0);
    set(t, 0x3a, "GASPRICE", 0, 1);
    set(t, 0x3b, "EXTCODESIZE", 1, 1);
    set(t, 0x3c, "EXTCODECOPY", 4, 0);
    set(t, 0x3d, "RETURNDATASIZE", 0, 1, Fork::Byzantium);
    set(t, 0x3e, "RETURNDATACOPY", 3, 0, Fork::Byzantium);
    set(t, 0x3f, "EXTCODEHASH", 1, 1, Fork::Constantinople);
    set(t, 0x40, "BLOCKHASH", 1, 1);
    set(t, 0x41, "COINBASE", 0, 1);
    set(t, 0x42, "TIMESTAMP", 0, 1);
    set(t, 0x43, "NUMBER", 0, 1);
    set(t, 0x44, "DIFFICULTY", 0, 1);
    set(t, 0x45, "GASLIMIT", 0, 1);
    set(t, 0x46, "CHAINID", 0, 1, Fork::Istanbul);
    set(t, 0x47, "SELFBALANCE", 0, 1, Fork::Istanbul);
    set(t, 0x48, "BASEFEE", 0, 1, Fork::London);
    set(t, 0x49, "BLOBHASH", 1, 1, Fork::Cancun);
    set(t, 0x4a, "BLOBBASEFEE", 0, 1, Fork::Cancun);
    set(t, 0x50, "POP", 1, 0);
    set(t, 0x51, "MLOAD", 1, 1);
    set(t, 0x52, "MSTORE", 2, 0);
    set(t, 0x53, "MSTORE8", 2, 0);
    set(t, 0x54, "SLOAD", 1, 1);
    set(t, 0x55, "SSTORE", 2, 0);
    set(t, 0x56, "JUMP", 1, 0);
    set(t, 0x57, "JUMPI", 2, 0);
    set(t, 0x58, "PC", 0, 1);
    set(t, 0x59, "MSIZE", 0, 1);
    set(t, 0x5a, "GAS", 0, 1);
    set(t, 0x5b, "JUMPDEST", 0, 0);
    set(t, 0x5c, "TLOAD", 1, 1, Fork::Cancun);
    set(t, 0x5d, "TSTORE", 2, 0, Fork::Cancun);
    set(t, 0x5e, "MCOPY", 3, 0, Fork::Cancun);
    set(t, 0x5f, "PUSH0", 0, 1, Fork::Shanghai);
    for (unsigned n = 1; n <= 32; ++n) {
        const auto b = static_cast<std::uint8_t>(0x5f + n);
        set(t, b, kPushNames[n - 1], 0, 1);
        t[b].info.immediate_len = static_cast<std::uint8_t>(n);
    }
    for (unsigned n = 1; n <= 16; ++n) {
        set(t, static_cast<std::uint8_t>(0x7f + n), kDupNames[n - 1], static_cast<std::uint8_t>(n),
            static_cast<std::uint8_t>(n + 1));
        set(t, static_cast<std::uint8_t>(0x8f + n), kSwapNames[n - 1], static_cast<std::uint8_t>(n + 1),
            static_cast<std::uint8_t>(n + 1));
    }
    for (unsigned n = 0; n <= 4; ++n) {
        set(t, static_cast<std::uint8_t>(0xa0 + n), kLogNames[n], static_cast<std::uint8_t>(n + 2), 0);
    }
    set(t, 0xf0, "CREATE", 3, 1);
    set(t, 0xf1, "CALL", 7, 1);
    set(t, 0xf2, "CALLCODE", 7, 1);
    set(t, 0xf3, "RETURN", 2, 0);
    set(t, 0xf4, "DELEGATECALL", 6, 1, Fork::Homestead);
    set(t, 0xf5, "CREATE2", 4, 1, Fork::Constantinople);
    set(t, 0xfa, "STATICCALL", 6, 1, Fork::Byzantium);
    set(t, 0xfd, "REVERT", 2, 0, Fork::Byzantium);
    // Designated invalid instruction: assigned, but always aborts.
    set(t, 0xfe, "INVALID", 0, 0);
    set(t, 0xff, "SELFDESTRUCT", 1, 0);
    return t;
}

constexpr std::array<OpcodeInfo, 256> build_unknown() {
    std::array<OpcodeInfo, 256> u{};
    for (unsigned b = 0; b < 256; ++b) {
        u[b] = OpcodeInfo{static_cast<std::uint8_t>(b), "UNKNOWN", 0, 0, 0, false, false};
    }
    return u;
}

constexpr Table kTable = build_table();
constexpr std::array<OpcodeInfo, 256> kUnknown = build_unknown();

constexpr std::pair<std::string_view, Fork> kForkNames[] = {
    {"frontier", Fork::Frontier},     {"homestead", Fork::Homestead}, {"byzantium", Fork::Byzantium},
    {"constantinople", Fork::Constantinople}, {"istanbul", Fork::Istanbul}, {"berlin", Fork::Berlin},
    {"london", Fork::London},         {"shanghai", Fork::Shanghai},   {"cancun", Fork::Cancun},
};

}  // namespace

std::optional<Fork> parse_fork(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    for (const auto& [n, f] : kForkNames) {
        if (n == lower) return f;
    }
    return std::nullopt;
}

std::string_view fork_name(Fork fork) noexcept {
    for (const auto& [n, f] : kForkNames) {
        if (f == fork) return n;
    }
    return "unknown";
}

const OpcodeInfo& opcode_info(std::uint8_t byte, Fork fork) noexcept {
    const Entry& e = kTable[byte];
    if (e.info.is_known && e.since <= fork) {
        return e.info;
    }
    return kUnknown[byte];
}

std::optional<std::uint8_t> opcode_by_mnemonic(std::string_view mnemonic) noexcept {
    for (const auto& e : kTable) {
        if (e.info.is_known && e.info.mnemonic == mnemonic) {
            return e.info.byte_value;
        }
    }
    return std::nullopt;
}

namespace {

Instruction decode_one(ByteView code, std::size_t pos, Fork fork) {
    Instruction ins;
    ins.offset = static_cast<std::uint32_t>(pos);
    ins.opcode = &opcode_info(code[pos], fork);
    const std::size_t n = ins.opcode->immediate_len;
    const std::size_t available = std::min(n, code.size() - pos - 1);
    std::copy_n(code.begin() + static_cast<std::ptrdiff_t>(pos + 1), available, ins.immediate_data.begin());
    return ins;
}

}  // namespace

std::vector<Instruction> decode(ByteView code, Fork fork) {
    std::vector<Instruction> out;
    out.reserve(code.size());
    std::size_t pos = 0;
    while (pos < code.size()) {
        out.push_back(decode_one(code, pos, fork));
        pos += out.back().size();
    }
    return out;
}

Bytes serialize(std::span<const Instruction> instructions) {
    Bytes out;
    for (const auto& ins : instructions) {
        out.push_back(ins.byte());
        const auto imm = ins.immediate();
        out.insert(out.end(), imm.begin(), imm.end());
    }
    return out;
}

std::vector<BasicBlock> split_blocks(std::span<const Instruction> instructions) {
    std::vector<BasicBlock> blocks;
    BasicBlock current;
    for (const auto& ins : instructions) {
        if (current.instructions.empty()) {
            current.start_offset = ins.offset;
        }
        current.instructions.push_back(ins);
        if (ins.opcode->is_terminator) {
            current.ends_with_terminator = true;
            blocks.push_back(std::move(current));
            current = BasicBlock{};
        }
    }
    if (!current.instructions.empty()) {
        blocks.push_back(std::move(current));
    }
    return blocks;
}

std::optional<BasicBlock> first_block(ByteView code, Fork fork) {
    if (code.empty()) {
        return std::nullopt;
    }
    BasicBlock block;
    std::size_t pos = 0;
    while (pos < code.size()) {
        block.instructions.push_back(decode_one(code, pos, fork));
        const auto& ins = block.instructions.back();
        pos += ins.size();
        if (ins.opcode->is_terminator) {
            block.ends_with_terminator = true;
            break;
        }
    }
    return block;
}

}  // namespace erascan::evm
