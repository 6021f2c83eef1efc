// Copyright 2026 The erascan Authors
// SPDX-License-Identifier: Apache-2.0

#include "fixtures.hpp"

#include <stdexcept>

#include <erascan/evm_isa.hpp>

namespace erascan::testing {

namespace op = evm::op;

CodeBuilder& CodeBuilder::op(std::uint8_t opcode) {
    code_.push_back(opcode);
    return *this;
}

CodeBuilder& CodeBuilder::ops(std::initializer_list<std::uint8_t> opcodes) {
    code_.insert(code_.end(), opcodes.begin(), opcodes.end());
    return *this;
}

CodeBuilder& CodeBuilder::push(const u256& value) {
    std::size_t width = 1;
    for (u256 v = value >> 8; v != 0; v >>= 8) ++width;
    return push_n(value, width);
}

CodeBuilder& CodeBuilder::push_n(const u256& value, std::size_t width) {
    if (width == 0 || width > 32) throw std::invalid_argument("push width");
    code_.push_back(static_cast<std::uint8_t>(op::PUSH1 + width - 1));
    const auto be = u256_to_be(value);
    code_.insert(code_.end(), be.end() - static_cast<std::ptrdiff_t>(width), be.end());
    return *this;
}

CodeBuilder& CodeBuilder::push_address(const Address& a) {
    code_.push_back(op::PUSH20);
    code_.insert(code_.end(), a.bytes.begin(), a.bytes.end());
    return *this;
}

CodeBuilder& CodeBuilder::raw(ByteView bytes) {
    code_.insert(code_.end(), bytes.begin(), bytes.end());
    return *this;
}

Address parity_library() { return *Address::parse(kParityLibrary); }

Address make_address(std::uint32_t tag, std::uint64_t index) {
    Address a;
    for (int i = 0; i < 4; ++i) a.bytes[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(tag >> (24 - 8 * i));
    for (int i = 0; i < 8; ++i) a.bytes[static_cast<std::size_t>(12 + i)] = static_cast<std::uint8_t>(index >> (56 - 8 * i));
    a.bytes[4] = 0xee;
    return a;
}

Hash32 make_hash(std::uint32_t tag, std::uint64_t index) {
    Hash32 h;
    for (int i = 0; i < 4; ++i) h.bytes[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(tag >> (24 - 8 * i));
    for (int i = 0; i < 8; ++i) h.bytes[static_cast<std::size_t>(24 + i)] = static_cast<std::uint8_t>(index >> (56 - 8 * i));
    h.bytes[4] = 0x7a;
    return h;
}

namespace examples {

Bytes mc_s() { return CodeBuilder().op(op::STOP).push(0x80).push(0x40).op(op::MSTORE).build(); }

Bytes mc_rs_revert() {
    return CodeBuilder().push(0x80).push(0x40).op(op::MSTORE).push(0).op(op::DUP1).op(op::REVERT).build();
}

Bytes mc_rs_selfdestruct() { return CodeBuilder().op(op::CALLER).op(op::SELFDESTRUCT).build(); }

Bytes stack_error_div() { return CodeBuilder().op(op::DIV).push(0).op(op::MSTORE).op(op::STOP).build(); }

Bytes opcode_error_d9() { return Bytes{0xd9, 0x29}; }

Bytes dos_malicious(std::size_t extcodesize_count) {
    CodeBuilder b;
    b.push(0);
    for (std::size_t i = 0; i < extcodesize_count; ++i) b.op(op::EXTCODESIZE);
    return b.op(op::STOP).build();
}

Bytes parity_wallet() {
    return CodeBuilder()
        .push(0)
        .ops({op::DUP1, op::DUP1, op::DUP1})
        .push_address(parity_library())
        .op(op::GAS)
        .op(op::DELEGATECALL)
        .op(op::POP)
        .op(op::STOP)
        .build();
}

Bytes dispatching_wallet(const Address& target, std::uint32_t selector) {
    CodeBuilder b;
    b.push(0).op(op::CALLDATALOAD).push(0xe0).op(op::SHR).push_n(selector, 4).op(op::EQ);
    const std::size_t dest = b.size() + 4;  // PUSH1 dest, JUMPI, STOP
    b.push_n(dest, 1).op(op::JUMPI).op(op::STOP).op(op::JUMPDEST);
    b.push(0).ops({op::DUP1, op::DUP1, op::DUP1}).push_address(target).op(op::GAS).op(op::DELEGATECALL);
    return b.op(op::POP).op(op::STOP).build();
}

Bytes prober(std::span<const Address> targets) {
    CodeBuilder b;
    for (const auto& t : targets) b.push_address(t).op(op::EXTCODESIZE).op(op::POP);
    return b.op(op::STOP).build();
}

}  // namespace examples

Bytes compiled_code(std::string_view name) {
    for (const auto& c : compiled_contracts()) {
        if (c.name == name) return *from_hex(c.hex);
    }
    throw std::invalid_argument("no compiled contract named " + std::string(name));
}

}  // namespace erascan::testing
