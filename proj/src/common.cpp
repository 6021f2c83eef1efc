// Copyright 2026 The erascan Authors
// SPDX-License-Identifier: Apache-2.0

#include <erascan/common.hpp>

#include <algorithm>

namespace erascan {

namespace {

int hex_digit(char c) noexcept {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

std::string_view strip_0x(std::string_view s) noexcept {
    if (s.size() >= 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
        s.remove_prefix(2);
    }
    return s;
}

}  // namespace

std::optional<Bytes> from_hex(std::string_view hex) {
    hex = strip_0x(hex);
    if (hex.size() % 2 != 0) {
        return std::nullopt;
    }
    Bytes out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const int hi = hex_digit(hex[2 * i]);
        const int lo = hex_digit(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) {
            return std::nullopt;
        }
        out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return out;
}

std::string to_hex(ByteView bytes) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 + bytes.size() * 2);
    out += "0x";
    for (auto b : bytes) {
        out += kDigits[b >> 4];
        out += kDigits[b & 0x0f];
    }
    return out;
}

std::optional<u256> parse_quantity(std::string_view text) {
    if (text.empty()) {
        return std::nullopt;
    }
    const bool is_hex = text.size() >= 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X');
    const std::string_view digits = is_hex ? text.substr(2) : text;
    if (digits.empty()) {
        return std::nullopt;
    }
    const unsigned base = is_hex ? 16 : 10;
    // Accumulate in 512 bits so overflow past 2^256 is detectable.
    u512 acc = 0;
    const u512 limit = u512(1) << 256;
    for (char c : digits) {
        const int d = hex_digit(c);
        if (d < 0 || static_cast<unsigned>(d) >= base) {
            return std::nullopt;
        }
        acc = acc * base + static_cast<unsigned>(d);
        if (acc >= limit) {
            return std::nullopt;
        }
    }
    return static_cast<u256>(acc);
}

std::string to_decimal(const u256& value) { return value.str(); }

std::string to_hex_quantity(const u256& value) {
    if (value == 0) {
        return "0x0";
    }
    std::string digits;
    u256 v = value;
    static constexpr char kDigits[] = "0123456789abcdef";
    while (v != 0) {
        digits += kDigits[static_cast<unsigned>(v & 0xf)];
        v >>= 4;
    }
    std::reverse(digits.begin(), digits.end());
    return "0x" + digits;
}

u256 u256_from_be(ByteView bytes) {
    if (bytes.size() > 32) {
        bytes = bytes.subspan(bytes.size() - 32);
    }
    u256 out = 0;
    for (auto b : bytes) {
        out = (out << 8) | b;
    }
    return out;
}

std::array<std::uint8_t, 32> u256_to_be(const u256& value) {
    std::array<std::uint8_t, 32> out{};
    u256 v = value;
    for (int i = 31; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v & 0xff);
        v >>= 8;
    }
    return out;
}

Address address_from_word(const u256& word) {
    const auto be = u256_to_be(word);
    return Address::from_span(ByteView(be).subspan(12));
}

u256 word_from_address(const Address& address) { return u256_from_be(address.bytes); }

}  // namespace erascan
