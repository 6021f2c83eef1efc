// Copyright 2026 The erascan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace erascan {

// Fixed-width unsigned integers; arithmetic on these wraps modulo 2^N.
using u256 = boost::multiprecision::uint256_t;
using u512 = boost::multiprecision::uint512_t;

// Amounts of Wei are always exact integers.
using Wei = u256;

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

/// Parses hex text with an optional 0x prefix, case-insensitive.
/// Returns nullopt for odd length or non-hex characters.
std::optional<Bytes> from_hex(std::string_view hex);

/// Lower-case hex with 0x prefix.
std::string to_hex(ByteView bytes);

/// Parses a quantity given either as decimal digits or as 0x-prefixed hex.
/// Returns nullopt on malformed text or values that do not fit in 256 bits.
std::optional<u256> parse_quantity(std::string_view text);

std::string to_decimal(const u256& value);
std::string to_hex_quantity(const u256& value);

/// Big-endian conversion; input longer than 32 bytes keeps the low-order 32.
u256 u256_from_be(ByteView bytes);
std::array<std::uint8_t, 32> u256_to_be(const u256& value);

template <std::size_t N>
struct FixedBytes {
    std::array<std::uint8_t, N> bytes{};

    static constexpr std::size_t size() noexcept { return N; }

    /// Exactly N bytes of hex (0x prefix optional).
    static std::optional<FixedBytes> parse(std::string_view hex) {
        auto raw = from_hex(hex);
        if (!raw || raw->size() != N) {
            return std::nullopt;
        }
        FixedBytes out;
        std::copy(raw->begin(), raw->end(), out.bytes.begin());
        return out;
    }

    static FixedBytes from_span(ByteView raw) {
        FixedBytes out;
        const auto n = std::min(raw.size(), N);
        std::copy(raw.end() - static_cast<std::ptrdiff_t>(n), raw.end(), out.bytes.end() - static_cast<std::ptrdiff_t>(n));
        return out;
    }

    [[nodiscard]] std::string hex() const { return to_hex(bytes); }
    [[nodiscard]] bool is_zero() const noexcept {
        for (auto b : bytes) {
            if (b != 0) return false;
        }
        return true;
    }

    auto operator<=>(const FixedBytes&) const = default;
};

using Address = FixedBytes<20>;
using Hash32 = FixedBytes<32>;

/// Low 160 bits of a word, as the EVM coerces stack values into addresses.
Address address_from_word(const u256& word);
u256 word_from_address(const Address& address);

}  // namespace erascan

template <std::size_t N>
struct std::hash<erascan::FixedBytes<N>> {
    std::size_t operator()(const erascan::FixedBytes<N>& v) const noexcept {
        // FNV-1a
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (auto b : v.bytes) {
            h ^= b;
            h *= 0x100000001b3ULL;
        }
        return static_cast<std::size_t>(h);
    }
};
