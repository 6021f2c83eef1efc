// Copyright 2026 The erascan Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <erascan/common.hpp>

using namespace erascan;

TEST_CASE("hex decoding accepts an optional prefix and either case") {
    CHECK(from_hex("0xDEad") == Bytes{0xde, 0xad});
    CHECK(from_hex("beef") == Bytes{0xbe, 0xef});
    CHECK(from_hex("0x") == Bytes{});
    CHECK_FALSE(from_hex("0xabc").has_value());
    CHECK_FALSE(from_hex("zz").has_value());
    CHECK(to_hex(Bytes{0x00, 0xff}) == "0x00ff");
}

TEST_CASE("quantities parse as decimal or hex and stay below 2^256") {
    CHECK(parse_quantity("0") == u256(0));
    CHECK(parse_quantity("0x1") == u256(1));
    CHECK(parse_quantity("1000000000000000000") == u256(1'000'000'000'000'000'000ULL));
    const std::string max = "0x" + std::string(64, 'f');
    REQUIRE(parse_quantity(max).has_value());
    CHECK(*parse_quantity(max) == ~u256(0));
    CHECK_FALSE(parse_quantity("0x1" + std::string(64, '0')).has_value());
    CHECK_FALSE(parse_quantity("12a").has_value());
    CHECK_FALSE(parse_quantity("").has_value());
    CHECK(to_decimal(u256(12345)) == "12345");
    CHECK(to_hex_quantity(u256(255)) == "0xff");
    CHECK(to_hex_quantity(u256(0)) == "0x0");
}

TEST_CASE("addresses are the low 160 bits of a word") {
    const u256 word = (u256(0xabcdef) << 160) | u256(0x1234);
    const Address a = address_from_word(word);
    CHECK(a.hex() == "0x0000000000000000000000000000000000001234");
    CHECK(word_from_address(a) == u256(0x1234));
}

TEST_CASE("fixed bytes parse exact widths and compare by value") {
    CHECK_FALSE(Address::parse("0x1234").has_value());
    const auto a = Address::parse("0x863DF6BFa4469f3ead0bE8f9F2AAE51c91A907b4");
    REQUIRE(a.has_value());
    CHECK(a->hex() == "0x863df6bfa4469f3ead0be8f9f2aae51c91a907b4");
    CHECK(Address{} < *a);
    CHECK(Address{}.is_zero());
    CHECK(std::hash<Address>{}(*a) == std::hash<Address>{}(*Address::parse(a->hex())));
}

TEST_CASE("big-endian conversion round trips") {
    const u256 v = (u256(1) << 200) + 77;
    CHECK(u256_from_be(u256_to_be(v)) == v);
    const Bytes long_input(40, 0x01);
    CHECK(u256_from_be(long_input) == u256_from_be(ByteView(long_input).last(32)));
}
