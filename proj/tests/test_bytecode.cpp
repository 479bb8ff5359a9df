// honeyscan: honeypot detection for Ethereum smart contracts
// Copyright 2026 The honeyscan Authors.
// SPDX-License-Identifier: Apache-2.0

#include "honeyscan/bytecode.hpp"
#include "honeyscan/keccak.hpp"

#include <doctest.h>

#include <random>

using namespace honeyscan;

namespace {

// Independent jumpdest scanner working on raw bytes (no decode() involved),
// used as the reference for the decoder-based implementation.
std::set<uint32_t> reference_jumpdests(const std::vector<uint8_t>& bytes)
{
    std::set<uint32_t> dests;
    size_t i = 0;
    while (i < bytes.size())
    {
        const uint8_t op = bytes[i];
        if (op == OP_JUMPDEST)
            dests.insert(static_cast<uint32_t>(i));
        i += 1 + (is_push(op) ? push_width(op) : 0);
    }
    return dests;
}

} // namespace

TEST_CASE("decode: push-add sequence")
{
    const auto seq = decode(Bytecode::from_hex("6001600101"));
    REQUIRE(seq.instructions.size() == 3);
    CHECK(seq.instructions[0].opcode == OP_PUSH1);
    CHECK(seq.instructions[0].offset == 0);
    CHECK(seq.instructions[0].push_value() == 1);
    CHECK(seq.instructions[1].opcode == OP_PUSH1);
    CHECK(seq.instructions[1].offset == 2);
    CHECK(seq.instructions[2].opcode == OP_ADD);
    CHECK(seq.instructions[2].offset == 4);
    CHECK(seq.warnings.empty());
}

TEST_CASE("decode: single stop")
{
    const auto seq = decode(Bytecode::from_hex("0x00"));
    REQUIRE(seq.instructions.size() == 1);
    CHECK(seq.instructions[0].opcode == OP_STOP);
    CHECK(seq.instructions[0].offset == 0);
}

TEST_CASE("decode: truncated push data is zero-padded and flagged")
{
    const auto seq = decode(Bytecode::from_hex("61ff"));
    REQUIRE(seq.instructions.size() == 1);
    CHECK(seq.instructions[0].opcode == OP_PUSH1 + 1); // PUSH2
    CHECK(seq.instructions[0].push_value() == 0xff00);
    REQUIRE(seq.warnings.size() == 1);
    CHECK(seq.warnings[0].offset == 0);
}

TEST_CASE("decode: empty input")
{
    const auto seq = decode(Bytecode{});
    CHECK(seq.empty());
    CHECK(seq.jumpdests.empty());
}

TEST_CASE("decode: undefined bytes become undefined-class instructions")
{
    const auto seq = decode(Bytecode::from_hex("0c1b1cf5")); // gaps + post-revision opcodes
    REQUIRE(seq.instructions.size() == 4);
    for (const auto& instr : seq.instructions)
        CHECK_FALSE(opcode_info(instr.opcode).defined);
}

TEST_CASE("jumpdests: basic and push-data exclusion")
{
    CHECK(decode(Bytecode::from_hex("5b00")).jumpdests == std::set<uint32_t>{0});
    // 0x5b inside push data is not a jump destination
    CHECK(decode(Bytecode::from_hex("605b00")).jumpdests == std::set<uint32_t>{});
}

TEST_CASE("hex parsing forms")
{
    const auto a = Bytecode::from_hex("0x6001");
    const auto b = Bytecode::from_hex("6001\n");
    const auto c = Bytecode::from_hex("0X6001");
    CHECK(a.bytes == b.bytes);
    CHECK(a.bytes == c.bytes);
    CHECK(a.to_hex() == "6001");
    CHECK_THROWS_AS(Bytecode::from_hex("60zz"), std::invalid_argument);
    CHECK_THROWS_AS(Bytecode::from_hex("600"), std::invalid_argument);
}

TEST_CASE("hex round-trip is the identity up to case and prefix")
{
    const std::string mixed = "0x60FfAb005B";
    const auto code = Bytecode::from_hex(mixed);
    CHECK(code.to_hex() == "60ffab005b");
    CHECK(Bytecode::from_hex(code.to_hex()).bytes == code.bytes);
}

TEST_CASE("random bytecode: total decoding, offset partition, re-encode identity")
{
    std::mt19937 rng(20260809);
    std::uniform_int_distribution<int> len_dist(0, 1024);
    std::uniform_int_distribution<int> byte_dist(0, 255);
    for (int iter = 0; iter < 200; ++iter)
    {
        Bytecode code;
        const int n = len_dist(rng);
        code.bytes.reserve(n);
        for (int i = 0; i < n; ++i)
            code.bytes.push_back(static_cast<uint8_t>(byte_dist(rng)));

        const auto seq = decode(code);

        // Offsets strictly increase and partition the byte range.
        uint32_t expected = 0;
        for (const auto& instr : seq.instructions)
        {
            CHECK(instr.offset == expected);
            expected = instr.next_offset();
        }
        CHECK(expected >= code.bytes.size()); // zero-padding may extend past the end

        // Re-encoding reproduces the bytes, modulo recorded zero-padding.
        auto encoded = encode(seq);
        REQUIRE(encoded.size() >= code.bytes.size());
        CHECK(std::equal(code.bytes.begin(), code.bytes.end(), encoded.begin()));
        for (size_t i = code.bytes.size(); i < encoded.size(); ++i)
            CHECK(encoded[i] == 0);
        if (encoded.size() != code.bytes.size())
            CHECK_FALSE(seq.warnings.empty());

        CHECK(seq.jumpdests == reference_jumpdests(code.bytes));
    }
}

TEST_CASE("keccak256 known vectors")
{
    // Empty string and "abc": published Keccak-256 digests.
    CHECK(keccak256_hex({}) == "c5d2460186f7233c927e7db2dcc703c0e500b653ca82273b7bfad8045d85a470");
    const std::vector<uint8_t> abc = {'a', 'b', 'c'};
    CHECK(keccak256_hex(abc) == "4e03657aea45a94fc7d47ba826c8d667c0d1e6e33a64a036ec44f58fa12d6c45");
}
