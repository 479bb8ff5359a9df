// honeyscan: honeypot detection for Ethereum smart contracts
// Copyright 2026 The honeyscan Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>

namespace honeyscan {

/// 256-bit EVM word. Unsigned, wrapping arithmetic (mod 2^256).
using Word = boost::multiprecision::uint256_t;

inline const Word& word_max()
{
    static const Word max = ~Word(0);
    return max;
}

inline bool word_sign_bit(const Word& w)
{
    return boost::multiprecision::bit_test(w, 255);
}

/// Two's-complement negation.
inline Word word_neg(const Word& w)
{
    return ~w + 1;
}

/// EVM signed division semantics (SDIV): truncated toward zero, -2^255 / -1 = -2^255.
Word sdiv(const Word& a, const Word& b);

/// EVM signed modulo semantics (SMOD): sign follows the dividend.
Word smod(const Word& a, const Word& b);

/// Signed less-than over two's-complement words.
bool slt(const Word& a, const Word& b);

/// EVM SIGNEXTEND: extend the sign of the byte at index `b` (0 = lowest byte).
Word signextend(const Word& b, const Word& x);

/// EVM EXP with wrapping multiplication.
Word wexp(Word base, Word exponent);

/// EVM BYTE: the `i`-th byte of `x`, counting from the most significant (0..31).
Word word_byte(const Word& i, const Word& x);

/// Big-endian 32-byte serialization.
void word_to_bytes(const Word& w, uint8_t out[32]);
Word word_from_bytes(const uint8_t* data, size_t len); // len <= 32, big-endian

std::string word_to_hex(const Word& w); // minimal-width 0x form
std::string word_to_dec(const Word& w);

} // namespace honeyscan
