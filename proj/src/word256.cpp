// honeyscan: honeypot detection for Ethereum smart contracts
// Copyright 2026 The honeyscan Authors.
// SPDX-License-Identifier: Apache-2.0

#include "honeyscan/word256.hpp"

#include <sstream>

namespace honeyscan {

Word sdiv(const Word& a, const Word& b)
{
    if (b == 0)
        return 0;
    const bool na = word_sign_bit(a);
    const bool nb = word_sign_bit(b);
    const Word ua = na ? word_neg(a) : a;
    const Word ub = nb ? word_neg(b) : b;
    const Word q = ua / ub;
    return (na != nb) ? word_neg(q) : q;
}

Word smod(const Word& a, const Word& b)
{
    if (b == 0)
        return 0;
    const bool na = word_sign_bit(a);
    const Word ua = na ? word_neg(a) : a;
    const Word ub = word_sign_bit(b) ? word_neg(b) : b;
    const Word r = ua % ub;
    return na ? word_neg(r) : r;
}

bool slt(const Word& a, const Word& b)
{
    const bool na = word_sign_bit(a);
    const bool nb = word_sign_bit(b);
    if (na != nb)
        return na;
    return a < b;
}

Word signextend(const Word& b, const Word& x)
{
    if (b >= 31)
        return x;
    const unsigned bit = static_cast<unsigned>(b) * 8 + 7;
    const Word mask = (Word(1) << (bit + 1)) - 1;
    if (boost::multiprecision::bit_test(x, bit))
        return x | ~mask;
    return x & mask;
}

Word wexp(Word base, Word exponent)
{
    Word result = 1;
    while (exponent != 0)
    {
        if (boost::multiprecision::bit_test(exponent, 0))
            result *= base;
        base *= base;
        exponent >>= 1;
    }
    return result;
}

Word word_byte(const Word& i, const Word& x)
{
    if (i >= 32)
        return 0;
    const unsigned shift = (31 - static_cast<unsigned>(i)) * 8;
    return (x >> shift) & 0xff;
}

void word_to_bytes(const Word& w, uint8_t out[32])
{
    Word v = w;
    for (int i = 31; i >= 0; --i)
    {
        out[i] = static_cast<uint8_t>(v & 0xff);
        v >>= 8;
    }
}

Word word_from_bytes(const uint8_t* data, size_t len)
{
    Word w = 0;
    for (size_t i = 0; i < len && i < 32; ++i)
    {
        w <<= 8;
        w |= data[i];
    }
    return w;
}

std::string word_to_hex(const Word& w)
{
    std::ostringstream os;
    os << "0x" << std::hex << w;
    return os.str();
}

std::string word_to_dec(const Word& w)
{
    return w.str();
}

} // namespace honeyscan
