// honeyscan: honeypot detection for Ethereum smart contracts
// Copyright 2026 The honeyscan Authors.
// SPDX-License-Identifier: Apache-2.0

#include "honeyscan/keccak.hpp"

#include <cstring>

namespace honeyscan {
namespace {

constexpr uint64_t round_constants[24] = {
    0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808aULL, 0x8000000080008000ULL,
    0x000000000000808bULL, 0x0000000080000001ULL, 0x8000000080008081ULL, 0x8000000000008009ULL,
    0x000000000000008aULL, 0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000aULL,
    0x000000008000808bULL, 0x800000000000008bULL, 0x8000000000008089ULL, 0x8000000000008003ULL,
    0x8000000000008002ULL, 0x8000000000000080ULL, 0x000000000000800aULL, 0x800000008000000aULL,
    0x8000000080008081ULL, 0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL};

constexpr unsigned rotation[24] = {1,  3,  6,  10, 15, 21, 28, 36, 45, 55, 2,  14,
                                   27, 41, 56, 8,  25, 43, 62, 18, 39, 61, 20, 44};

constexpr unsigned pi_lane[24] = {10, 7,  11, 17, 18, 3, 5,  16, 8,  21, 24, 4,
                                  15, 23, 19, 13, 12, 2, 20, 14, 22, 9,  6,  1};

inline uint64_t rotl(uint64_t x, unsigned n)
{
    return (x << n) | (x >> (64 - n));
}

void keccak_f1600(uint64_t st[25])
{
    for (int round = 0; round < 24; ++round)
    {
        uint64_t bc[5];
        for (int i = 0; i < 5; ++i)
            bc[i] = st[i] ^ st[i + 5] ^ st[i + 10] ^ st[i + 15] ^ st[i + 20];
        for (int i = 0; i < 5; ++i)
        {
            const uint64_t t = bc[(i + 4) % 5] ^ rotl(bc[(i + 1) % 5], 1);
            for (int j = 0; j < 25; j += 5)
                st[j + i] ^= t;
        }
        uint64_t t = st[1];
        for (int i = 0; i < 24; ++i)
        {
            const uint64_t tmp = st[pi_lane[i]];
            st[pi_lane[i]] = rotl(t, rotation[i]);
            t = tmp;
        }
        for (int j = 0; j < 25; j += 5)
        {
            for (int i = 0; i < 5; ++i)
                bc[i] = st[j + i];
            for (int i = 0; i < 5; ++i)
                st[j + i] ^= (~bc[(i + 1) % 5]) & bc[(i + 2) % 5];
        }
        st[0] ^= round_constants[round];
    }
}

} // namespace

std::array<uint8_t, 32> keccak256(const uint8_t* data, size_t len)
{
    constexpr size_t rate = 136; // 1088-bit rate for 256-bit output
    uint64_t st[25] = {};
    uint8_t block[rate];

    while (len >= rate)
    {
        for (size_t i = 0; i < rate / 8; ++i)
        {
            uint64_t lane;
            std::memcpy(&lane, data + i * 8, 8);
            st[i] ^= lane;
        }
        keccak_f1600(st);
        data += rate;
        len -= rate;
    }

    std::memset(block, 0, rate);
    std::memcpy(block, data, len);
    block[len] = 0x01; // Keccak (non-SHA3) domain padding
    block[rate - 1] |= 0x80;
    for (size_t i = 0; i < rate / 8; ++i)
    {
        uint64_t lane;
        std::memcpy(&lane, block + i * 8, 8);
        st[i] ^= lane;
    }
    keccak_f1600(st);

    std::array<uint8_t, 32> out;
    std::memcpy(out.data(), st, 32);
    return out;
}

std::string keccak256_hex(const std::vector<uint8_t>& data)
{
    static const char* digits = "0123456789abcdef";
    const auto hash = keccak256(data.data(), data.size());
    std::string hex;
    hex.reserve(64);
    for (uint8_t b : hash)
    {
        hex.push_back(digits[b >> 4]);
        hex.push_back(digits[b & 0xf]);
    }
    return hex;
}

} // namespace honeyscan
