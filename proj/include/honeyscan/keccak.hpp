// honeyscan: honeypot detection for Ethereum smart contracts
// Copyright 2026 The honeyscan Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <cstddef>
#include <string>
#include <vector>

namespace honeyscan {

/// Keccak-256 (the pre-NIST padding variant used by the EVM's SHA3 opcode).
std::array<uint8_t, 32> keccak256(const uint8_t* data, size_t len);

inline std::array<uint8_t, 32> keccak256(const std::vector<uint8_t>& data)
{
    return keccak256(data.data(), data.size());
}

std::string keccak256_hex(const std::vector<uint8_t>& data);

} // namespace honeyscan
