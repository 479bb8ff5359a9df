// honeyscan: honeypot detection for Ethereum smart contracts
// Copyright 2026 The honeyscan Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "honeyscan/word256.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace honeyscan {

// Opcode values for the EVM revision contemporary with the 0.4.25 compiler
// (Byzantium). Later additions (SHL/SHR/SAR, CREATE2, EXTCODEHASH, ...)
// decode as undefined.
enum Op : uint8_t {
    OP_STOP = 0x00,
    OP_ADD = 0x01,
    OP_MUL = 0x02,
    OP_SUB = 0x03,
    OP_DIV = 0x04,
    OP_SDIV = 0x05,
    OP_MOD = 0x06,
    OP_SMOD = 0x07,
    OP_ADDMOD = 0x08,
    OP_MULMOD = 0x09,
    OP_EXP = 0x0a,
    OP_SIGNEXTEND = 0x0b,
    OP_LT = 0x10,
    OP_GT = 0x11,
    OP_SLT = 0x12,
    OP_SGT = 0x13,
    OP_EQ = 0x14,
    OP_ISZERO = 0x15,
    OP_AND = 0x16,
    OP_OR = 0x17,
    OP_XOR = 0x18,
    OP_NOT = 0x19,
    OP_BYTE = 0x1a,
    OP_SHA3 = 0x20,
    OP_ADDRESS = 0x30,
    OP_BALANCE = 0x31,
    OP_ORIGIN = 0x32,
    OP_CALLER = 0x33,
    OP_CALLVALUE = 0x34,
    OP_CALLDATALOAD = 0x35,
    OP_CALLDATASIZE = 0x36,
    OP_CALLDATACOPY = 0x37,
    OP_CODESIZE = 0x38,
    OP_CODECOPY = 0x39,
    OP_GASPRICE = 0x3a,
    OP_EXTCODESIZE = 0x3b,
    OP_EXTCODECOPY = 0x3c,
    OP_RETURNDATASIZE = 0x3d,
    OP_RETURNDATACOPY = 0x3e,
    OP_BLOCKHASH = 0x40,
    OP_COINBASE = 0x41,
    OP_TIMESTAMP = 0x42,
    OP_NUMBER = 0x43,
    OP_DIFFICULTY = 0x44,
    OP_GASLIMIT = 0x45,
    OP_POP = 0x50,
    OP_MLOAD = 0x51,
    OP_MSTORE = 0x52,
    OP_MSTORE8 = 0x53,
    OP_SLOAD = 0x54,
    OP_SSTORE = 0x55,
    OP_JUMP = 0x56,
    OP_JUMPI = 0x57,
    OP_PC = 0x58,
    OP_MSIZE = 0x59,
    OP_GAS = 0x5a,
    OP_JUMPDEST = 0x5b,
    OP_PUSH1 = 0x60,
    OP_PUSH32 = 0x7f,
    OP_DUP1 = 0x80,
    OP_DUP16 = 0x8f,
    OP_SWAP1 = 0x90,
    OP_SWAP16 = 0x9f,
    OP_LOG0 = 0xa0,
    OP_LOG4 = 0xa4,
    OP_CREATE = 0xf0,
    OP_CALL = 0xf1,
    OP_CALLCODE = 0xf2,
    OP_RETURN = 0xf3,
    OP_DELEGATECALL = 0xf4,
    OP_STATICCALL = 0xfa,
    OP_REVERT = 0xfd,
    OP_INVALID = 0xfe,
    OP_SELFDESTRUCT = 0xff,
};

struct OpInfo {
    const char* name; // "UNKNOWN_xx" for undefined bytes
    uint8_t pops;
    uint8_t pushes;
    uint16_t gas;  // static approximation, used only as an exploration bound
    bool defined;  // false for bytes outside the targeted revision
};

const OpInfo& opcode_info(uint8_t op);

inline bool is_push(uint8_t op)
{
    return op >= OP_PUSH1 && op <= OP_PUSH32;
}
inline unsigned push_width(uint8_t op)
{
    return op - OP_PUSH1 + 1;
}
inline bool is_dup(uint8_t op)
{
    return op >= OP_DUP1 && op <= OP_DUP16;
}
inline bool is_swap(uint8_t op)
{
    return op >= OP_SWAP1 && op <= OP_SWAP16;
}
inline bool is_log(uint8_t op)
{
    return op >= OP_LOG0 && op <= OP_LOG4;
}

/// Runtime bytecode of one contract (no constructor prefix).
struct Bytecode {
    std::vector<uint8_t> bytes;

    /// Parses hex text: optional "0x" prefix, case-insensitive, surrounding
    /// whitespace ignored. Throws std::invalid_argument on non-hex content.
    static Bytecode from_hex(std::string_view text);

    /// Loads a file holding either hex text or raw binary (sniffed).
    static Bytecode from_file(const std::filesystem::path& path);

    std::string to_hex() const; // lowercase, no 0x prefix
    std::string hash_hex() const; // keccak-256 of the raw bytes

    bool empty() const { return bytes.empty(); }
    size_t size() const { return bytes.size(); }
};

struct Instruction {
    uint32_t offset = 0;
    uint8_t opcode = 0;
    std::vector<uint8_t> push_data; // non-empty only for PUSH1..PUSH32

    /// Byte width in the code stream (1 + declared push width).
    uint32_t size() const { return 1 + (is_push(opcode) ? push_width(opcode) : 0); }
    uint32_t next_offset() const { return offset + size(); }
    Word push_value() const { return word_from_bytes(push_data.data(), push_data.size()); }
    const char* name() const { return opcode_info(opcode).name; }
};

struct DecodeWarning {
    uint32_t offset;
    std::string message;
};

struct InstructionSeq {
    std::vector<Instruction> instructions;
    std::set<uint32_t> jumpdests;
    std::vector<DecodeWarning> warnings;

    bool empty() const { return instructions.empty(); }
    /// Index into `instructions` for a byte offset, if it starts an instruction.
    std::optional<size_t> index_of(uint32_t offset) const;
    /// Total byte length covered (offset past the final instruction).
    uint32_t code_end() const;
};

/// Total decoder: consumes every byte. A trailing PUSH with missing data
/// bytes is zero-padded to its declared width and reported as a warning.
/// Undefined byte values become undefined-class instructions, never errors.
InstructionSeq decode(const Bytecode& code);

/// Offsets of JUMPDEST instructions that are not embedded in push data.
std::set<uint32_t> find_jumpdests(const InstructionSeq& seq);

/// Re-encodes a decoded sequence (identity up to recorded zero-padding).
std::vector<uint8_t> encode(const InstructionSeq& seq);

/// One-line textual form, e.g. "PUSH1 0x60" — the canonical rendering used
/// by block-level pattern matching and debug dumps.
std::string to_string(const Instruction& instr);

} // namespace honeyscan
