// honeyscan: honeypot detection for Ethereum smart contracts
// Copyright 2026 The honeyscan Authors.
// SPDX-License-Identifier: Apache-2.0

#include "honeyscan/bytecode.hpp"
#include "honeyscan/keccak.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <stdexcept>

namespace honeyscan {
namespace {

struct OpTable {
    std::array<OpInfo, 256> info;
    std::array<std::string, 256> names; // owns UNKNOWN_xx strings

    OpTable()
    {
        for (int i = 0; i < 256; ++i)
        {
            char buf[16];
            std::snprintf(buf, sizeof(buf), "UNKNOWN_%02x", i);
            names[i] = buf;
            info[i] = OpInfo{names[i].c_str(), 0, 0, 0, false};
        }
        auto def = [&](uint8_t op, const char* name, uint8_t pops, uint8_t pushes, uint16_t gas) {
            names[op] = name;
            info[op] = OpInfo{names[op].c_str(), pops, pushes, gas, true};
        };
        def(OP_STOP, "STOP", 0, 0, 0);
        def(OP_ADD, "ADD", 2, 1, 3);
        def(OP_MUL, "MUL", 2, 1, 5);
        def(OP_SUB, "SUB", 2, 1, 3);
        def(OP_DIV, "DIV", 2, 1, 5);
        def(OP_SDIV, "SDIV", 2, 1, 5);
        def(OP_MOD, "MOD", 2, 1, 5);
        def(OP_SMOD, "SMOD", 2, 1, 5);
        def(OP_ADDMOD, "ADDMOD", 3, 1, 8);
        def(OP_MULMOD, "MULMOD", 3, 1, 8);
        def(OP_EXP, "EXP", 2, 1, 10);
        def(OP_SIGNEXTEND, "SIGNEXTEND", 2, 1, 5);
        def(OP_LT, "LT", 2, 1, 3);
        def(OP_GT, "GT", 2, 1, 3);
        def(OP_SLT, "SLT", 2, 1, 3);
        def(OP_SGT, "SGT", 2, 1, 3);
        def(OP_EQ, "EQ", 2, 1, 3);
        def(OP_ISZERO, "ISZERO", 1, 1, 3);
        def(OP_AND, "AND", 2, 1, 3);
        def(OP_OR, "OR", 2, 1, 3);
        def(OP_XOR, "XOR", 2, 1, 3);
        def(OP_NOT, "NOT", 1, 1, 3);
        def(OP_BYTE, "BYTE", 2, 1, 3);
        def(OP_SHA3, "SHA3", 2, 1, 30);
        def(OP_ADDRESS, "ADDRESS", 0, 1, 2);
        def(OP_BALANCE, "BALANCE", 1, 1, 400);
        def(OP_ORIGIN, "ORIGIN", 0, 1, 2);
        def(OP_CALLER, "CALLER", 0, 1, 2);
        def(OP_CALLVALUE, "CALLVALUE", 0, 1, 2);
        def(OP_CALLDATALOAD, "CALLDATALOAD", 1, 1, 3);
        def(OP_CALLDATASIZE, "CALLDATASIZE", 0, 1, 2);
        def(OP_CALLDATACOPY, "CALLDATACOPY", 3, 0, 3);
        def(OP_CODESIZE, "CODESIZE", 0, 1, 2);
        def(OP_CODECOPY, "CODECOPY", 3, 0, 3);
        def(OP_GASPRICE, "GASPRICE", 0, 1, 2);
        def(OP_EXTCODESIZE, "EXTCODESIZE", 1, 1, 700);
        def(OP_EXTCODECOPY, "EXTCODECOPY", 4, 0, 700);
        def(OP_RETURNDATASIZE, "RETURNDATASIZE", 0, 1, 2);
        def(OP_RETURNDATACOPY, "RETURNDATACOPY", 3, 0, 3);
        def(OP_BLOCKHASH, "BLOCKHASH", 1, 1, 20);
        def(OP_COINBASE, "COINBASE", 0, 1, 2);
        def(OP_TIMESTAMP, "TIMESTAMP", 0, 1, 2);
        def(OP_NUMBER, "NUMBER", 0, 1, 2);
        def(OP_DIFFICULTY, "DIFFICULTY", 0, 1, 2);
        def(OP_GASLIMIT, "GASLIMIT", 0, 1, 2);
        def(OP_POP, "POP", 1, 0, 2);
        def(OP_MLOAD, "MLOAD", 1, 1, 3);
        def(OP_MSTORE, "MSTORE", 2, 0, 3);
        def(OP_MSTORE8, "MSTORE8", 2, 0, 3);
        def(OP_SLOAD, "SLOAD", 1, 1, 200);
        def(OP_SSTORE, "SSTORE", 2, 0, 5000);
        def(OP_JUMP, "JUMP", 1, 0, 8);
        def(OP_JUMPI, "JUMPI", 2, 0, 10);
        def(OP_PC, "PC", 0, 1, 2);
        def(OP_MSIZE, "MSIZE", 0, 1, 2);
        def(OP_GAS, "GAS", 0, 1, 2);
        def(OP_JUMPDEST, "JUMPDEST", 0, 0, 1);
        for (int i = 0; i < 32; ++i)
        {
            char name[8];
            std::snprintf(name, sizeof(name), "PUSH%d", i + 1);
            names[OP_PUSH1 + i] = name;
            info[OP_PUSH1 + i] = OpInfo{names[OP_PUSH1 + i].c_str(), 0, 1, 3, true};
        }
        for (int i = 0; i < 16; ++i)
        {
            char name[8];
            std::snprintf(name, sizeof(name), "DUP%d", i + 1);
            names[OP_DUP1 + i] = name;
            info[OP_DUP1 + i] = OpInfo{names[OP_DUP1 + i].c_str(), uint8_t(i + 1), uint8_t(i + 2), 3, true};
            std::snprintf(name, sizeof(name), "SWAP%d", i + 1);
            names[OP_SWAP1 + i] = name;
            info[OP_SWAP1 + i] = OpInfo{names[OP_SWAP1 + i].c_str(), uint8_t(i + 2), uint8_t(i + 2), 3, true};
        }
        for (int i = 0; i < 5; ++i)
        {
            char name[8];
            std::snprintf(name, sizeof(name), "LOG%d", i);
            names[OP_LOG0 + i] = name;
            info[OP_LOG0 + i] = OpInfo{names[OP_LOG0 + i].c_str(), uint8_t(i + 2), 0, uint16_t(375 * (i + 1)), true};
        }
        def(OP_CREATE, "CREATE", 3, 1, 32000);
        def(OP_CALL, "CALL", 7, 1, 700);
        def(OP_CALLCODE, "CALLCODE", 7, 1, 700);
        def(OP_RETURN, "RETURN", 2, 0, 0);
        def(OP_DELEGATECALL, "DELEGATECALL", 6, 1, 700);
        def(OP_STATICCALL, "STATICCALL", 6, 1, 700);
        def(OP_REVERT, "REVERT", 2, 0, 0);
        def(OP_INVALID, "INVALID", 0, 0, 0);
        def(OP_SELFDESTRUCT, "SELFDESTRUCT", 1, 0, 5000);
    }
};

const OpTable& table()
{
    static const OpTable t;
    return t;
}

int hex_nibble(char c)
{
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
        return c - 'A' + 10;
    return -1;
}

} // namespace

const OpInfo& opcode_info(uint8_t op)
{
    return table().info[op];
}

Bytecode Bytecode::from_hex(std::string_view text)
{
    size_t begin = 0, end = text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin])))
        ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1])))
        --end;
    if (end - begin >= 2 && text[begin] == '0' && (text[begin + 1] == 'x' || text[begin + 1] == 'X'))
        begin += 2;
    if ((end - begin) % 2 != 0)
        throw std::invalid_argument("hex bytecode has odd length");
    Bytecode code;
    code.bytes.reserve((end - begin) / 2);
    for (size_t i = begin; i < end; i += 2)
    {
        const int hi = hex_nibble(text[i]);
        const int lo = hex_nibble(text[i + 1]);
        if (hi < 0 || lo < 0)
            throw std::invalid_argument("invalid hex digit in bytecode");
        code.bytes.push_back(static_cast<uint8_t>(hi << 4 | lo));
    }
    return code;
}

Bytecode Bytecode::from_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const bool looks_hex = !raw.empty() &&
        std::all_of(raw.begin(), raw.end(), [](char c) {
            return hex_nibble(c) >= 0 || std::isspace(static_cast<unsigned char>(c)) || c == 'x' || c == 'X';
        });
    if (raw.empty())
        return Bytecode{};
    if (looks_hex)
        return from_hex(raw);
    Bytecode code;
    code.bytes.assign(raw.begin(), raw.end());
    return code;
}

std::string Bytecode::to_hex() const
{
    static const char* digits = "0123456789abcdef";
    std::string hex;
    hex.reserve(bytes.size() * 2);
    for (uint8_t b : bytes)
    {
        hex.push_back(digits[b >> 4]);
        hex.push_back(digits[b & 0xf]);
    }
    return hex;
}

std::string Bytecode::hash_hex() const
{
    return keccak256_hex(bytes);
}

std::optional<size_t> InstructionSeq::index_of(uint32_t offset) const
{
    const auto it = std::lower_bound(instructions.begin(), instructions.end(), offset,
        [](const Instruction& instr, uint32_t off) { return instr.offset < off; });
    if (it == instructions.end() || it->offset != offset)
        return std::nullopt;
    return static_cast<size_t>(it - instructions.begin());
}

uint32_t InstructionSeq::code_end() const
{
    return instructions.empty() ? 0 : instructions.back().next_offset();
}

InstructionSeq decode(const Bytecode& code)
{
    InstructionSeq seq;
    const auto& bytes = code.bytes;
    size_t pc = 0;
    while (pc < bytes.size())
    {
        Instruction instr;
        instr.offset = static_cast<uint32_t>(pc);
        instr.opcode = bytes[pc];
        ++pc;
        if (is_push(instr.opcode))
        {
            const unsigned width = push_width(instr.opcode);
            const size_t available = std::min<size_t>(width, bytes.size() - pc);
            instr.push_data.assign(bytes.begin() + pc, bytes.begin() + pc + available);
            if (available < width)
            {
                instr.push_data.resize(width, 0); // zero-pad to declared width
                seq.warnings.push_back({instr.offset,
                    "truncated push data zero-padded to " + std::to_string(width) + " bytes"});
            }
            pc += available;
        }
        seq.instructions.push_back(std::move(instr));
    }
    seq.jumpdests = find_jumpdests(seq);
    return seq;
}

std::set<uint32_t> find_jumpdests(const InstructionSeq& seq)
{
    std::set<uint32_t> dests;
    for (const auto& instr : seq.instructions)
        if (instr.opcode == OP_JUMPDEST)
            dests.insert(instr.offset);
    return dests;
}

std::vector<uint8_t> encode(const InstructionSeq& seq)
{
    std::vector<uint8_t> bytes;
    for (const auto& instr : seq.instructions)
    {
        bytes.push_back(instr.opcode);
        bytes.insert(bytes.end(), instr.push_data.begin(), instr.push_data.end());
    }
    return bytes;
}

std::string to_string(const Instruction& instr)
{
    std::string text = instr.name();
    if (is_push(instr.opcode))
    {
        text += " 0x";
        static const char* digits = "0123456789abcdef";
        for (uint8_t b : instr.push_data)
        {
            text.push_back(digits[b >> 4]);
            text.push_back(digits[b & 0xf]);
        }
    }
    return text;
}

} // namespace honeyscan
