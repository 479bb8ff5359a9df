// honeyscan: honeypot detection for Ethereum smart contracts
// Copyright 2026 The honeyscan Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Reference concrete EVM interpreter for differential testing. Deliberately
// independent of the symbolic engine: flat byte-array memory, direct Word
// arithmetic, no expression machinery.

#include "honeyscan/bytecode.hpp"
#include "honeyscan/keccak.hpp"
#include "honeyscan/word256.hpp"

#include <map>
#include <vector>

namespace honeyscan::testvm {

struct ConcreteResult {
    std::vector<Word> stack;
    std::map<Word, Word> storage;
    bool halted_normally = false;
};

// Executes straight-line code (no jumps, no environment reads, no calls).
inline ConcreteResult run_concrete(const std::vector<uint8_t>& code)
{
    ConcreteResult result;
    std::vector<Word> stack;
    std::vector<uint8_t> memory;
    std::map<Word, Word> storage;

    auto ensure_mem = [&](size_t end) {
        if (memory.size() < end)
            memory.resize((end + 31) / 32 * 32, 0);
    };
    auto pop = [&]() {
        Word w = stack.back();
        stack.pop_back();
        return w;
    };

    size_t pc = 0;
    while (pc < code.size())
    {
        const uint8_t op = code[pc];
        if (is_push(op))
        {
            const unsigned width = push_width(op);
            Word w = 0;
            for (unsigned i = 0; i < width && pc + 1 + i < code.size(); ++i)
                w = (w << 8) | code[pc + 1 + i];
            // zero-pad a truncated trailing push
            if (pc + 1 + width > code.size())
                w <<= 8 * (pc + 1 + width - code.size());
            stack.push_back(w);
            pc += 1 + width;
            continue;
        }
        ++pc;
        if (is_dup(op))
        {
            stack.push_back(stack[stack.size() - (op - OP_DUP1 + 1)]);
            continue;
        }
        if (is_swap(op))
        {
            std::swap(stack.back(), stack[stack.size() - (op - OP_SWAP1 + 2)]);
            continue;
        }
        switch (op)
        {
        case OP_STOP:
            result.halted_normally = true;
            result.stack = stack;
            result.storage = storage;
            return result;
        case OP_ADD:
        {
            const Word a = pop(), b = pop();
            stack.push_back(a + b);
            break;
        }
        case OP_MUL:
        {
            const Word a = pop(), b = pop();
            stack.push_back(a * b);
            break;
        }
        case OP_SUB:
        {
            const Word a = pop(), b = pop();
            stack.push_back(a - b);
            break;
        }
        case OP_DIV:
        {
            const Word a = pop(), b = pop();
            stack.push_back(b == 0 ? Word(0) : Word(a / b));
            break;
        }
        case OP_SDIV:
        {
            const Word a = pop(), b = pop();
            stack.push_back(sdiv(a, b));
            break;
        }
        case OP_MOD:
        {
            const Word a = pop(), b = pop();
            stack.push_back(b == 0 ? Word(0) : Word(a % b));
            break;
        }
        case OP_SMOD:
        {
            const Word a = pop(), b = pop();
            stack.push_back(smod(a, b));
            break;
        }
        case OP_ADDMOD:
        {
            using boost::multiprecision::uint512_t;
            const Word a = pop(), b = pop(), n = pop();
            stack.push_back(n == 0 ? Word(0) : Word((uint512_t(a) + uint512_t(b)) % uint512_t(n)));
            break;
        }
        case OP_MULMOD:
        {
            using boost::multiprecision::uint512_t;
            const Word a = pop(), b = pop(), n = pop();
            stack.push_back(n == 0 ? Word(0) : Word((uint512_t(a) * uint512_t(b)) % uint512_t(n)));
            break;
        }
        case OP_EXP:
        {
            const Word a = pop(), b = pop();
            stack.push_back(wexp(a, b));
            break;
        }
        case OP_SIGNEXTEND:
        {
            const Word b = pop(), x = pop();
            stack.push_back(signextend(b, x));
            break;
        }
        case OP_LT:
        {
            const Word a = pop(), b = pop();
            stack.push_back(a < b ? 1 : 0);
            break;
        }
        case OP_GT:
        {
            const Word a = pop(), b = pop();
            stack.push_back(a > b ? 1 : 0);
            break;
        }
        case OP_SLT:
        {
            const Word a = pop(), b = pop();
            stack.push_back(slt(a, b) ? 1 : 0);
            break;
        }
        case OP_SGT:
        {
            const Word a = pop(), b = pop();
            stack.push_back(slt(b, a) ? 1 : 0);
            break;
        }
        case OP_EQ:
        {
            const Word a = pop(), b = pop();
            stack.push_back(a == b ? 1 : 0);
            break;
        }
        case OP_ISZERO:
            stack.back() = stack.back() == 0 ? 1 : 0;
            break;
        case OP_AND:
        {
            const Word a = pop(), b = pop();
            stack.push_back(a & b);
            break;
        }
        case OP_OR:
        {
            const Word a = pop(), b = pop();
            stack.push_back(a | b);
            break;
        }
        case OP_XOR:
        {
            const Word a = pop(), b = pop();
            stack.push_back(a ^ b);
            break;
        }
        case OP_NOT:
            stack.back() = ~stack.back();
            break;
        case OP_BYTE:
        {
            const Word i = pop(), x = pop();
            stack.push_back(word_byte(i, x));
            break;
        }
        case OP_SHA3:
        {
            const Word off = pop(), len = pop();
            const auto o = static_cast<size_t>(off);
            const auto l = static_cast<size_t>(len);
            ensure_mem(o + l);
            const auto hash = keccak256(memory.data() + o, l);
            stack.push_back(word_from_bytes(hash.data(), 32));
            break;
        }
        case OP_POP:
            pop();
            break;
        case OP_MLOAD:
        {
            const auto off = static_cast<size_t>(pop());
            ensure_mem(off + 32);
            stack.push_back(word_from_bytes(memory.data() + off, 32));
            break;
        }
        case OP_MSTORE:
        {
            const auto off = static_cast<size_t>(pop());
            const Word val = pop();
            ensure_mem(off + 32);
            uint8_t bytes[32];
            word_to_bytes(val, bytes);
            std::copy(bytes, bytes + 32, memory.begin() + off);
            break;
        }
        case OP_MSTORE8:
        {
            const auto off = static_cast<size_t>(pop());
            const Word val = pop();
            ensure_mem(off + 1);
            memory[off] = static_cast<uint8_t>(val & 0xff);
            break;
        }
        case OP_SLOAD:
        {
            const Word key = pop();
            const auto it = storage.find(key);
            stack.push_back(it == storage.end() ? Word(0) : it->second);
            break;
        }
        case OP_SSTORE:
        {
            const Word key = pop(), val = pop();
            storage[key] = val;
            break;
        }
        case OP_PC:
            stack.push_back(pc - 1);
            break;
        case OP_MSIZE:
            stack.push_back(memory.size());
            break;
        default:
            // generator never emits anything else
            result.stack = stack;
            result.storage = storage;
            return result;
        }
    }
    result.halted_normally = true;
    result.stack = stack;
    result.storage = storage;
    return result;
}

} // namespace honeyscan::testvm
