// honeyscan: honeypot detection for Ethereum smart contracts
// Copyright 2026 The honeyscan Authors.
// SPDX-License-Identifier: Apache-2.0

#include "honeyscan/cfg.hpp"

#include <algorithm>
#include <sstream>

namespace honeyscan {

namespace {

bool ends_block(const Instruction& instr)
{
    switch (instr.opcode)
    {
    case OP_JUMP:
    case OP_JUMPI:
    case OP_STOP:
    case OP_RETURN:
    case OP_REVERT:
    case OP_SELFDESTRUCT:
    case OP_INVALID:
        return true;
    default:
        return !opcode_info(instr.opcode).defined;
    }
}

BlockTerminator classify(const Instruction& instr)
{
    switch (instr.opcode)
    {
    case OP_JUMP:
        return BlockTerminator::Jump;
    case OP_JUMPI:
        return BlockTerminator::JumpI;
    case OP_STOP:
        return BlockTerminator::Stop;
    case OP_RETURN:
        return BlockTerminator::Return;
    case OP_REVERT:
        return BlockTerminator::Revert;
    case OP_SELFDESTRUCT:
        return BlockTerminator::SelfDestruct;
    default:
        return BlockTerminator::Invalid; // INVALID and undefined bytes
    }
}

} // namespace

const BasicBlock* Cfg::block_containing(uint32_t offset, const InstructionSeq& seq) const
{
    auto it = blocks.upper_bound(offset);
    if (it == blocks.begin())
        return nullptr;
    --it;
    const BasicBlock& b = it->second;
    return offset < b.end_offset(seq) ? &b : nullptr;
}

Cfg build_cfg(const InstructionSeq& seq)
{
    Cfg cfg;
    cfg.jumpdests = seq.jumpdests;
    if (seq.empty())
        return cfg;

    // Leaders: offset 0, every JUMPDEST, every successor of a terminator.
    std::set<uint32_t> leaders{seq.instructions.front().offset};
    for (size_t i = 0; i < seq.instructions.size(); ++i)
    {
        const Instruction& instr = seq.instructions[i];
        if (instr.opcode == OP_JUMPDEST)
            leaders.insert(instr.offset);
        if (ends_block(instr) && i + 1 < seq.instructions.size())
            leaders.insert(seq.instructions[i + 1].offset);
    }

    // Slice instructions into blocks.
    size_t begin = 0;
    while (begin < seq.instructions.size())
    {
        BasicBlock block;
        block.start = seq.instructions[begin].offset;
        block.first_instr = begin;
        size_t end = begin;
        while (true)
        {
            const Instruction& instr = seq.instructions[end];
            if (ends_block(instr))
            {
                block.terminator = classify(instr);
                ++end;
                break;
            }
            if (end + 1 == seq.instructions.size())
            {
                // Running off the end of the code halts like STOP.
                block.terminator = BlockTerminator::Stop;
                ++end;
                break;
            }
            if (leaders.count(seq.instructions[end + 1].offset))
            {
                block.terminator = BlockTerminator::Fallthrough;
                ++end;
                break;
            }
            ++end;
        }
        block.instr_count = end - begin;
        cfg.blocks.emplace(block.start, block);
        begin = end;
    }

    // Statically known edges.
    for (const auto& [start, block] : cfg.blocks)
    {
        const Instruction& last = seq.instructions[block.first_instr + block.instr_count - 1];
        const uint32_t next = last.next_offset();
        const bool has_next = cfg.blocks.count(next) != 0;

        if (block.terminator == BlockTerminator::Fallthrough && has_next)
            cfg.edges.insert({start, next, EdgeKind::Fallthrough});

        if (block.terminator == BlockTerminator::JumpI && has_next)
            cfg.edges.insert({start, next, EdgeKind::JumpNotTaken});

        if ((block.terminator == BlockTerminator::Jump || block.terminator == BlockTerminator::JumpI) &&
            block.instr_count >= 2)
        {
            const Instruction& prev = seq.instructions[block.first_instr + block.instr_count - 2];
            if (is_push(prev.opcode))
            {
                const Word target = prev.push_value();
                if (target <= word_max() && target < (Word(1) << 32))
                {
                    const auto off = static_cast<uint32_t>(target);
                    if (cfg.jumpdests.count(off))
                        cfg.edges.insert({start, off, EdgeKind::JumpTaken});
                }
            }
        }
    }
    return cfg;
}

bool add_dynamic_edge(Cfg& cfg, uint32_t source_block, uint32_t target)
{
    if (!cfg.jumpdests.count(target))
        return false;
    // Re-resolving a statically known edge keeps its static kind.
    if (!cfg.edges.count({source_block, target, EdgeKind::JumpTaken}))
        cfg.edges.insert({source_block, target, EdgeKind::Dynamic});
    return true;
}

std::string block_text(const Cfg&, const BasicBlock& block, const InstructionSeq& seq)
{
    std::string text;
    for (size_t i = 0; i < block.instr_count; ++i)
    {
        text += to_string(seq.instructions[block.first_instr + i]);
        text += '\n';
    }
    return text;
}

std::string to_dot(const Cfg& cfg, const InstructionSeq& seq)
{
    std::ostringstream os;
    os << "digraph cfg {\n  node [shape=box, fontname=\"monospace\"];\n";
    for (const auto& [start, block] : cfg.blocks)
    {
        os << "  b" << start << " [label=\"";
        os << "block " << start;
        if (cfg.infeasible_blocks.count(start))
            os << " (infeasible)";
        os << "\\l";
        for (size_t i = 0; i < block.instr_count; ++i)
        {
            const auto& instr = seq.instructions[block.first_instr + i];
            os << instr.offset << ": " << to_string(instr) << "\\l";
        }
        os << "\"];\n";
    }
    for (const auto& edge : cfg.edges)
    {
        static const char* styles[] = {"solid", "bold", "dashed", "dotted"};
        os << "  b" << edge.source << " -> b" << edge.target << " [style="
           << styles[static_cast<size_t>(edge.kind)] << "];\n";
    }
    os << "}\n";
    return os.str();
}

} // namespace honeyscan
