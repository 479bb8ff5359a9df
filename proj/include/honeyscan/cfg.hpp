// honeyscan: honeypot detection for Ethereum smart contracts
// Copyright 2026 The honeyscan Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "honeyscan/bytecode.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace honeyscan {

enum class BlockTerminator : uint8_t {
    Jump,
    JumpI,
    Stop,
    Return,
    Revert,
    SelfDestruct,
    Invalid,     // INVALID opcode or undefined instruction
    Fallthrough, // block ends because the next offset starts a new block
};

enum class EdgeKind : uint8_t {
    Fallthrough,
    JumpTaken,    // statically resolved constant jump
    JumpNotTaken, // JUMPI false branch
    Dynamic,      // target resolved during symbolic execution
};

struct BasicBlock {
    uint32_t start = 0;
    size_t first_instr = 0; // index range into the InstructionSeq
    size_t instr_count = 0;
    BlockTerminator terminator = BlockTerminator::Fallthrough;

    uint32_t end_offset(const InstructionSeq& seq) const
    {
        const auto& last = seq.instructions[first_instr + instr_count - 1];
        return last.next_offset();
    }
};

struct Edge {
    uint32_t source;
    uint32_t target;
    EdgeKind kind;
    auto operator<=>(const Edge&) const = default;
};

/// Control-flow graph over basic blocks. Statically known edges are present
/// after build_cfg; computed jump targets accumulate during symbolic
/// execution via add_dynamic_edge.
struct Cfg {
    std::map<uint32_t, BasicBlock> blocks; // keyed by start offset
    std::set<Edge> edges;
    std::set<uint32_t> jumpdests;
    // Snapshot of block-level feasibility seen during exploration. A block
    // may appear in both sets (reached on a feasible and an infeasible
    // path); the per-path record in the artifacts is authoritative.
    std::set<uint32_t> feasible_blocks;
    std::set<uint32_t> infeasible_blocks;

    const BasicBlock* block_at(uint32_t offset) const
    {
        const auto it = blocks.find(offset);
        return it == blocks.end() ? nullptr : &it->second;
    }
    /// Start offset of the block containing a byte offset.
    const BasicBlock* block_containing(uint32_t offset, const InstructionSeq& seq) const;
};

Cfg build_cfg(const InstructionSeq& seq);

/// Adds a dynamic edge for a jump target resolved at execution time.
/// Returns false when the target is not a valid JUMPDEST — the caller
/// records an invalid-jump path failure and no edge is added.
bool add_dynamic_edge(Cfg& cfg, uint32_t source_block, uint32_t target);

/// GraphViz rendering for --debug-dir dumps.
std::string to_dot(const Cfg& cfg, const InstructionSeq& seq);

/// Canonical textual rendering of one block, one instruction per line —
/// the input for block-pattern matching.
std::string block_text(const Cfg& cfg, const BasicBlock& block, const InstructionSeq& seq);

} // namespace honeyscan
