// honeyscan: honeypot detection for Ethereum smart contracts
// Copyright 2026 The honeyscan Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "honeyscan/cfg.hpp"
#include "honeyscan/expr.hpp"

#include <map>
#include <optional>
#include <set>
#include <vector>

namespace honeyscan {

/// Exploration limits and knobs. Defaults, including the per-query solver
/// timeout, global timeout, loop, depth, and gas limits, mirror the
/// reference configuration this tool is normally run with.
struct RunConfig {
    int solver_timeout_ms = 1000;
    int global_timeout_s = 1800;
    int loop_limit = 10;
    int depth_limit = 50;
    uint64_t gas_limit = 4'000'000;
    int jump_model_limit = 2; // concrete models tried per symbolic jump target
};

/// Transaction environment: who calls what with how much.
struct ExecutionEnvironment {
    Expr contract_address; // I_a
    Expr sender;           // I_s
    Expr call_value;       // I_v
    Expr origin;
    Expr calldata_size;
};

enum class PathTerminator : uint8_t {
    Stop,
    Return,
    Revert,
    SelfDestruct,
    Invalid,
    InvalidJump,
    LimitExceeded,
};

const char* to_string(PathTerminator t);

enum class Feasibility : uint8_t { feasible, infeasible, unknown };

const char* to_string(Feasibility f);

enum class CallKind : uint8_t { Call, DelegateCall };

/// One CALL/DELEGATECALL observed during exploration: the tuple of
/// recipient, value, called function, arguments, call type, and gas.
struct CallRecord {
    size_t id = 0;
    CallKind kind = CallKind::Call;
    Expr recipient;                   // c_r
    Expr value;                       // c_v (constant 0 for DELEGATECALL)
    std::optional<uint32_t> selector; // c_f when a concrete 4-byte selector is present
    bool is_ether_transfer = false;   // c_f marker: empty input data
    std::vector<Expr> args;           // c_a: the 32-byte words after the selector
    Expr gas;                         // c_g
    size_t path_id = 0;
    uint32_t block_offset = 0;
    bool block_infeasible = false;    // enclosing block reached under unsat conditions
    size_t order_in_path = 0;
    std::vector<Expr> path_conditions; // snapshot when the call executed
    std::optional<uint32_t> caller_function; // dispatched selector of the enclosing path
};

struct StorageWrite {
    Expr key;
    Expr value;
    Expr previous; // value a read would have returned just before this write
    size_t path_id = 0;
    uint32_t block_offset = 0;
    bool in_infeasible_block = false;
    std::vector<Expr> conditions;
    std::optional<uint32_t> function;
};

struct SelfDestructRecord {
    Expr beneficiary;
    size_t path_id = 0;
    std::vector<Expr> conditions;
};

struct ArithRecord {
    enum class Op : uint8_t { Mul, Add } op;
    Expr lhs, rhs, result;
    size_t path_id = 0;
};

struct ExecutionPath {
    size_t id = 0;
    std::vector<uint32_t> blocks; // entered blocks, in order, repeats included
    std::vector<Expr> conditions;
    PathTerminator terminator = PathTerminator::Stop;
    Feasibility feasibility = Feasibility::unknown;
    std::optional<uint32_t> function; // selector matched by the dispatcher
    size_t call_count = 0;
    // Post-state: machine stack at halt and the path's storage overlay
    // as (key, value) pairs in first-write order.
    std::vector<Expr> final_stack;
    std::vector<std::pair<Expr, Expr>> final_storage;
};

/// Everything symbolic exploration collects for the downstream analyses.
struct AnalysisArtifacts {
    InstructionSeq seq;
    Cfg cfg; // post-exploration snapshot (dynamic edges included)

    std::vector<ExecutionPath> paths;
    std::vector<CallRecord> calls;
    std::vector<StorageWrite> storage_writes;
    std::vector<SelfDestructRecord> selfdestructs;
    std::vector<ArithRecord> arithmetic;
    std::set<uint32_t> feasible_blocks;
    std::set<uint32_t> infeasible_blocks;

    double coverage = 0.0; // fraction of instructions visited
    bool complete = true;  // false when the global timeout cut exploration

    ExecutionEnvironment env;
    Expr initial_balance; // balance before the transaction value was added
    Expr self_balance;    // what BALANCE(self) observes: initial_balance + I_v
    /// Engine-level assumptions conjoined into every feasibility query
    /// (positive pre-funded balance, no-overflow caps).
    std::vector<Expr> base_constraints;

    /// (key expression, initial-read symbol) in first-read order.
    std::vector<std::pair<Expr, Expr>> storage_reads;
    /// Concrete calldata word offsets loaded per dispatched function.
    std::map<uint32_t, std::set<uint32_t>> function_calldata_offsets;

    const ExecutionPath& path(size_t id) const { return paths.at(id); }
    /// Key expression for an initial-storage symbol, if the symbol is one.
    std::optional<Expr> key_for_storage_symbol(const Expr& sym) const;
};

} // namespace honeyscan
