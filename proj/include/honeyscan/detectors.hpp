// honeyscan: honeypot detection for Ethereum smart contracts
// Copyright 2026 The honeyscan Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "honeyscan/cashflow.hpp"
#include "honeyscan/solver.hpp"
#include "honeyscan/state.hpp"

#include <string>
#include <vector>

namespace honeyscan {

enum class DetectorId : uint8_t { BD, ID, SESL, TDO, US, HSU, HT, SMC };

const char* to_string(DetectorId id);

/// One detector verdict with references into the analysis artifacts.
struct Finding {
    DetectorId detector;
    std::vector<size_t> call_ids;
    std::vector<size_t> path_ids;
    std::vector<uint32_t> block_offsets;
    std::vector<std::string> storage_keys; // rendered key expressions
    std::string note;
};

/// Shared state for one detector pass over one contract's artifacts.
struct DetectorContext {
    const AnalysisArtifacts& artifacts;
    ExprPool& pool;
    SolverGateway& solver;
};

std::vector<Finding> detect_balance_disorder(DetectorContext& ctx);
std::vector<Finding> detect_inheritance_disorder(DetectorContext& ctx);
std::vector<Finding> detect_skip_empty_string_literal(DetectorContext& ctx);
std::vector<Finding> detect_type_deduction_overflow(DetectorContext& ctx);
std::vector<Finding> detect_uninitialised_struct(DetectorContext& ctx);
std::vector<Finding> detect_hidden_state_update(DetectorContext& ctx);
std::vector<Finding> detect_hidden_transfer(DetectorContext& ctx);
std::vector<Finding> detect_straw_man_contract(DetectorContext& ctx);

/// Runs every registered detector. Contracts that failed the cash-flow gate
/// are not analyzed and yield no findings. Output order is deterministic:
/// by detector id, then by evidence.
std::vector<Finding> run_all_detectors(const AnalysisArtifacts& artifacts,
    const CashFlowVerdict& verdict, ExprPool& pool, SolverGateway& solver);

/// True when every reference in the finding resolves inside the artifacts.
bool evidence_resolves(const Finding& finding, const AnalysisArtifacts& artifacts);

} // namespace honeyscan
