// honeyscan: honeypot detection for Ethereum smart contracts
// Copyright 2026 The honeyscan Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "honeyscan/solver.hpp"
#include "honeyscan/state.hpp"

#include <optional>

namespace honeyscan {

/// Whether the contract can both receive and transfer funds — the gate in
/// front of the honeypot detectors.
struct CashFlowVerdict {
    bool can_receive = false;
    std::optional<size_t> receive_path; // witnessing path id

    bool can_transfer = false;
    std::optional<size_t> transfer_call;      // witnessing call id
    std::optional<size_t> transfer_path;      // witnessing SELFDESTRUCT path
    bool transfer_via_selfdestruct = false;

    bool is_cashflow_contract = false;
    bool partial = false; // exploration hit the global timeout
};

/// True iff some non-REVERT path can execute with a positive call value.
bool can_receive(const AnalysisArtifacts& artifacts, SolverGateway& solver,
    std::optional<size_t>* witness = nullptr);

/// True iff some call moves a symbolic or positive value, or some path
/// ends in SELFDESTRUCT.
bool can_transfer(const AnalysisArtifacts& artifacts, std::optional<size_t>* call_witness = nullptr,
    std::optional<size_t>* path_witness = nullptr);

CashFlowVerdict analyze_cashflow(const AnalysisArtifacts& artifacts, SolverGateway& solver);

} // namespace honeyscan
