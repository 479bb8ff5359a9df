// honeyscan: honeypot detection for Ethereum smart contracts
// Copyright 2026 The honeyscan Authors.
// SPDX-License-Identifier: Apache-2.0

#include "honeyscan/cashflow.hpp"

namespace honeyscan {

bool can_receive(const AnalysisArtifacts& artifacts, SolverGateway& solver,
    std::optional<size_t>* witness)
{
    // ExprPool is shared through the expressions already in the artifacts.
    ExprPool* pool = nullptr;
    if (artifacts.env.call_value.valid())
        pool = const_cast<ExprPool*>(artifacts.env.call_value.pool());
    for (const auto& path : artifacts.paths)
    {
        if (path.terminator == PathTerminator::Revert)
            continue;
        if (!pool)
            continue;
        std::vector<Expr> query = artifacts.base_constraints;
        query.insert(query.end(), path.conditions.begin(), path.conditions.end());
        query.push_back(pool->gt(artifacts.env.call_value, pool->constant(0)));
        if (solver.check(query).verdict == Verdict::sat) // unknown does not witness
        {
            if (witness)
                *witness = path.id;
            return true;
        }
    }
    return false;
}

bool can_transfer(const AnalysisArtifacts& artifacts, std::optional<size_t>* call_witness,
    std::optional<size_t>* path_witness)
{
    for (const auto& call : artifacts.calls)
    {
        if (call.kind != CallKind::Call)
            continue; // a delegatecall forwards no value
        const bool symbolic = !call.value.is_const_value();
        const bool positive = call.value.is_const_value() && call.value.value() > 0;
        if (symbolic || positive)
        {
            if (call_witness)
                *call_witness = call.id;
            return true;
        }
    }
    for (const auto& path : artifacts.paths)
    {
        if (path.terminator == PathTerminator::SelfDestruct)
        {
            if (path_witness)
                *path_witness = path.id;
            return true;
        }
    }
    return false;
}

CashFlowVerdict analyze_cashflow(const AnalysisArtifacts& artifacts, SolverGateway& solver)
{
    CashFlowVerdict verdict;
    verdict.partial = !artifacts.complete;
    verdict.can_receive = can_receive(artifacts, solver, &verdict.receive_path);
    verdict.can_transfer =
        can_transfer(artifacts, &verdict.transfer_call, &verdict.transfer_path);
    verdict.transfer_via_selfdestruct = verdict.transfer_path.has_value();
    verdict.is_cashflow_contract = verdict.can_receive && verdict.can_transfer;
    return verdict;
}

} // namespace honeyscan
