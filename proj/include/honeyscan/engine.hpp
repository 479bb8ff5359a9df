// honeyscan: honeypot detection for Ethereum smart contracts
// Copyright 2026 The honeyscan Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "honeyscan/solver.hpp"
#include "honeyscan/state.hpp"

namespace honeyscan {

/// Depth-first symbolic exploration of every CFG path, infeasible ones
/// included. One engine instance analyzes one contract; the expression pool
/// must outlive the returned artifacts.
class SymbolicEngine {
public:
    SymbolicEngine(ExprPool& pool, SolverGateway& solver, RunConfig config = {});

    AnalysisArtifacts explore(const Bytecode& code);

private:
    struct Impl;
    ExprPool& pool_;
    SolverGateway& solver_;
    RunConfig config_;
};

/// Convenience wrapper used by tests and the batch front end.
AnalysisArtifacts explore(const Bytecode& code, ExprPool& pool, SolverGateway& solver,
    const RunConfig& config = {});

} // namespace honeyscan
