// honeyscan: honeypot detection for Ethereum smart contracts
// Copyright 2026 The honeyscan Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "honeyscan/expr.hpp"

#include <chrono>
#include <list>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace honeyscan {

enum class Verdict { sat, unsat, unknown };

struct SatResult {
    Verdict verdict = Verdict::unknown;
    std::map<std::string, Word> model; // populated only on sat when requested
    std::chrono::milliseconds elapsed{0};
};

/// The configured solver process cannot be started or does not answer.
struct SolverUnavailable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The solver crashed twice in a row on the same query.
struct SolverCrashed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Renders a constraint set (word terms asserted non-zero) as a
/// self-contained SMT-LIB v2 query. Exposed for tests.
std::string smt_query_text(const std::vector<Expr>& constraints, bool want_model);

/// Satisfiability oracle over quantifier-free bit-vectors plus the
/// uninterpreted hash. Talks to a child process speaking SMT-LIB v2 —
/// by default the bundled Z3 bridge, or any z3-compatible binary named
/// via HONEYSCAN_SOLVER. One gateway instance serves one analysis
/// session, sequentially; distinct sessions get distinct processes.
class SolverGateway {
public:
    struct Options {
        std::vector<std::string> command; // argv; empty = default_command()
        int timeout_ms = 1000;            // per-query budget
        size_t cache_entries = 10000;
    };

    /// HONEYSCAN_SOLVER (whitespace-split argv) if set, otherwise
    /// `node <bridge>` where the bridge is HONEYSCAN_SOLVER_BRIDGE or the
    /// build-time default.
    static std::vector<std::string> default_command();

    SolverGateway();
    explicit SolverGateway(Options opts);
    ~SolverGateway();
    SolverGateway(const SolverGateway&) = delete;
    SolverGateway& operator=(const SolverGateway&) = delete;

    /// Checks the conjunction of `constraints` (each asserted != 0).
    /// A per-query timeout yields `unknown`.
    SatResult check(const std::vector<Expr>& constraints, bool want_model = false);

    size_t queries_sent() const { return queries_sent_; }
    size_t cache_hits() const { return cache_hits_; }
    int timeout_ms() const { return opts_.timeout_ms; }

private:
    struct Process;

    void ensure_process();
    void kill_process();
    /// Sends one framed query, returns raw response lines, or empty on
    /// timeout/crash (state reported via `healthy`).
    std::vector<std::string> roundtrip(const std::string& query, bool& healthy, bool& timed_out);

    Options opts_;
    std::unique_ptr<Process> process_;
    uint64_t marker_seq_ = 0;
    size_t queries_sent_ = 0;
    size_t cache_hits_ = 0;

    // LRU cache keyed on the canonical query text.
    std::list<std::pair<std::string, SatResult>> lru_;
    std::map<std::string, std::list<std::pair<std::string, SatResult>>::iterator> cache_;
    void cache_put(const std::string& key, const SatResult& result);
    const SatResult* cache_get(const std::string& key);
};

} // namespace honeyscan
