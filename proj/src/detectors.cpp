// honeyscan: honeypot detection for Ethereum smart contracts
// Copyright 2026 The honeyscan Authors.
// SPDX-License-Identifier: Apache-2.0

#include "honeyscan/detectors.hpp"

#include <algorithm>
#include <map>
#include <regex>
#include <set>

namespace honeyscan {

const char* to_string(DetectorId id)
{
    switch (id)
    {
    case DetectorId::BD: return "BD";
    case DetectorId::ID: return "ID";
    case DetectorId::SESL: return "SESL";
    case DetectorId::TDO: return "TDO";
    case DetectorId::US: return "US";
    case DetectorId::HSU: return "HSU";
    case DetectorId::HT: return "HT";
    case DetectorId::SMC: return "SMC";
    }
    return "?";
}

namespace {

// Canonical identity of a storage cell (mirrors the engine's view).
struct CellId {
    bool concrete;
    Word value;
    uint32_t expr_id;

    static CellId of(const Expr& key)
    {
        if (key.is_const_value())
            return {true, key.value(), 0};
        return {false, 0, key.id()};
    }
    bool operator<(const CellId& o) const
    {
        if (concrete != o.concrete)
            return concrete;
        if (concrete)
            return value < o.value;
        return expr_id < o.expr_id;
    }
    bool operator==(const CellId& o) const
    {
        return concrete == o.concrete && (concrete ? value == o.value : expr_id == o.expr_id);
    }
};

std::string render_key(const Expr& key)
{
    return key.is_const_value() ? word_to_hex(key.value()) : key.to_string();
}

// Precomputed lookup tables shared by the detectors.
struct Tables {
    const AnalysisArtifacts& a;
    ExprPool& pool;
    SolverGateway& solver;

    std::map<uint32_t, Expr> storage_sym_to_key; // init symbol id -> key expr
    std::map<CellId, std::vector<size_t>> writes_by_cell;
    std::map<size_t, std::vector<size_t>> calls_by_path;

    explicit Tables(DetectorContext& ctx) : a(ctx.artifacts), pool(ctx.pool), solver(ctx.solver)
    {
        for (const auto& [key, sym] : a.storage_reads)
            storage_sym_to_key.emplace(sym.id(), key);
        for (size_t i = 0; i < a.storage_writes.size(); ++i)
            writes_by_cell[CellId::of(a.storage_writes[i].key)].push_back(i);
        for (size_t i = 0; i < a.calls.size(); ++i)
            calls_by_path[a.calls[i].path_id].push_back(i);
        for (auto& [path, ids] : calls_by_path)
            std::sort(ids.begin(), ids.end(), [&](size_t x, size_t y) {
                return a.calls[x].order_in_path < a.calls[y].order_in_path;
            });
    }

    /// Storage cells whose initial-read symbol occurs in the expression.
    std::vector<Expr> storage_keys_in(const Expr& e) const
    {
        std::vector<Expr> keys;
        std::set<uint32_t> seen;
        e.contains_if([&](const Expr& sub) {
            if (sub.is_symbol() && sub.tag() == SymTag::StorageInit)
            {
                const auto it = storage_sym_to_key.find(sub.id());
                if (it != storage_sym_to_key.end() && seen.insert(sub.id()).second)
                    keys.push_back(it->second);
            }
            return false; // full walk
        });
        return keys;
    }

    std::vector<Expr> storage_keys_in(const std::vector<Expr>& exprs) const
    {
        std::vector<Expr> keys;
        std::set<uint32_t> seen;
        for (const Expr& e : exprs)
            for (const Expr& key : storage_keys_in(e))
                if (seen.insert(key.id()).second)
                    keys.push_back(key);
        return keys;
    }

    bool references_storage(const Expr& e) const
    {
        return e.contains_if(
            [](const Expr& sub) { return sub.is_symbol() && sub.tag() == SymTag::StorageInit; });
    }

    std::vector<Expr> with_base(const std::vector<Expr>& conditions) const
    {
        std::vector<Expr> all = a.base_constraints;
        all.insert(all.end(), conditions.begin(), conditions.end());
        return all;
    }

    bool sat(const std::vector<Expr>& conditions) const
    {
        return solver.check(with_base(conditions)).verdict == Verdict::sat;
    }
    bool unsat(const std::vector<Expr>& conditions) const
    {
        return solver.check(with_base(conditions)).verdict == Verdict::unsat;
    }

    /// Structural equality modulo +-reassociation, with a solver equivalence
    /// fallback. The fallback runs under the path conditions when those are
    /// satisfiable, and under the base assumptions alone otherwise (an unsat
    /// premise would make any equivalence hold vacuously).
    bool values_equal(const Expr& lhs, const Expr& rhs, const std::vector<Expr>& conditions) const
    {
        if (pool.equal_modulo_add(lhs, rhs))
            return true;
        std::vector<Expr> query;
        if (sat(conditions))
            query = with_base(conditions);
        else
            query = a.base_constraints;
        query.push_back(pool.iszero(pool.eq(lhs, rhs)));
        return solver.check(query).verdict == Verdict::unsat;
    }
};

// One finding per code location: paths that replay the same call site (e.g.
// the success and failure forks after a transfer) collapse into the earliest
// record, which DFS order makes deterministic.
void sort_and_dedupe(std::vector<Finding>& findings)
{
    auto order = [](const Finding& f) {
        return std::tuple(f.detector, f.block_offsets, f.storage_keys, f.call_ids, f.path_ids);
    };
    auto site = [](const Finding& f) {
        return std::tuple(f.detector, f.block_offsets, f.storage_keys);
    };
    std::sort(findings.begin(), findings.end(),
        [&](const Finding& x, const Finding& y) { return order(x) < order(y); });
    findings.erase(std::unique(findings.begin(), findings.end(),
                       [&](const Finding& x, const Finding& y) { return site(x) == site(y); }),
        findings.end());
}

} // namespace

// ---------------------------------------------------------------------------
// Balance disorder: a call inside an infeasible block whose value is the
// incoming value plus the contract balance.

std::vector<Finding> detect_balance_disorder(DetectorContext& ctx)
{
    Tables t(ctx);
    std::vector<Finding> findings;
    const Expr target = t.pool.add(t.a.env.call_value, t.a.self_balance);
    for (const auto& call : t.a.calls)
    {
        if (call.kind != CallKind::Call || !call.block_infeasible)
            continue;
        if (!t.values_equal(call.value, target, call.path_conditions))
            continue;
        Finding f;
        f.detector = DetectorId::BD;
        f.call_ids = {call.id};
        f.path_ids = {call.path_id};
        f.block_offsets = {call.block_offset};
        f.note = "call value equals incoming value plus contract balance on an unreachable branch";
        findings.push_back(std::move(f));
    }
    sort_and_dedupe(findings);
    return findings;
}

// ---------------------------------------------------------------------------
// Inheritance disorder: the sender lands in a storage cell no guard ever
// reads, while some guarded call compares the sender against a different
// cell.

std::vector<Finding> detect_inheritance_disorder(DetectorContext& ctx)
{
    Tables t(ctx);
    std::vector<Finding> findings;
    const Expr sender = t.a.env.sender;

    // Cells that some path condition, call field, or selfdestruct target
    // reads from.
    std::set<CellId> used_cells;
    auto mark_used = [&](const Expr& e) {
        for (const Expr& key : t.storage_keys_in(e))
            used_cells.insert(CellId::of(key));
    };
    for (const auto& path : t.a.paths)
        for (const auto& cond : path.conditions)
            mark_used(cond);
    for (const auto& call : t.a.calls)
    {
        mark_used(call.recipient);
        mark_used(call.value);
        for (const auto& arg : call.args)
            mark_used(arg);
    }
    for (const auto& sd : t.a.selfdestructs)
        mark_used(sd.beneficiary);

    // Clause 1: sender written to a cell that is never used.
    std::vector<const StorageWrite*> sender_sinks;
    for (const auto& write : t.a.storage_writes)
    {
        if (write.in_infeasible_block)
            continue;
        if (!write.value.contains(sender))
            continue;
        if (used_cells.count(CellId::of(write.key)))
            continue;
        sender_sinks.push_back(&write);
    }
    if (sender_sinks.empty())
        return findings;

    // Clause 2: a call guarded by a comparison between the sender and a
    // different storage cell.
    for (const auto& call : t.a.calls)
    {
        for (const auto& cond : call.path_conditions)
        {
            bool matched = false;
            Expr matched_key;
            cond.contains_if([&](const Expr& e) {
                switch (e.kind())
                {
                case ExprKind::Eq:
                case ExprKind::Lt:
                case ExprKind::Gt:
                case ExprKind::Slt:
                case ExprKind::Sgt:
                    break;
                default:
                    return false;
                }
                for (int side = 0; side < 2 && !matched; ++side)
                {
                    const Expr a = e.child(side), b = e.child(1 - side);
                    if (!a.contains(sender))
                        continue;
                    for (const Expr& key : t.storage_keys_in(b))
                    {
                        for (const StorageWrite* sink : sender_sinks)
                        {
                            if (!(CellId::of(key) == CellId::of(sink->key)))
                            {
                                matched = true;
                                matched_key = key;
                                break;
                            }
                        }
                        if (matched)
                            break;
                    }
                }
                return matched;
            });
            if (matched)
            {
                Finding f;
                f.detector = DetectorId::ID;
                f.call_ids = {call.id};
                f.path_ids = {call.path_id};
                f.block_offsets = {call.block_offset};
                f.storage_keys = {render_key(sender_sinks.front()->key), render_key(matched_key)};
                f.note = "sender stored to a never-read cell while the call checks another cell";
                findings.push_back(std::move(f));
                break;
            }
        }
    }
    sort_and_dedupe(findings);
    return findings;
}

// ---------------------------------------------------------------------------
// Skip empty string literal: a self-call supplies fewer argument words than
// the called function's own dispatcher decodes, and inside that function a
// call's recipient originates from one of the supplied argument slots.

std::vector<Finding> detect_skip_empty_string_literal(DetectorContext& ctx)
{
    Tables t(ctx);
    std::vector<Finding> findings;

    for (const auto& call : t.a.calls)
    {
        if (call.kind != CallKind::Call || !call.selector)
            continue;
        if (!(call.recipient == t.a.env.contract_address))
            continue; // arity is only visible for calls back into this contract
        const auto arity_it = t.a.function_calldata_offsets.find(*call.selector);
        if (arity_it == t.a.function_calldata_offsets.end() || arity_it->second.empty())
            continue;
        const uint32_t max_offset = *arity_it->second.rbegin();
        const size_t expected_args = (max_offset - 4) / 32 + 1;
        if (call.args.size() >= expected_args)
            continue;

        // Supplied words occupy callee calldata [4, 4 + 32*n).
        const uint32_t supplied_end = 4 + 32 * static_cast<uint32_t>(call.args.size());
        for (const auto& inner : t.a.calls)
        {
            if (inner.caller_function != call.selector)
                continue;
            const bool from_arg = inner.recipient.contains_if([&](const Expr& e) {
                return e.is_symbol() && e.tag() == SymTag::CalldataWord && e.node().aux >= 4 &&
                    e.node().aux < supplied_end;
            });
            if (!from_arg)
                continue;
            Finding f;
            f.detector = DetectorId::SESL;
            f.call_ids = {call.id, inner.id};
            f.path_ids = {call.path_id, inner.path_id};
            f.block_offsets = {call.block_offset, inner.block_offset};
            f.note = "self-call supplies fewer words than the callee decodes; "
                     "the callee's transfer target comes from a shifted argument";
            findings.push_back(std::move(f));
        }
    }
    sort_and_dedupe(findings);
    return findings;
}

// ---------------------------------------------------------------------------
// Type deduction overflow: the call value carries a multiplication or
// addition result truncated by an AND with 0xff.

std::vector<Finding> detect_type_deduction_overflow(DetectorContext& ctx)
{
    Tables t(ctx);
    std::vector<Finding> findings;
    auto masked_arith = [](const Expr& e) {
        if (e.kind() != ExprKind::And)
            return false;
        for (int side = 0; side < 2; ++side)
        {
            const Expr mask = e.child(side), value = e.child(1 - side);
            if (!mask.is_const_value() || mask.value() != 0xff)
                continue;
            if (value.kind() == ExprKind::Mul || value.kind() == ExprKind::Add)
                return true;
        }
        return false;
    };
    for (const auto& call : t.a.calls)
    {
        if (call.kind != CallKind::Call)
            continue;
        if (!call.value.contains_if(masked_arith))
            continue;
        Finding f;
        f.detector = DetectorId::TDO;
        f.call_ids = {call.id};
        f.path_ids = {call.path_id};
        f.block_offsets = {call.block_offset};
        f.note = "call value contains an arithmetic result truncated to 8 bits";
        findings.push_back(std::move(f));
    }
    sort_and_dedupe(findings);
    return findings;
}

// ---------------------------------------------------------------------------
// Uninitialised struct: a block stores through pointer arithmetic whose base
// resolves to slot zero with no allocation in sight, and a call depends on
// the aliased cells.

namespace {

// Canonical-text pattern for a storage-pointer member store: a duplicated
// pointer, a small constant member offset, an ADD, and an SSTORE later in
// the same block — with no hash-derived key and no free-pointer read before
// the arithmetic.
bool block_matches_struct_store(const std::string& text)
{
    static const std::regex trigram(
        "(^|\n)(DUP[0-9]+)\nPUSH1 0x[01][0-9a-f]\nADD\n",
        std::regex::optimize);
    std::smatch m;
    if (!std::regex_search(text, m, trigram))
        return false;
    const size_t at = static_cast<size_t>(m.position(0));
    const std::string before = text.substr(0, at);
    if (before.find("SHA3") != std::string::npos)
        return false; // mapping/dynamic-array slot, not a raw pointer
    if (before.find("PUSH1 0x40\nMLOAD") != std::string::npos)
        return false; // allocated through the free-memory pointer
    return text.find("SSTORE", at) != std::string::npos;
}

} // namespace

std::vector<Finding> detect_uninitialised_struct(DetectorContext& ctx)
{
    Tables t(ctx);
    std::vector<Finding> findings;

    // Candidate blocks by text pattern.
    std::set<uint32_t> candidate_blocks;
    for (const auto& [start, block] : t.a.cfg.blocks)
        if (block_matches_struct_store(block_text(t.a.cfg, block, t.a.seq)))
            candidate_blocks.insert(start);
    if (candidate_blocks.empty())
        return findings;

    // Confirmed struct cells: writes in candidate blocks whose key is
    // pointer arithmetic off a concrete zero base.
    std::set<Word> struct_slots;
    std::vector<size_t> struct_writes;
    for (size_t i = 0; i < t.a.storage_writes.size(); ++i)
    {
        const auto& write = t.a.storage_writes[i];
        if (!candidate_blocks.count(write.block_offset))
            continue;
        const Expr& key = write.key;
        if (key.kind() != ExprKind::Add || !key.is_const_value() || key.value() >= 32)
            continue;
        const bool zero_base = (key.child(0).is_const_value() && key.child(0).value() == 0) ||
            (key.child(1).is_const_value() && key.child(1).value() == 0);
        if (!zero_base)
            continue;
        struct_slots.insert(key.value());
        struct_writes.push_back(i);
    }
    if (struct_slots.empty())
        return findings;

    // Initial-read symbols of the aliased cells.
    std::set<uint32_t> struct_syms;
    for (const auto& [key, sym] : t.a.storage_reads)
        if (key.is_const_value() && struct_slots.count(key.value()))
            struct_syms.insert(sym.id());

    auto depends_on_struct_cell = [&](const Expr& e, size_t path_id) {
        if (e.contains_if([&](const Expr& sub) { return struct_syms.count(sub.id()) != 0; }))
            return true;
        for (size_t wi : struct_writes)
        {
            const auto& write = t.a.storage_writes[wi];
            if (write.path_id == path_id && e.contains(write.value))
                return true;
        }
        return false;
    };

    for (const auto& call : t.a.calls)
    {
        bool hit = depends_on_struct_cell(call.value, call.path_id);
        for (const auto& cond : call.path_conditions)
            hit = hit || depends_on_struct_cell(cond, call.path_id);
        if (!hit)
            continue;
        Finding f;
        f.detector = DetectorId::US;
        f.call_ids = {call.id};
        f.path_ids = {call.path_id};
        f.block_offsets = {call.block_offset};
        for (const Word& slot : struct_slots)
            f.storage_keys.push_back(word_to_hex(slot));
        f.note = "call depends on storage aliased by an uninitialised struct pointer";
        findings.push_back(std::move(f));
    }
    sort_and_dedupe(findings);
    return findings;
}

// ---------------------------------------------------------------------------
// Hidden state update: a guarded call depends on a storage cell whose
// content can be changed without transferring funds — directly by a
// zero-value write in another function, or indirectly when such a write
// flips the guard of the bait path that would write the cell.

namespace {

struct HsuScan {
    const Tables& t;
    ExprPool& pool;

    bool different_function(const std::optional<uint32_t>& a, const std::optional<uint32_t>& b) const
    {
        return a != b;
    }

    // A write that actually changes the cell under a zero transaction value.
    bool silently_modifiable(const StorageWrite& write) const
    {
        std::vector<Expr> query = write.conditions;
        query.push_back(pool.eq(t.a.env.call_value, pool.constant(0)));
        query.push_back(pool.iszero(pool.eq(write.value, write.previous)));
        return t.sat(query);
    }

    // Does asserting "the cell now holds what W' wrote" make the bait
    // write's own guard unsatisfiable?
    bool disables(const StorageWrite& bait, const Expr& cell_sym, const StorageWrite& update) const
    {
        std::vector<Expr> query = bait.conditions;
        query.push_back(pool.eq(cell_sym, update.value));
        return t.unsat(query);
    }

    bool cell_reachable_by_update(const Expr& key, const std::optional<uint32_t>& caller_fn)
    {
        const auto it = t.writes_by_cell.find(CellId::of(key));
        if (it == t.writes_by_cell.end())
            return false;

        // Direct: some other function modifies the cell at zero value.
        for (size_t wi : it->second)
        {
            const auto& write = t.a.storage_writes[wi];
            if (write.in_infeasible_block || !different_function(write.function, caller_fn))
                continue;
            if (silently_modifiable(write))
                return true;
        }

        // Indirect: the cell is written on a reachable bait path whose own
        // guard reads another cell that a third function can silently flip
        // into a blocking state.
        for (size_t wi : it->second)
        {
            const auto& bait = t.a.storage_writes[wi];
            if (bait.in_infeasible_block || !different_function(bait.function, caller_fn))
                continue;
            if (!t.sat(bait.conditions))
                continue;
            for (const Expr& guard_key : t.storage_keys_in(bait.conditions))
            {
                if (CellId::of(guard_key) == CellId::of(key))
                    continue;
                const Expr guard_sym = [&] {
                    for (const auto& [k, sym] : t.a.storage_reads)
                        if (CellId::of(k) == CellId::of(guard_key))
                            return sym;
                    return Expr{};
                }();
                if (!guard_sym.valid())
                    continue;
                const auto guard_writes = t.writes_by_cell.find(CellId::of(guard_key));
                if (guard_writes == t.writes_by_cell.end())
                    continue;
                for (size_t gw : guard_writes->second)
                {
                    const auto& update = t.a.storage_writes[gw];
                    if (update.in_infeasible_block ||
                        !different_function(update.function, bait.function))
                        continue;
                    if (silently_modifiable(update) && disables(bait, guard_sym, update))
                        return true;
                }
            }
        }
        return false;
    }
};

} // namespace

std::vector<Finding> detect_hidden_state_update(DetectorContext& ctx)
{
    Tables t(ctx);
    std::vector<Finding> findings;
    HsuScan scan{t, ctx.pool};

    for (const auto& call : t.a.calls)
    {
        if (call.kind != CallKind::Call || call.block_infeasible)
            continue;
        for (const Expr& key : t.storage_keys_in(call.path_conditions))
        {
            if (!scan.cell_reachable_by_update(key, call.caller_function))
                continue;
            Finding f;
            f.detector = DetectorId::HSU;
            f.call_ids = {call.id};
            f.path_ids = {call.path_id};
            f.block_offsets = {call.block_offset};
            f.storage_keys = {render_key(key)};
            f.note = "guarding storage can be rewritten by another function without funds";
            findings.push_back(std::move(f));
            break;
        }
    }
    sort_and_dedupe(findings);
    return findings;
}

// ---------------------------------------------------------------------------
// Hidden transfer: back-to-back full-balance transfers, first to a
// storage-held recipient, then to the sender.

std::vector<Finding> detect_hidden_transfer(DetectorContext& ctx)
{
    Tables t(ctx);
    std::vector<Finding> findings;

    for (const auto& [path_id, call_ids] : t.calls_by_path)
    {
        for (size_t i = 0; i + 1 < call_ids.size(); ++i)
        {
            const CallRecord& first = t.a.calls[call_ids[i]];
            const CallRecord& second = t.a.calls[call_ids[i + 1]];
            if (first.kind != CallKind::Call || second.kind != CallKind::Call)
                continue;
            if (!t.references_storage(first.recipient))
                continue;
            if (!(second.recipient == t.a.env.sender))
                continue;
            if (!t.values_equal(first.value, t.a.self_balance, first.path_conditions) ||
                !t.values_equal(second.value, t.a.self_balance, second.path_conditions))
                continue;
            Finding f;
            f.detector = DetectorId::HT;
            f.call_ids = {first.id, second.id};
            f.path_ids = {path_id};
            f.block_offsets = {first.block_offset, second.block_offset};
            f.note = "consecutive full-balance transfers: storage-held recipient, then sender";
            findings.push_back(std::move(f));
        }
    }
    sort_and_dedupe(findings);
    return findings;
}

// ---------------------------------------------------------------------------
// Straw man contract: two consecutive calls to different recipients where
// either a delegatecall precedes the balance payout to the sender, or the
// sender is forwarded into the second call's arguments.

std::vector<Finding> detect_straw_man_contract(DetectorContext& ctx)
{
    Tables t(ctx);
    std::vector<Finding> findings;

    for (const auto& [path_id, call_ids] : t.calls_by_path)
    {
        for (size_t i = 0; i + 1 < call_ids.size(); ++i)
        {
            const CallRecord& first = t.a.calls[call_ids[i]];
            const CallRecord& second = t.a.calls[call_ids[i + 1]];
            if (first.recipient == second.recipient)
                continue;

            bool fired = false;
            // Case 1: delegatecall, then the whole balance to the sender.
            if (first.kind == CallKind::DelegateCall && second.kind == CallKind::Call &&
                second.recipient == t.a.env.sender &&
                t.values_equal(second.value, t.a.self_balance, second.path_conditions))
                fired = true;
            // Case 2: a later plain call that carries the sender among its
            // arguments.
            if (!fired && second.kind == CallKind::Call)
            {
                for (const auto& arg : second.args)
                    if (arg == t.a.env.sender)
                    {
                        fired = true;
                        break;
                    }
            }
            if (!fired)
                continue;
            Finding f;
            f.detector = DetectorId::SMC;
            f.call_ids = {first.id, second.id};
            f.path_ids = {path_id};
            f.block_offsets = {first.block_offset, second.block_offset};
            f.note = "paired calls route the payout through a second contract";
            findings.push_back(std::move(f));
        }
    }
    sort_and_dedupe(findings);
    return findings;
}

// ---------------------------------------------------------------------------

std::vector<Finding> run_all_detectors(const AnalysisArtifacts& artifacts,
    const CashFlowVerdict& verdict, ExprPool& pool, SolverGateway& solver)
{
    std::vector<Finding> findings;
    if (!verdict.is_cashflow_contract)
        return findings;

    DetectorContext ctx{artifacts, pool, solver};
    for (auto* detect : {detect_balance_disorder, detect_inheritance_disorder,
             detect_skip_empty_string_literal, detect_type_deduction_overflow,
             detect_uninitialised_struct, detect_hidden_state_update, detect_hidden_transfer,
             detect_straw_man_contract})
    {
        auto batch = detect(ctx);
        findings.insert(findings.end(), batch.begin(), batch.end());
    }
    sort_and_dedupe(findings);
    return findings;
}

bool evidence_resolves(const Finding& finding, const AnalysisArtifacts& artifacts)
{
    for (size_t call_id : finding.call_ids)
    {
        const bool ok = std::any_of(artifacts.calls.begin(), artifacts.calls.end(),
            [&](const CallRecord& c) { return c.id == call_id; });
        if (!ok)
            return false;
    }
    for (size_t path_id : finding.path_ids)
        if (path_id >= artifacts.paths.size())
            return false;
    for (uint32_t offset : finding.block_offsets)
        if (!artifacts.cfg.blocks.count(offset))
            return false;
    return true;
}

} // namespace honeyscan
