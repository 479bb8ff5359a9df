// honeyscan: honeypot detection for Ethereum smart contracts
// Copyright 2026 The honeyscan Authors.
// SPDX-License-Identifier: Apache-2.0

#include "honeyscan/detectors.hpp"
#include "honeyscan/engine.hpp"

#include <doctest.h>

#include <filesystem>
#include <map>
#include <memory>

using namespace honeyscan;

namespace {

struct Analysis {
    std::unique_ptr<ExprPool> pool;
    AnalysisArtifacts artifacts;
    CashFlowVerdict cashflow;
};

SolverGateway& shared_gateway()
{
    static SolverGateway gateway{SolverGateway::Options{}};
    return gateway;
}

// Exploration is deterministic and detectors are pure, so one analysis per
// corpus entry is shared across test cases.
Analysis& analyzed(const std::string& name)
{
    static std::map<std::string, std::unique_ptr<Analysis>> cache;
    auto it = cache.find(name);
    if (it == cache.end())
    {
        auto analysis = std::make_unique<Analysis>();
        analysis->pool = std::make_unique<ExprPool>();
        const auto path =
            std::filesystem::path(HONEYSCAN_SOURCE_DIR) / "corpus/bytecode" / (name + ".hex");
        analysis->artifacts =
            explore(Bytecode::from_file(path), *analysis->pool, shared_gateway());
        analysis->cashflow = analyze_cashflow(analysis->artifacts, shared_gateway());
        it = cache.emplace(name, std::move(analysis)).first;
    }
    return *it->second;
}

std::vector<Finding> findings_of(const std::string& name)
{
    Analysis& a = analyzed(name);
    return run_all_detectors(a.artifacts, a.cashflow, *a.pool, shared_gateway());
}

std::set<std::string> detector_set(const std::vector<Finding>& findings)
{
    std::set<std::string> ids;
    for (const auto& f : findings)
        ids.insert(to_string(f.detector));
    return ids;
}

} // namespace

// --- balance disorder ------------------------------------------------------

TEST_CASE("BD fires on the impossible balance-matching transfer")
{
    Analysis& a = analyzed("multiplicator");
    DetectorContext ctx{a.artifacts, *a.pool, shared_gateway()};
    const auto findings = detect_balance_disorder(ctx);
    REQUIRE(findings.size() == 1);
    CHECK(evidence_resolves(findings[0], a.artifacts));
    // evidence points at the call in the infeasible arm
    const auto& call = a.artifacts.calls.at(findings[0].call_ids[0]);
    CHECK(call.block_infeasible);
}

TEST_CASE("BD is silent without calls and on the feasible variant")
{
    Analysis& none = analyzed("gate_counter"); // no calls at all
    DetectorContext ctx{none.artifacts, *none.pool, shared_gateway()};
    CHECK(detect_balance_disorder(ctx).empty());

    Analysis& fixed = analyzed("multiplicator_fixed");
    DetectorContext ctx2{fixed.artifacts, *fixed.pool, shared_gateway()};
    CHECK(detect_balance_disorder(ctx2).empty());
}

// --- inheritance disorder --------------------------------------------------

TEST_CASE("ID fires when the fallback writes a shadowed owner slot")
{
    Analysis& a = analyzed("king_of_the_hill");
    DetectorContext ctx{a.artifacts, *a.pool, shared_gateway()};
    const auto findings = detect_inheritance_disorder(ctx);
    REQUIRE_FALSE(findings.empty());
    CHECK(evidence_resolves(findings[0], a.artifacts));
    // the two cells differ
    REQUIRE(findings[0].storage_keys.size() == 2);
    CHECK(findings[0].storage_keys[0] != findings[0].storage_keys[1]);
}

TEST_CASE("ID is silent when the same slot guards the withdrawal")
{
    Analysis& a = analyzed("king_of_the_hill_fixed");
    DetectorContext ctx{a.artifacts, *a.pool, shared_gateway()};
    CHECK(detect_inheritance_disorder(ctx).empty());
}

// --- skip empty string literal ---------------------------------------------

TEST_CASE("SESL fires when the encoder drops the empty string argument")
{
    Analysis& a = analyzed("dividend_distributor");

    // the self-call supplies 3 words where the callee decodes 4
    bool saw_selfcall = false;
    for (const auto& call : a.artifacts.calls)
        if (call.recipient == a.artifacts.env.contract_address && call.selector)
        {
            saw_selfcall = true;
            CHECK(call.args.size() == 3);
        }
    CHECK(saw_selfcall);

    DetectorContext ctx{a.artifacts, *a.pool, shared_gateway()};
    const auto findings = detect_skip_empty_string_literal(ctx);
    REQUIRE_FALSE(findings.empty());
    CHECK(evidence_resolves(findings[0], a.artifacts));
}

TEST_CASE("SESL is silent with aligned arguments and without self-calls")
{
    Analysis& fixed = analyzed("dividend_distributor_fixed");
    DetectorContext ctx{fixed.artifacts, *fixed.pool, shared_gateway()};
    CHECK(detect_skip_empty_string_literal(ctx).empty());

    Analysis& none = analyzed("test_token"); // calls, but none to self
    DetectorContext ctx2{none.artifacts, *none.pool, shared_gateway()};
    CHECK(detect_skip_empty_string_literal(ctx2).empty());
}

// --- type deduction overflow -----------------------------------------------

TEST_CASE("TDO fires on the 8-bit truncated loop amount")
{
    Analysis& a = analyzed("for_test");
    DetectorContext ctx{a.artifacts, *a.pool, shared_gateway()};
    const auto findings = detect_type_deduction_overflow(ctx);
    REQUIRE_FALSE(findings.empty());
    CHECK(evidence_resolves(findings[0], a.artifacts));
}

TEST_CASE("TDO heuristic is literal about the 8-bit mask")
{
    Analysis& fixed = analyzed("for_test_fixed");
    DetectorContext ctx{fixed.artifacts, *fixed.pool, shared_gateway()};
    CHECK(detect_type_deduction_overflow(ctx).empty());

    // a 16-bit mask over an arithmetic result is not the pattern
    ExprPool pool;
    auto artifacts = explore(
        // PUSH1 0 x4; CALLVALUE; PUSH1 2; MUL; PUSH2 0xffff; AND;
        // PUSH20 addr; GAS; CALL; STOP
        Bytecode::from_hex("60006000600060003460020261ffff16"
                           "73aaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaa5af100"),
        pool, shared_gateway());
    DetectorContext ctx2{artifacts, pool, shared_gateway()};
    CHECK(detect_type_deduction_overflow(ctx2).empty());
}

// --- uninitialised struct ----------------------------------------------------

TEST_CASE("US fires when a struct pointer aliases slot zero")
{
    Analysis& a = analyzed("guess_number");
    DetectorContext ctx{a.artifacts, *a.pool, shared_gateway()};
    const auto findings = detect_uninitialised_struct(ctx);
    REQUIRE_FALSE(findings.empty());
    CHECK(evidence_resolves(findings[0], a.artifacts));
    // the aliased cells include slot 0
    CHECK(std::count(findings[0].storage_keys.begin(), findings[0].storage_keys.end(), "0x0"));
}

TEST_CASE("US is silent for memory structs and struct-free contracts")
{
    Analysis& fixed = analyzed("guess_number_fixed");
    DetectorContext ctx{fixed.artifacts, *fixed.pool, shared_gateway()};
    CHECK(detect_uninitialised_struct(ctx).empty());

    Analysis& none = analyzed("multiplicator");
    DetectorContext ctx2{none.artifacts, *none.pool, shared_gateway()};
    CHECK(detect_uninitialised_struct(ctx2).empty());
}

// --- hidden state update -----------------------------------------------------

TEST_CASE("HSU fires when a zero-value write can flip the bait guard")
{
    Analysis& a = analyzed("gift_1_eth");
    DetectorContext ctx{a.artifacts, *a.pool, shared_gateway()};
    const auto findings = detect_hidden_state_update(ctx);
    REQUIRE_FALSE(findings.empty());
    CHECK(evidence_resolves(findings[0], a.artifacts));
}

TEST_CASE("HSU is silent when every write to the guard requires funds")
{
    Analysis& fixed = analyzed("gift_1_eth_fixed");
    DetectorContext ctx{fixed.artifacts, *fixed.pool, shared_gateway()};
    CHECK(detect_hidden_state_update(ctx).empty());

    // increments of the form cell += value do not change the cell at value 0
    Analysis& bank = analyzed("private_bank_fixed");
    DetectorContext ctx2{bank.artifacts, *bank.pool, shared_gateway()};
    CHECK(detect_hidden_state_update(ctx2).empty());
}

// --- hidden transfer ---------------------------------------------------------

TEST_CASE("HT fires on consecutive full-balance transfers")
{
    Analysis& a = analyzed("test_token");
    DetectorContext ctx{a.artifacts, *a.pool, shared_gateway()};
    const auto findings = detect_hidden_transfer(ctx);
    REQUIRE_FALSE(findings.empty());
    CHECK(evidence_resolves(findings[0], a.artifacts));
    CHECK(findings[0].call_ids.size() == 2);
}

TEST_CASE("HT is silent for single transfers and token-amount variants")
{
    Analysis& single = analyzed("multiplicator");
    DetectorContext ctx{single.artifacts, *single.pool, shared_gateway()};
    CHECK(detect_hidden_transfer(ctx).empty());

    Analysis& fixed = analyzed("test_token_fixed");
    DetectorContext ctx2{fixed.artifacts, *fixed.pool, shared_gateway()};
    CHECK(detect_hidden_transfer(ctx2).empty());
}

// --- straw man contract ------------------------------------------------------

TEST_CASE("SMC fires when the sender is forwarded to the logger")
{
    Analysis& a = analyzed("private_bank");
    DetectorContext ctx{a.artifacts, *a.pool, shared_gateway()};
    const auto findings = detect_straw_man_contract(ctx);
    REQUIRE_FALSE(findings.empty());
    CHECK(evidence_resolves(findings[0], a.artifacts));
}

TEST_CASE("SMC fires on the delegatecall-then-payout variant")
{
    Analysis& a = analyzed("firm_wallet");
    DetectorContext ctx{a.artifacts, *a.pool, shared_gateway()};
    const auto findings = detect_straw_man_contract(ctx);
    REQUIRE_FALSE(findings.empty());
    // the first call of the pair is the delegatecall
    const auto& first = a.artifacts.calls.at(findings[0].call_ids[0]);
    CHECK(first.kind == CallKind::DelegateCall);
}

TEST_CASE("SMC is silent with a single call per path")
{
    Analysis& a = analyzed("private_bank_fixed");
    DetectorContext ctx{a.artifacts, *a.pool, shared_gateway()};
    CHECK(detect_straw_man_contract(ctx).empty());
}

// --- run_all -----------------------------------------------------------------

TEST_CASE("gate respected: no detector output for non-cashflow contracts")
{
    Analysis& a = analyzed("gate_counter");
    CHECK_FALSE(a.cashflow.is_cashflow_contract);
    const auto findings =
        run_all_detectors(a.artifacts, a.cashflow, *a.pool, shared_gateway());
    CHECK(findings.empty());
}

TEST_CASE("corpus honeypots pass the gate and are flagged with exactly their technique")
{
    const std::map<std::string, std::string> expected = {
        {"multiplicator", "BD"}, {"king_of_the_hill", "ID"},
        {"dividend_distributor", "SESL"}, {"for_test", "TDO"}, {"guess_number", "US"},
        {"gift_1_eth", "HSU"}, {"test_token", "HT"}, {"private_bank", "SMC"},
        {"firm_wallet", "SMC"}};
    for (const auto& [name, technique] : expected)
    {
        CAPTURE(name);
        Analysis& a = analyzed(name);
        CHECK(a.cashflow.is_cashflow_contract);
        const auto ids = detector_set(findings_of(name));
        CHECK(ids == std::set<std::string>{technique});
    }
}

TEST_CASE("trap-removed mutants produce zero findings")
{
    for (const char* name : {"multiplicator_fixed", "king_of_the_hill_fixed",
             "dividend_distributor_fixed", "for_test_fixed", "guess_number_fixed",
             "gift_1_eth_fixed", "test_token_fixed", "private_bank_fixed"})
    {
        CAPTURE(name);
        CHECK(findings_of(name).empty());
    }
}

TEST_CASE("determinism: identical artifacts yield identical findings")
{
    Analysis& a = analyzed("gift_1_eth");
    const auto first = findings_of("gift_1_eth");
    const auto second = findings_of("gift_1_eth");
    REQUIRE(first.size() == second.size());
    for (size_t i = 0; i < first.size(); ++i)
    {
        CHECK(first[i].detector == second[i].detector);
        CHECK(first[i].call_ids == second[i].call_ids);
        CHECK(first[i].block_offsets == second[i].block_offsets);
    }
    for (const auto& f : first)
        CHECK(evidence_resolves(f, a.artifacts));
}
