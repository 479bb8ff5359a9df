// honeyscan: honeypot detection for Ethereum smart contracts
// Copyright 2026 The honeyscan Authors.
// SPDX-License-Identifier: Apache-2.0

#include "honeyscan/forensics.hpp"

#include <doctest.h>

#include <filesystem>
#include <map>
#include <random>
#include <sstream>

using namespace honeyscan;

namespace {

TransactionRecord tx(std::string id, std::string from, std::string to, Wei value, Wei fee,
    int64_t ts, TxKind kind = TxKind::Call)
{
    TransactionRecord record;
    record.tx_id = std::move(id);
    record.from = std::move(from);
    record.to = std::move(to);
    record.value = value;
    record.fee = fee;
    record.timestamp = ts;
    record.kind = kind;
    record.contract = "0xpot";
    return record;
}

ActorRole role_of(const std::vector<ActorLabel>& labels, const std::string& address)
{
    for (const auto& label : labels)
        if (label.address == address)
            return label.role;
    return ActorRole::Neutral;
}

const Wei ether = Wei("1000000000000000000");

} // namespace

TEST_CASE("creator is the attacker, losing caller the victim")
{
    // The creation carries the bait, so the creator is also the first funder.
    const std::vector<TransactionRecord> log = {
        tx("t0", "0xa", "0xpot", ether / 10, 100, 1000, TxKind::Creation),
        tx("t1", "0xb", "0xpot", ether, 50, 1010),
    };
    const auto labels = label_actors(log);
    CHECK(role_of(labels, "0xa") == ActorRole::Attacker);
    CHECK(role_of(labels, "0xb") == ActorRole::Victim);
}

TEST_CASE("net-gain rule marks non-creator profiteers as attackers")
{
    const std::vector<TransactionRecord> log = {
        tx("t0", "0xa", "0xpot", 0, 100, 1000, TxKind::Creation),
        tx("t1", "0xa", "0xpot", ether, 10, 1001),           // a is also first funder
        tx("t2", "0xc", "0xpot", ether / 2, 10, 1002),       // c sends 0.5
        tx("t3", "0xpot", "0xc", ether / 2 + ether / 10, 0, 1003), // c receives 0.6
    };
    const auto labels = label_actors(log);
    CHECK(role_of(labels, "0xa") == ActorRole::Attacker);
    CHECK(role_of(labels, "0xc") == ActorRole::Attacker); // received more than spent
}

TEST_CASE("rule precedence: first-funder outranks the net-loss rule")
{
    // b funds first and ends up a net loser; the attacker rules run first,
    // so b is an attacker, not a victim.
    const std::vector<TransactionRecord> log = {
        tx("t0", "0xa", "0xpot", 0, 100, 1000, TxKind::Creation),
        tx("t1", "0xb", "0xpot", ether, 50, 1010),
        tx("t2", "0xc", "0xpot", 2 * ether, 50, 1020),
    };
    const auto labels = label_actors(log);
    CHECK(role_of(labels, "0xb") == ActorRole::Attacker);
    CHECK(role_of(labels, "0xc") == ActorRole::Victim);
}

TEST_CASE("synthetic log with a neutral address matches brute-force rules")
{
    // d sends and receives exactly the same amount with zero fees.
    const std::vector<TransactionRecord> log = {
        tx("t0", "0xa", "0xpot", 0, 100, 1000, TxKind::Creation),
        tx("t1", "0xb", "0xpot", ether, 10, 1010),
        tx("t2", "0xpot", "0xb", 2 * ether, 0, 1020),
        tx("t3", "0xc", "0xpot", ether, 25, 1030),
        tx("t4", "0xd", "0xpot", ether / 4, 0, 1040),
        tx("t5", "0xpot", "0xd", ether / 4, 0, 1050),
    };
    const auto labels = label_actors(log);

    // Independent rule evaluation: recompute flows directly.
    std::map<std::string, std::pair<Wei, Wei>> flows; // received, spent
    for (const auto& t : log)
    {
        if (t.from == "0xpot")
            flows[t.to].first += t.value;
        else
        {
            if (t.to == "0xpot")
                flows[t.from].second += t.value;
            flows[t.from].second += t.fee;
        }
    }
    for (const auto& [address, rs] : flows)
    {
        ActorRole expected;
        if (address == "0xa")
            expected = ActorRole::Attacker; // creator
        else if (address == "0xb")
            expected = ActorRole::Attacker; // first funder (and net gain)
        else if (rs.first > rs.second)
            expected = ActorRole::Attacker;
        else if (rs.first < rs.second)
            expected = ActorRole::Victim;
        else
            expected = ActorRole::Neutral;
        CAPTURE(address);
        CHECK(role_of(labels, address) == expected);
    }
    CHECK(role_of(labels, "0xd") == ActorRole::Neutral);

    // Attacker and victim sets are disjoint by construction of roles.
    std::set<std::string> attackers, victims;
    for (const auto& label : labels)
    {
        if (label.role == ActorRole::Attacker)
            attackers.insert(label.address);
        if (label.role == ActorRole::Victim)
            victims.insert(label.address);
    }
    for (const auto& a : attackers)
        CHECK_FALSE(victims.count(a));
}

TEST_CASE("status covers the full victim/balance truth table")
{
    std::vector<ActorLabel> with_victim = {{"0xv", ActorRole::Victim, "net loss"}};
    std::vector<ActorLabel> no_victim = {{"0xa", ActorRole::Attacker, "creator"}};

    CHECK(classify_status({}, with_victim, 0).state == HoneypotState::Successful);
    CHECK(classify_status({}, with_victim, ether).state == HoneypotState::Successful);
    CHECK(classify_status({}, no_victim, 0).state == HoneypotState::Aborted);
    CHECK(classify_status({}, no_victim, ether / 10).state == HoneypotState::Active);
}

TEST_CASE("profitability follows received minus spent-plus-fees")
{
    const std::vector<TransactionRecord> log = {
        tx("t0", "0xa", "0xpot", 0, ether / 20, 1000, TxKind::Creation), // fee 0.05
        tx("t1", "0xa", "0xpot", ether, ether / 20, 1010),               // spends 1.0, fee 0.05
        tx("t2", "0xv", "0xpot", ether, 0, 1020),
        tx("t3", "0xpot", "0xa", 2 * ether, 0, 1030),                    // receives 2.0
    };
    const auto labels = label_actors(log);
    const auto stat = profitability(log, {"0xa"}, labels);
    CHECK(stat.profit == 2 * ether - (ether + ether / 10)); // 0.9 ether
    CHECK(wei_to_ether_string(stat.profit) == "0.9");
    REQUIRE(stat.time_to_first_exploitation.has_value());
    CHECK(*stat.time_to_first_exploitation == 20);
}

TEST_CASE("a honeypot with no victim loses the fees")
{
    const std::vector<TransactionRecord> log = {
        tx("t0", "0xa", "0xpot", 0, ether / 20, 1000, TxKind::Creation), // fee 0.05
    };
    const auto labels = label_actors(log);
    const auto stat = profitability(log, {"0xa"}, labels);
    CHECK(wei_to_ether_string(stat.profit) == "-0.05");
    CHECK_FALSE(stat.time_to_first_exploitation.has_value());
}

TEST_CASE("synthetic 10-tx log matches the brute-force summation oracle")
{
    std::vector<TransactionRecord> log = {
        tx("t0", "0xa", "0xpot", 0, 21000, 1000, TxKind::Creation),
        tx("t1", "0xa", "0xpot", ether, 40000, 1005),
        tx("t2", "0xv1", "0xpot", 2 * ether, 31000, 1010),
        tx("t3", "0xv2", "0xpot", ether / 2, 29000, 1015),
        tx("t4", "0xpot", "0xa", ether, 0, 1020, TxKind::Internal),
        tx("t5", "0xv1", "0xpot", ether / 4, 27000, 1025),
        tx("t6", "0xpot", "0xa", 2 * ether, 0, 1030, TxKind::Internal),
        tx("t7", "0xa", "0xpot", ether / 10, 23000, 1035),
        tx("t8", "0xpot", "0xa", ether / 2, 0, 1040, TxKind::Internal),
        tx("t9", "0xa", "0xpot", 0, 22000, 1045),
    };
    const auto labels = label_actors(log);
    const auto stat = profitability(log, {"0xa"}, labels);

    // Spreadsheet-style recomputation, one column at a time.
    Wei received = 0, spent = 0, fees = 0;
    for (const auto& t : log)
    {
        if (t.from == "0xpot" && t.to == "0xa")
            received += t.value;
        if (t.from == "0xa")
        {
            fees += t.fee;
            if (t.to == "0xpot")
                spent += t.value;
        }
    }
    CHECK(stat.profit == received - (spent + fees));
    REQUIRE(stat.time_to_first_exploitation.has_value());
    CHECK(*stat.time_to_first_exploitation == 10); // t2 at 1010 vs creation at 1000
}

TEST_CASE("lifespan appears only for drained, victimless honeypots")
{
    const std::vector<TransactionRecord> aborted = {
        tx("t0", "0xa", "0xpot", 0, 1000, 1000, TxKind::Creation),
        tx("t1", "0xa", "0xpot", ether, 100, 1100),
        tx("t2", "0xpot", "0xa", ether, 0, 5000, TxKind::Internal),
    };
    auto labels = label_actors(aborted);
    auto stat = profitability(aborted, {"0xa"}, labels);
    REQUIRE(stat.lifespan_seconds.has_value());
    CHECK(*stat.lifespan_seconds == 4000);

    const std::vector<TransactionRecord> active = {
        tx("t0", "0xa", "0xpot", 0, 1000, 1000, TxKind::Creation),
        tx("t1", "0xa", "0xpot", ether, 100, 1100),
    };
    labels = label_actors(active);
    stat = profitability(active, {"0xa"}, labels);
    CHECK_FALSE(stat.lifespan_seconds.has_value());
}

TEST_CASE("transaction log parsing accepts string and numeric amounts")
{
    std::istringstream in(
        R"({"tx":"t0","from":"0xa","to":"0xpot","value":"2000000000000000000","fee":100,"timestamp":5,"kind":"creation","contract":"0xpot"})"
        "\n\n"
        R"({"tx":"t1","from":"0xb","to":"0xpot","value":7,"fee":"3","timestamp":6,"kind":"call","contract":"0xpot"})"
        "\n");
    const auto txs = parse_transaction_log(in);
    REQUIRE(txs.size() == 2);
    CHECK(txs[0].kind == TxKind::Creation);
    CHECK(txs[0].value == 2 * ether);
    CHECK(txs[1].value == 7);
    CHECK(txs[1].fee == 3);

    std::istringstream bad("{not json}\n");
    CHECK_THROWS_AS(parse_transaction_log(bad), std::runtime_error);
}

TEST_CASE("empty log labels nothing")
{
    CHECK(label_actors({}).empty());
}

// --- similarity -------------------------------------------------------------

namespace {

// Full-matrix reference implementation, kept separate from the two-row
// production version.
double reference_similarity(const std::vector<uint8_t>& x, const std::vector<uint8_t>& y)
{
    if (x.empty() && y.empty())
        return 1.0;
    std::vector<std::vector<size_t>> d(x.size() + 1, std::vector<size_t>(y.size() + 1));
    for (size_t i = 0; i <= x.size(); ++i)
        d[i][0] = i;
    for (size_t j = 0; j <= y.size(); ++j)
        d[0][j] = j;
    for (size_t i = 1; i <= x.size(); ++i)
        for (size_t j = 1; j <= y.size(); ++j)
            d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                d[i - 1][j - 1] + (x[i - 1] == y[j - 1] ? 0u : 1u)});
    const double gld = static_cast<double>(d[x.size()][y.size()]);
    return 1.0 - 2.0 * gld / (double(x.size()) + double(y.size()) + gld);
}

Bytecode bytes_of(std::initializer_list<uint8_t> list)
{
    Bytecode code;
    code.bytes = list;
    return code;
}

} // namespace

TEST_CASE("similarity endpoints")
{
    CHECK(bytecode_similarity(bytes_of({1, 2, 3}), bytes_of({1, 2, 3})) == 1.0);
    CHECK(bytecode_similarity(Bytecode{}, Bytecode{}) == 1.0);
    CHECK(bytecode_similarity(Bytecode{}, bytes_of({1, 2, 3})) == 0.0);
    CHECK(bytecode_similarity(bytes_of({9}), Bytecode{}) == 0.0);
}

TEST_CASE("similarity of related honeypot variants matches the reference DP")
{
    const auto dir = std::filesystem::path(HONEYSCAN_SOURCE_DIR) / "corpus/bytecode";
    const auto a = Bytecode::from_file(dir / "gift_1_eth.hex");
    const auto b = Bytecode::from_file(dir / "gift_1_eth_fixed.hex");
    const double fast = bytecode_similarity(a, b);
    const double slow = reference_similarity(a.bytes, b.bytes);
    CHECK(fast == doctest::Approx(slow).epsilon(1e-12));
    CHECK(fast > 0.5); // same family
    CHECK(fast < 1.0);
}

TEST_CASE("similarity properties on random pairs")
{
    std::mt19937 rng(99);
    std::uniform_int_distribution<int> len(0, 48);
    std::uniform_int_distribution<int> byte(0, 7); // narrow alphabet: collisions likely
    for (int iter = 0; iter < 150; ++iter)
    {
        Bytecode a, b;
        const int la = len(rng), lb = len(rng);
        for (int i = 0; i < la; ++i)
            a.bytes.push_back(static_cast<uint8_t>(byte(rng)));
        for (int i = 0; i < lb; ++i)
            b.bytes.push_back(static_cast<uint8_t>(byte(rng)));
        const double ab = bytecode_similarity(a, b);
        const double ba = bytecode_similarity(b, a);
        CHECK(ab == ba);
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0);
        CHECK((ab == 1.0) == (a.bytes == b.bytes));
        CHECK(ab == doctest::Approx(reference_similarity(a.bytes, b.bytes)).epsilon(1e-12));
    }
}

TEST_CASE("wei formatting")
{
    CHECK(wei_to_ether_string(ether) == "1");
    CHECK(wei_to_ether_string(ether / 2) == "0.5");
    CHECK(wei_to_ether_string(Wei(-5) * (ether / 100)) == "-0.05");
    CHECK(wei_to_ether_string(0) == "0");
    CHECK(wei_to_string(Wei("123456789123456789123")) == "123456789123456789123");
}
