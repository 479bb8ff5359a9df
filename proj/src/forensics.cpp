// honeyscan: honeypot detection for Ethereum smart contracts
// Copyright 2026 The honeyscan Authors.
// SPDX-License-Identifier: Apache-2.0

#include "honeyscan/forensics.hpp"

#include <json.hpp>

#include <algorithm>
#include <istream>
#include <map>
#include <set>
#include <stdexcept>

namespace honeyscan {

const char* to_string(ActorRole role)
{
    switch (role)
    {
    case ActorRole::Attacker: return "attacker";
    case ActorRole::Victim: return "victim";
    case ActorRole::Neutral: return "neutral";
    }
    return "?";
}

const char* to_string(HoneypotState state)
{
    switch (state)
    {
    case HoneypotState::Successful: return "successful";
    case HoneypotState::Aborted: return "aborted";
    case HoneypotState::Active: return "active";
    }
    return "?";
}

namespace {

Wei parse_wei(const nlohmann::json& v, const char* field)
{
    if (v.is_string())
        return Wei(v.get<std::string>());
    if (v.is_number_unsigned())
        return Wei(v.get<uint64_t>());
    if (v.is_number_integer())
        return Wei(v.get<int64_t>());
    throw std::runtime_error(std::string("field '") + field + "' must be a number or string");
}

void sort_chronologically(std::vector<TransactionRecord>& txs)
{
    std::stable_sort(txs.begin(), txs.end(),
        [](const TransactionRecord& a, const TransactionRecord& b) {
            if (a.timestamp != b.timestamp)
                return a.timestamp < b.timestamp;
            return a.tx_id < b.tx_id; // total order: ties broken by tx id
        });
}

struct Flows {
    Wei received = 0; // ether the address got out of the honeypot
    Wei spent = 0;    // ether sent in, fees included
};

std::map<std::string, Flows> address_flows(const std::vector<TransactionRecord>& txs,
    const std::string& contract)
{
    std::map<std::string, Flows> flows;
    for (const auto& tx : txs)
    {
        if (tx.from == contract && !tx.to.empty())
            flows[tx.to].received += tx.value;
        if (tx.from != contract && !tx.from.empty())
        {
            auto& f = flows[tx.from];
            if (tx.to == contract)
                f.spent += tx.value;
            f.spent += tx.fee; // fees count toward spent throughout
        }
    }
    return flows;
}

} // namespace

std::vector<TransactionRecord> parse_transaction_log(std::istream& in)
{
    std::vector<TransactionRecord> txs;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        nlohmann::json row;
        try
        {
            row = nlohmann::json::parse(line);
        }
        catch (const nlohmann::json::parse_error& err)
        {
            throw std::runtime_error(
                "transaction log line " + std::to_string(line_no) + ": " + err.what());
        }
        TransactionRecord tx;
        tx.tx_id = row.value("tx", "");
        tx.from = row.value("from", "");
        tx.to = row.value("to", "");
        tx.value = row.contains("value") ? parse_wei(row["value"], "value") : Wei(0);
        tx.fee = row.contains("fee") ? parse_wei(row["fee"], "fee") : Wei(0);
        tx.timestamp = row.value("timestamp", int64_t(0));
        tx.contract = row.value("contract", "");
        const std::string kind = row.value("kind", "call");
        if (kind == "creation")
            tx.kind = TxKind::Creation;
        else if (kind == "internal")
            tx.kind = TxKind::Internal;
        else
            tx.kind = TxKind::Call;
        if (tx.value < 0 || tx.fee < 0)
            throw std::runtime_error(
                "transaction log line " + std::to_string(line_no) + ": negative value or fee");
        txs.push_back(std::move(tx));
    }
    return txs;
}

std::vector<ActorLabel> label_actors(std::vector<TransactionRecord> txs)
{
    std::vector<ActorLabel> labels;
    if (txs.empty())
        return labels;
    sort_chronologically(txs);

    const std::string contract = txs.front().contract;

    std::string creator;
    for (const auto& tx : txs)
        if (tx.kind == TxKind::Creation)
        {
            creator = tx.from;
            break;
        }

    std::string first_funder;
    for (const auto& tx : txs)
        if (tx.to == contract && tx.value > 0)
        {
            first_funder = tx.from;
            break;
        }

    const auto flows = address_flows(txs, contract);

    for (const auto& [address, flow] : flows)
    {
        ActorLabel label;
        label.address = address;
        if (address == creator)
        {
            label.role = ActorRole::Attacker;
            label.basis = "created the honeypot";
        }
        else if (address == first_funder)
        {
            label.role = ActorRole::Attacker;
            label.basis = "first to send ether";
        }
        else if (flow.received > flow.spent)
        {
            label.role = ActorRole::Attacker;
            label.basis = "received more than spent";
        }
        else if (flow.received < flow.spent)
        {
            label.role = ActorRole::Victim;
            label.basis = "received less than spent";
        }
        else
        {
            label.role = ActorRole::Neutral;
            label.basis = "balanced flows";
        }
        labels.push_back(std::move(label));
    }
    return labels;
}

HoneypotStatus classify_status(const std::vector<TransactionRecord>&,
    const std::vector<ActorLabel>& labels, const Wei& final_balance)
{
    HoneypotStatus status;
    status.final_balance = final_balance;
    for (const auto& label : labels)
        if (label.role == ActorRole::Victim)
            ++status.victim_count;

    if (status.victim_count > 0)
        status.state = HoneypotState::Successful;
    else if (final_balance == 0)
        status.state = HoneypotState::Aborted;
    else
        status.state = HoneypotState::Active;
    return status;
}

ProfitStat profitability(const std::vector<TransactionRecord>& txs_in,
    const std::vector<std::string>& attacker_addresses, const std::vector<ActorLabel>& labels)
{
    ProfitStat stat;
    if (txs_in.empty())
        return stat;
    std::vector<TransactionRecord> txs = txs_in;
    sort_chronologically(txs);
    const std::string contract = txs.front().contract;
    const std::set<std::string> attackers(attacker_addresses.begin(), attacker_addresses.end());
    std::set<std::string> victims;
    for (const auto& label : labels)
        if (label.role == ActorRole::Victim)
            victims.insert(label.address);

    std::optional<int64_t> deployed_at;
    std::optional<int64_t> first_victim_at;
    std::optional<int64_t> last_outflow_at;
    Wei running_balance = 0;

    Wei received = 0, spent = 0, fees = 0;
    for (const auto& tx : txs)
    {
        if (tx.kind == TxKind::Creation && !deployed_at)
            deployed_at = tx.timestamp;
        if (tx.to == contract)
            running_balance += tx.value;
        if (tx.from == contract)
        {
            running_balance -= tx.value;
            if (tx.value > 0)
                last_outflow_at = tx.timestamp;
        }
        if (!first_victim_at && victims.count(tx.from) && tx.to == contract && tx.value > 0)
            first_victim_at = tx.timestamp;

        if (attackers.count(tx.from))
        {
            fees += tx.fee;
            if (tx.to == contract)
                spent += tx.value;
        }
        if (tx.from == contract && attackers.count(tx.to))
            received += tx.value;
    }

    stat.profit = received - (spent + fees);
    if (deployed_at && first_victim_at)
        stat.time_to_first_exploitation = *first_victim_at - *deployed_at;
    // Lifespan applies to aborted honeypots: drained with no victim caught.
    if (victims.empty() && running_balance == 0 && deployed_at && last_outflow_at)
        stat.lifespan_seconds = *last_outflow_at - *deployed_at;
    return stat;
}

double bytecode_similarity(const Bytecode& a, const Bytecode& b)
{
    const auto& x = a.bytes;
    const auto& y = b.bytes;
    if (x.empty() && y.empty())
        return 1.0;

    // Two-row Levenshtein with unit costs.
    std::vector<size_t> prev(y.size() + 1), curr(y.size() + 1);
    for (size_t j = 0; j <= y.size(); ++j)
        prev[j] = j;
    for (size_t i = 1; i <= x.size(); ++i)
    {
        curr[0] = i;
        for (size_t j = 1; j <= y.size(); ++j)
        {
            const size_t subst = prev[j - 1] + (x[i - 1] == y[j - 1] ? 0 : 1);
            curr[j] = std::min({prev[j] + 1, curr[j - 1] + 1, subst});
        }
        std::swap(prev, curr);
    }
    const double gld = static_cast<double>(prev[y.size()]);
    const double normalized = 2.0 * gld / (double(x.size()) + double(y.size()) + gld);
    return 1.0 - normalized;
}

std::string wei_to_string(const Wei& wei)
{
    return wei.str();
}

std::string wei_to_ether_string(const Wei& wei)
{
    static const Wei one_ether = Wei("1000000000000000000");
    const bool negative = wei < 0;
    const Wei magnitude = negative ? Wei(-wei) : wei;
    const Wei whole = magnitude / one_ether;
    const Wei frac = magnitude % one_ether;
    std::string text = (negative ? "-" : "") + whole.str();
    if (frac != 0)
    {
        std::string digits = frac.str();
        digits.insert(digits.begin(), 18 - digits.size(), '0');
        while (!digits.empty() && digits.back() == '0')
            digits.pop_back();
        text += "." + digits;
    }
    return text;
}

} // namespace honeyscan
