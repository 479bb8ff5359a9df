// honeyscan: honeypot detection for Ethereum smart contracts
// Copyright 2026 The honeyscan Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "honeyscan/bytecode.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace honeyscan {

/// Signed wei amounts; flows can exceed 64 bits but stay far below 2^127.
using Wei = boost::multiprecision::int128_t;

enum class TxKind : uint8_t { Creation, Call, Internal };

/// One row of an offline transaction log for a single honeypot.
struct TransactionRecord {
    std::string tx_id;
    std::string from;
    std::string to;
    Wei value = 0;
    Wei fee = 0;
    int64_t timestamp = 0; // seconds since epoch
    TxKind kind = TxKind::Call;
    std::string contract; // address of the honeypot the log belongs to
};

enum class ActorRole : uint8_t { Attacker, Victim, Neutral };

const char* to_string(ActorRole role);

struct ActorLabel {
    std::string address;
    ActorRole role = ActorRole::Neutral;
    std::string basis; // which rule fired
};

enum class HoneypotState : uint8_t { Successful, Aborted, Active };

const char* to_string(HoneypotState state);

struct HoneypotStatus {
    HoneypotState state = HoneypotState::Active;
    size_t victim_count = 0;
    Wei final_balance = 0;
};

struct ProfitStat {
    Wei profit = 0; // received - (spent + fees) over the attacker addresses
    std::optional<int64_t> lifespan_seconds;            // aborted honeypots only
    std::optional<int64_t> time_to_first_exploitation;  // deployment -> first victim tx
};

/// Parses line-delimited JSON transaction records (one object per line).
/// Lines must carry: tx, from, to, value, fee, timestamp, kind, contract.
std::vector<TransactionRecord> parse_transaction_log(std::istream& in);

/// Labels every address as attacker, victim, or neutral. Attacker rules in
/// order: contract creator; first to send ether; received more than spent.
/// The victim rule applies only to addresses no attacker rule matched.
std::vector<ActorLabel> label_actors(std::vector<TransactionRecord> txs);

HoneypotStatus classify_status(const std::vector<TransactionRecord>& txs,
    const std::vector<ActorLabel>& labels, const Wei& final_balance);

ProfitStat profitability(const std::vector<TransactionRecord>& txs,
    const std::vector<std::string>& attacker_addresses,
    const std::vector<ActorLabel>& labels);

/// Similarity in [0,1] derived from the length-normalized edit distance
/// (d = 2*GLD / (|a| + |b| + GLD)); two empty sequences are fully similar.
double bytecode_similarity(const Bytecode& a, const Bytecode& b);

std::string wei_to_string(const Wei& wei);
std::string wei_to_ether_string(const Wei& wei);

} // namespace honeyscan
