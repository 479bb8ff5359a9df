// honeyscan: honeypot detection for Ethereum smart contracts
// Copyright 2026 The honeyscan Authors.
// SPDX-License-Identifier: Apache-2.0

#include "honeyscan/forensics.hpp"
#include "honeyscan/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace honeyscan;

int run_analyze(const std::vector<std::string>& inputs, BatchOptions options,
    const std::string& out_file, bool fail_on_findings)
{
    std::vector<AnalysisReport> reports;
    try
    {
        for (const auto& input : inputs)
        {
            auto batch = analyze_path(input, options);
            reports.insert(reports.end(), std::make_move_iterator(batch.begin()),
                std::make_move_iterator(batch.end()));
        }
    }
    catch (const SolverUnavailable& err)
    {
        std::cerr << "fatal: " << err.what() << "\n"
                  << "hint: set HONEYSCAN_SOLVER to a z3-compatible binary or run\n"
                  << "      `npm install` in the solver/ directory\n";
        return 1;
    }
    catch (const SolverCrashed& err)
    {
        std::cerr << "fatal: " << err.what() << "\n";
        return 1;
    }

    const std::string rendered = emit_report(reports, options.format);
    if (out_file.empty())
    {
        std::cout << rendered;
    }
    else
    {
        std::ofstream out(out_file);
        if (!out)
        {
            std::cerr << "fatal: cannot write " << out_file << "\n";
            return 1;
        }
        out << rendered;
    }

    if (fail_on_findings && any_finding(reports))
        return 3;
    return any_file_error(reports) ? 2 : 0;
}

int run_forensics(const std::string& tx_file, const std::string& bytecode_dir,
    bool with_similarity, const std::string& balance_override, const std::string& out_file)
{
    std::ifstream in(tx_file);
    if (!in)
    {
        std::cerr << "fatal: cannot read " << tx_file << "\n";
        return 1;
    }
    std::vector<TransactionRecord> txs;
    try
    {
        txs = parse_transaction_log(in);
    }
    catch (const std::exception& err)
    {
        std::cerr << "fatal: " << err.what() << "\n";
        return 1;
    }

    const auto labels = label_actors(txs);

    // Final balance: net flow of the log unless overridden.
    Wei balance = 0;
    if (!balance_override.empty())
    {
        balance = Wei(balance_override);
    }
    else if (!txs.empty())
    {
        const std::string contract = txs.front().contract;
        for (const auto& tx : txs)
        {
            if (tx.to == contract)
                balance += tx.value;
            if (tx.from == contract)
                balance -= tx.value;
        }
    }

    const auto status = classify_status(txs, labels, balance);
    std::vector<std::string> attackers;
    for (const auto& label : labels)
        if (label.role == ActorRole::Attacker)
            attackers.push_back(label.address);
    const auto profit = profitability(txs, attackers, labels);

    nlohmann::ordered_json doc;
    doc["schema"] = 1;
    doc["labels"] = nlohmann::ordered_json::array();
    for (const auto& label : labels)
    {
        nlohmann::ordered_json j;
        j["address"] = label.address;
        j["role"] = to_string(label.role);
        j["basis"] = label.basis;
        doc["labels"].push_back(std::move(j));
    }
    doc["status"] = to_string(status.state);
    doc["victims"] = status.victim_count;
    doc["final_balance_wei"] = wei_to_string(status.final_balance);
    doc["profit_wei"] = wei_to_string(profit.profit);
    doc["profit_ether"] = wei_to_ether_string(profit.profit);
    doc["lifespan_seconds"] = profit.lifespan_seconds
        ? nlohmann::ordered_json(*profit.lifespan_seconds)
        : nlohmann::ordered_json(nullptr);
    doc["time_to_first_exploitation_seconds"] = profit.time_to_first_exploitation
        ? nlohmann::ordered_json(*profit.time_to_first_exploitation)
        : nlohmann::ordered_json(nullptr);

    if (with_similarity && !bytecode_dir.empty())
    {
        std::vector<std::pair<std::string, Bytecode>> codes;
        std::vector<std::filesystem::path> files;
        for (const auto& entry : std::filesystem::directory_iterator(bytecode_dir))
            if (entry.is_regular_file())
                files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const auto& file : files)
        {
            try
            {
                codes.emplace_back(file.filename().string(), Bytecode::from_file(file));
            }
            catch (const std::exception&)
            {
                // non-bytecode files in the directory are skipped
            }
        }
        nlohmann::ordered_json matrix;
        matrix["names"] = nlohmann::ordered_json::array();
        for (const auto& [name, code] : codes)
            matrix["names"].push_back(name);
        matrix["similarity"] = nlohmann::ordered_json::array();
        for (size_t i = 0; i < codes.size(); ++i)
        {
            nlohmann::ordered_json row = nlohmann::ordered_json::array();
            for (size_t j = 0; j < codes.size(); ++j)
                row.push_back(bytecode_similarity(codes[i].second, codes[j].second));
            matrix["similarity"].push_back(std::move(row));
        }
        doc["bytecode_similarity"] = std::move(matrix);
    }

    const std::string rendered = doc.dump(2) + "\n";
    if (out_file.empty())
    {
        std::cout << rendered;
    }
    else
    {
        std::ofstream out(out_file);
        if (!out)
        {
            std::cerr << "fatal: cannot write " << out_file << "\n";
            return 1;
        }
        out << rendered;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"honeypot detection for Ethereum smart contracts"};
    app.require_subcommand(1);

    // analyze -----------------------------------------------------------------
    auto* analyze = app.add_subcommand("analyze",
        "symbolically analyze bytecode files or directories for honeypot traits");
    std::vector<std::string> inputs;
    analyze->add_option("inputs", inputs, "hex or binary bytecode files / directories")
        ->required();
    BatchOptions options;
    bool fast = false;
    bool fail_on_findings = false;
    std::string out_file;
    std::string format = "json";
    std::string debug_dir;
    analyze->add_option("--solver-timeout-ms", options.run.solver_timeout_ms,
        "per-query solver timeout (default 1000)");
    analyze->add_option("--timeout-s", options.run.global_timeout_s,
        "global exploration timeout per contract (default 1800)");
    analyze->add_option("--loop-limit", options.run.loop_limit, "loop bound (default 10)");
    analyze->add_option("--depth-limit", options.run.depth_limit,
        "branching depth bound (default 50)");
    analyze->add_option("--gas-limit", options.run.gas_limit,
        "gas bound for exploration (default 4000000)");
    analyze->add_option("--jobs", options.jobs, "parallel analyses (default: cores)");
    analyze->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
    analyze->add_option("--out", out_file, "write the report here instead of stdout");
    analyze->add_option("--debug-dir", debug_dir, "dump CFG DOT and path traces per contract");
    analyze->add_flag("--fail-on-findings", fail_on_findings,
        "exit nonzero when any finding is reported (CI use)");
    analyze->add_flag("--fast", fast, "desk profile: 60 s global timeout");

    // forensics -----------------------------------------------------------------
    auto* forensics = app.add_subcommand("forensics",
        "label actors and compute profitability from a transaction log");
    std::string tx_file, bytecode_dir, balance_override, forensics_out;
    bool with_similarity = false;
    forensics->add_option("transactions", tx_file, "line-delimited JSON transaction log")
        ->required();
    forensics->add_option("--bytecode-dir", bytecode_dir,
        "directory of bytecode files for the similarity matrix");
    forensics->add_flag("--similarity", with_similarity, "emit the pairwise similarity matrix");
    forensics->add_option("--final-balance", balance_override,
        "final balance in wei (default: net flow of the log)");
    forensics->add_option("--out", forensics_out, "write the report here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    if (analyze->parsed())
    {
        if (options.run.solver_timeout_ms <= 0 || options.run.global_timeout_s <= 0 ||
            options.run.loop_limit <= 0 || options.run.depth_limit <= 0 ||
            options.run.gas_limit == 0)
        {
            std::cerr << "fatal: limits must be strictly positive\n";
            return 1;
        }
        if (fast)
            options.run.global_timeout_s = 60;
        options.format = format == "text" ? ReportFormat::Text : ReportFormat::Json;
        if (!debug_dir.empty())
            options.debug_dir = debug_dir;
        return run_analyze(inputs, options, out_file, fail_on_findings);
    }
    return run_forensics(tx_file, bytecode_dir, with_similarity, balance_override, forensics_out);
}
