// honeyscan: honeypot detection for Ethereum smart contracts
// Copyright 2026 The honeyscan Authors.
// SPDX-License-Identifier: Apache-2.0

#include "honeyscan/report.hpp"
#include "honeyscan/engine.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

namespace honeyscan {

namespace {

struct WorkItem {
    std::string id;      // first input with this bytecode
    Bytecode code;
    std::vector<size_t> report_slots; // indices of reports sharing the result
};

struct WorkResult {
    CashFlowVerdict cashflow;
    std::vector<Finding> findings;
    AnalysisReport::Stats stats;
    std::optional<std::string> dot;        // debug CFG rendering
    std::optional<std::string> path_dump;  // debug path listing
};

WorkResult analyze_one(const Bytecode& code, const RunConfig& config, SolverGateway& solver,
    bool want_debug)
{
    WorkResult result;
    const auto began = std::chrono::steady_clock::now();

    ExprPool pool;
    AnalysisArtifacts artifacts = explore(code, pool, solver, config);
    result.cashflow = analyze_cashflow(artifacts, solver);
    result.findings = run_all_detectors(artifacts, result.cashflow, pool, solver);

    result.stats.paths_explored = artifacts.paths.size();
    result.stats.coverage = artifacts.coverage;
    result.stats.completed = artifacts.complete;
    result.stats.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - began)
                                    .count();

    if (want_debug)
    {
        result.dot = to_dot(artifacts.cfg, artifacts.seq);
        std::ostringstream dump;
        for (const auto& path : artifacts.paths)
        {
            dump << "path " << path.id << " " << to_string(path.terminator) << " "
                 << to_string(path.feasibility) << " blocks:";
            for (uint32_t b : path.blocks)
                dump << " " << b;
            dump << "\n  conditions:";
            for (const auto& cond : path.conditions)
                dump << " " << cond.to_string();
            dump << "\n";
        }
        result.path_dump = dump.str();
    }
    return result;
}

} // namespace

std::vector<AnalysisReport> analyze_path(const std::filesystem::path& input,
    const BatchOptions& options)
{
    namespace fs = std::filesystem;

    // Gather inputs in a deterministic order.
    std::vector<fs::path> files;
    if (fs::is_directory(input))
    {
        for (const auto& entry : fs::directory_iterator(input))
            if (entry.is_regular_file())
                files.push_back(entry.path());
        std::sort(files.begin(), files.end());
    }
    else
    {
        files.push_back(input);
    }

    std::vector<AnalysisReport> reports(files.size());
    std::vector<WorkItem> work;
    std::map<std::string, size_t> by_hash; // bytecode hash -> work index

    for (size_t i = 0; i < files.size(); ++i)
    {
        AnalysisReport& report = reports[i];
        report.contract_id = files[i].filename().string();
        Bytecode code;
        try
        {
            code = Bytecode::from_file(files[i]);
        }
        catch (const std::exception& err)
        {
            report.error = err.what();
            continue;
        }
        report.bytecode_hash = code.hash_hex();
        const auto it = by_hash.find(report.bytecode_hash);
        if (it != by_hash.end())
        {
            work[it->second].report_slots.push_back(i);
            report.duplicate_of = work[it->second].id;
            continue;
        }
        by_hash.emplace(report.bytecode_hash, work.size());
        WorkItem item;
        item.id = report.contract_id;
        item.code = std::move(code);
        item.report_slots = {i};
        work.push_back(std::move(item));
    }

    // One engine and one solver session per worker; work items are claimed
    // off a shared counter. Report assembly happens after the join.
    const unsigned jobs = std::max(1u,
        options.jobs ? options.jobs : std::thread::hardware_concurrency());
    std::vector<WorkResult> results(work.size());
    std::vector<std::string> failures(work.size());
    std::atomic<size_t> next{0};
    std::atomic<bool> solver_down{false};

    auto worker = [&]() {
        std::unique_ptr<SolverGateway> solver;
        while (true)
        {
            const size_t index = next.fetch_add(1);
            if (index >= work.size() || solver_down.load())
                return;
            try
            {
                if (!solver)
                {
                    SolverGateway::Options solver_opts;
                    solver_opts.command = options.solver_command;
                    solver_opts.timeout_ms = options.run.solver_timeout_ms;
                    solver = std::make_unique<SolverGateway>(std::move(solver_opts));
                }
                results[index] = analyze_one(work[index].code, options.run, *solver,
                    options.debug_dir.has_value());
            }
            catch (const SolverUnavailable&)
            {
                solver_down.store(true);
                return;
            }
            catch (const std::exception& err)
            {
                failures[index] = err.what();
            }
        }
    };

    if (jobs == 1 || work.size() <= 1)
    {
        worker();
    }
    else
    {
        std::vector<std::thread> pool;
        for (unsigned j = 0; j < std::min<size_t>(jobs, work.size()); ++j)
            pool.emplace_back(worker);
        for (auto& thread : pool)
            thread.join();
    }
    if (solver_down.load())
        throw SolverUnavailable("no solver transport available");

    for (size_t w = 0; w < work.size(); ++w)
    {
        for (size_t slot : work[w].report_slots)
        {
            AnalysisReport& report = reports[slot];
            if (!failures[w].empty())
            {
                report.error = failures[w];
                continue;
            }
            report.cashflow = results[w].cashflow;
            report.findings = results[w].findings;
            report.stats = results[w].stats;
        }
        if (options.debug_dir && failures[w].empty())
        {
            std::filesystem::create_directories(*options.debug_dir);
            const auto stem = std::filesystem::path(work[w].id).stem().string();
            if (results[w].dot)
                std::ofstream(*options.debug_dir / (stem + ".dot")) << *results[w].dot;
            if (results[w].path_dump)
                std::ofstream(*options.debug_dir / (stem + ".paths.txt")) << *results[w].path_dump;
        }
    }
    return reports;
}

namespace {

nlohmann::ordered_json finding_to_json(const Finding& finding)
{
    nlohmann::ordered_json j;
    j["detector"] = to_string(finding.detector);
    j["calls"] = finding.call_ids;
    j["paths"] = finding.path_ids;
    j["blocks"] = finding.block_offsets;
    j["storage_keys"] = finding.storage_keys;
    j["note"] = finding.note;
    return j;
}

} // namespace

std::string emit_report(const std::vector<AnalysisReport>& reports, ReportFormat format)
{
    if (format == ReportFormat::Text)
    {
        std::ostringstream out;
        for (const auto& report : reports)
        {
            out << report.contract_id << ": ";
            if (report.error)
            {
                out << "error: " << *report.error;
            }
            else if (!report.cashflow.is_cashflow_contract)
            {
                out << "filtered (not a cash-flow contract)";
            }
            else if (report.findings.empty())
            {
                out << "clean";
            }
            else
            {
                std::set<std::string> ids;
                for (const auto& finding : report.findings)
                    ids.insert(to_string(finding.detector));
                bool first = true;
                for (const auto& id : ids)
                {
                    out << (first ? "" : ", ") << id;
                    first = false;
                }
            }
            if (report.duplicate_of)
                out << " (duplicate of " << *report.duplicate_of << ")";
            out << "\n";
        }
        return out.str();
    }

    nlohmann::ordered_json doc;
    doc["schema"] = 1;
    doc["reports"] = nlohmann::ordered_json::array();
    for (const auto& report : reports)
    {
        nlohmann::ordered_json j;
        j["contract"] = report.contract_id;
        j["bytecode_hash"] = report.bytecode_hash;
        j["duplicate_of"] =
            report.duplicate_of ? nlohmann::ordered_json(*report.duplicate_of) : nullptr;
        if (report.error)
        {
            j["error"] = *report.error;
            doc["reports"].push_back(std::move(j));
            continue;
        }
        nlohmann::ordered_json cashflow;
        cashflow["can_receive"] = report.cashflow.can_receive;
        cashflow["can_transfer"] = report.cashflow.can_transfer;
        cashflow["is_cashflow_contract"] = report.cashflow.is_cashflow_contract;
        cashflow["via_selfdestruct"] = report.cashflow.transfer_via_selfdestruct;
        cashflow["partial"] = report.cashflow.partial;
        j["cashflow"] = std::move(cashflow);
        j["findings"] = nlohmann::ordered_json::array();
        for (const auto& finding : report.findings)
            j["findings"].push_back(finding_to_json(finding));
        nlohmann::ordered_json stats;
        stats["paths"] = report.stats.paths_explored;
        stats["coverage"] = report.stats.coverage;
        stats["wall_time_ms"] = report.stats.wall_time_ms;
        stats["completed"] = report.stats.completed;
        j["stats"] = std::move(stats);
        doc["reports"].push_back(std::move(j));
    }
    return doc.dump(2) + "\n";
}

bool any_file_error(const std::vector<AnalysisReport>& reports)
{
    return std::any_of(reports.begin(), reports.end(),
        [](const AnalysisReport& r) { return r.error.has_value(); });
}

bool any_finding(const std::vector<AnalysisReport>& reports)
{
    return std::any_of(reports.begin(), reports.end(),
        [](const AnalysisReport& r) { return !r.findings.empty(); });
}

} // namespace honeyscan
