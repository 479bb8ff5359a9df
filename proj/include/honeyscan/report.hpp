// honeyscan: honeypot detection for Ethereum smart contracts
// Copyright 2026 The honeyscan Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "honeyscan/cashflow.hpp"
#include "honeyscan/detectors.hpp"
#include "honeyscan/state.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace honeyscan {

enum class ReportFormat : uint8_t { Json, Text };

struct BatchOptions {
    RunConfig run;
    ReportFormat format = ReportFormat::Json;
    unsigned jobs = 0; // 0 = hardware concurrency
    std::optional<std::filesystem::path> debug_dir;
    std::vector<std::string> solver_command; // empty = default transport
};

struct AnalysisReport {
    std::string contract_id;   // input file name (or caller-supplied tag)
    std::string bytecode_hash; // keccak-256 of the runtime bytes
    std::optional<std::string> duplicate_of; // id of the analyzed twin
    std::optional<std::string> error;        // per-file failure, batch continues

    CashFlowVerdict cashflow;
    std::vector<Finding> findings;

    struct Stats {
        size_t paths_explored = 0;
        double coverage = 0.0;
        int64_t wall_time_ms = 0;
        bool completed = true;
    } stats;
};

/// Analyzes one file or every regular file in a directory. Inputs that decode
/// to the same bytecode are analyzed once; later occurrences share the result
/// and point at the first via `duplicate_of`. Throws SolverUnavailable when
/// no solver transport can be started.
std::vector<AnalysisReport> analyze_path(const std::filesystem::path& input,
    const BatchOptions& options);

/// Stable-field-order serialization. JSON is one document with a schema
/// version; text is one summary line per contract.
std::string emit_report(const std::vector<AnalysisReport>& reports, ReportFormat format);

bool any_file_error(const std::vector<AnalysisReport>& reports);
bool any_finding(const std::vector<AnalysisReport>& reports);

} // namespace honeyscan
