// honeyscan: honeypot detection for Ethereum smart contracts
// Copyright 2026 The honeyscan Authors.
// SPDX-License-Identifier: Apache-2.0

#include "honeyscan/report.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>

using namespace honeyscan;

namespace {

std::filesystem::path corpus_file(const std::string& name)
{
    return std::filesystem::path(HONEYSCAN_SOURCE_DIR) / "corpus/bytecode" / (name + ".hex");
}

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& tag)
    {
        path = std::filesystem::temp_directory_path() / ("honeyscan_" + tag);
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

BatchOptions fast_options()
{
    BatchOptions options;
    options.run.global_timeout_s = 60;
    options.jobs = 1;
    return options;
}

} // namespace

TEST_CASE("empty report serializes to the empty schema document")
{
    const std::string text = emit_report({}, ReportFormat::Json);
    const auto doc = nlohmann::json::parse(text);
    CHECK(doc["schema"] == 1);
    CHECK(doc["reports"].is_array());
    CHECK(doc["reports"].empty());
}

TEST_CASE("empty directory analyzes to an empty report list")
{
    TempDir dir("empty_dir");
    const auto reports = analyze_path(dir.path, fast_options());
    CHECK(reports.empty());
}

TEST_CASE("duplicate bytecode is analyzed once and marked")
{
    TempDir dir("dup");
    std::filesystem::copy_file(corpus_file("gift_1_eth"), dir.path / "a.hex");
    std::filesystem::copy_file(corpus_file("gift_1_eth"), dir.path / "b.hex");
    const auto reports = analyze_path(dir.path, fast_options());
    REQUIRE(reports.size() == 2);
    CHECK(reports[0].contract_id == "a.hex");
    CHECK_FALSE(reports[0].duplicate_of.has_value());
    REQUIRE(reports[1].duplicate_of.has_value());
    CHECK(*reports[1].duplicate_of == "a.hex");
    // both entries share the analysis result
    CHECK(reports[0].bytecode_hash == reports[1].bytecode_hash);
    REQUIRE(reports[0].findings.size() == reports[1].findings.size());
    CHECK(reports[0].findings.size() == 1);
    CHECK(to_string(reports[0].findings[0].detector) == std::string("HSU"));
}

TEST_CASE("single hidden-state-update contract reports exactly [\"HSU\"]")
{
    const auto reports = analyze_path(corpus_file("gift_1_eth"), fast_options());
    REQUIRE(reports.size() == 1);
    const std::string text = emit_report(reports, ReportFormat::Json);
    const auto doc = nlohmann::json::parse(text);
    REQUIRE(doc["reports"].size() == 1);
    const auto& entry = doc["reports"][0];
    REQUIRE(entry["findings"].size() == 1);
    CHECK(entry["findings"][0]["detector"] == "HSU");
    CHECK(entry["cashflow"]["is_cashflow_contract"] == true);
    CHECK(entry["stats"]["completed"] == true);
}

TEST_CASE("unreadable entries become per-file errors and the batch continues")
{
    TempDir dir("errs");
    std::ofstream(dir.path / "bad.hex") << "zz-not-hex";
    std::filesystem::copy_file(corpus_file("gate_sink"), dir.path / "ok.hex");
    const auto reports = analyze_path(dir.path, fast_options());
    REQUIRE(reports.size() == 2);
    CHECK(reports[0].error.has_value()); // bad.hex sorts first
    CHECK_FALSE(reports[1].error.has_value());
    CHECK(any_file_error(reports));

    const std::string text = emit_report(reports, ReportFormat::Text);
    CHECK(text.find("error:") != std::string::npos);
}

TEST_CASE("text format yields one line per contract")
{
    TempDir dir("text");
    std::filesystem::copy_file(corpus_file("gate_counter"), dir.path / "counter.hex");
    std::filesystem::copy_file(corpus_file("for_test"), dir.path / "fortest.hex");
    const auto reports = analyze_path(dir.path, fast_options());
    const std::string text = emit_report(reports, ReportFormat::Text);
    CHECK(std::count(text.begin(), text.end(), '\n') == 2);
    CHECK(text.find("counter.hex: filtered") != std::string::npos);
    CHECK(text.find("fortest.hex: TDO") != std::string::npos);
}

TEST_CASE("findings imply the cash-flow gate was passed")
{
    TempDir dir("gate");
    for (const char* name : {"multiplicator", "gate_counter", "private_bank"})
        std::filesystem::copy_file(corpus_file(name), dir.path / (std::string(name) + ".hex"));
    const auto reports = analyze_path(dir.path, fast_options());
    for (const auto& report : reports)
        if (!report.findings.empty())
            CHECK(report.cashflow.is_cashflow_contract);
}

TEST_CASE("debug dir receives CFG and path dumps")
{
    TempDir dir("debug_in");
    TempDir debug("debug_out");
    std::filesystem::copy_file(corpus_file("multiplicator"), dir.path / "m.hex");
    auto options = fast_options();
    options.debug_dir = debug.path;
    analyze_path(dir.path, options);
    CHECK(std::filesystem::exists(debug.path / "m.dot"));
    CHECK(std::filesystem::exists(debug.path / "m.paths.txt"));
    std::ifstream dot(debug.path / "m.dot");
    std::string first_line;
    std::getline(dot, first_line);
    CHECK(first_line.find("digraph") != std::string::npos);
}

TEST_CASE("parallel batch matches the sequential one")
{
    TempDir dir("par");
    for (const char* name :
        {"multiplicator", "gift_1_eth", "for_test", "gate_sink", "syn_faucet", "syn_mapper"})
        std::filesystem::copy_file(corpus_file(name), dir.path / (std::string(name) + ".hex"));
    auto sequential = fast_options();
    auto parallel = fast_options();
    parallel.jobs = 2;
    const auto a = analyze_path(dir.path, sequential);
    const auto b = analyze_path(dir.path, parallel);
    const std::string ja = emit_report(a, ReportFormat::Text);
    const std::string jb = emit_report(b, ReportFormat::Text);
    CHECK(ja == jb);
}
