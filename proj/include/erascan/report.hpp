// Copyright 2026 The erascan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include <erascan/config.hpp>
#include <erascan/detectors.hpp>
#include <erascan/graphs.hpp>
#include <erascan/statedb.hpp>

namespace erascan {

struct CategoryWaste {
    std::size_t accounts = 0;
    std::size_t transactions = 0;
    std::uint64_t gas_wasted = 0;                // gas units
    Wei gas_cost_wei = 0;                        // sum of gas_used * gas_price
    std::uint64_t gas_excluded_pre_attack = 0;
    Wei gas_cost_excluded_pre_attack = 0;
    Wei eth_locked = 0;                          // current balances
    Wei eth_returned_excluded = 0;               // value of "Reverted Error" transactions
    std::size_t excluded_transactions = 0;

    /// Wei counted towards the dollar figure: gas cost plus locked balances.
    [[nodiscard]] Wei wasted_wei() const { return gas_cost_wei + eth_locked; }
    bool operator==(const CategoryWaste&) const = default;
};

struct WasteReport {
    std::map<Category, CategoryWaste> per_category;
    CategoryWaste total;
    UsdPrice eth_price;
    std::vector<std::string> exclusions_applied;
};

struct WasteConfig {
    std::uint64_t attack_timestamp = kDefaultAttackTimestamp;
    UsdPrice eth_price = kDefaultEthPrice;
};

inline constexpr std::string_view kRevertedError = "Reverted Error";

/// Each account contributes to the category of its primary label only.
WasteReport compute_waste(std::span<const Classification> classified, const TxStore& txs,
                          const AccountStore& accounts, const WasteConfig& config);

/// Dollar value of `wei` at `price` per ETH, rounded half-up to cents ("1234.56").
std::string usd_value(const Wei& wei, UsdPrice price);

struct CdfPoint {
    std::uint64_t timestamp = 0;
    std::size_t cumulative = 0;
    bool operator==(const CdfPoint&) const = default;
};

struct TimeSeriesCDF {
    Label category = Label::MC_S;
    std::vector<CdfPoint> points;
};

struct CdfSet {
    std::map<Label, TimeSeriesCDF> series;               // one per label, possibly empty
    std::map<Label, std::size_t> without_transactions;   // excluded accounts
};

/// Creation time of an account is the timestamp of its oldest transaction.
CdfSet compute_cdf(std::span<const Classification> classified, const TxStore& txs);

nlohmann::json classification_to_json(const Classification& c);
Classification classification_from_json(const nlohmann::json& j);
void write_classifications(const std::filesystem::path& path, std::span<const Classification> classified);
std::vector<Classification> load_classifications(const std::filesystem::path& path);

nlohmann::json waste_to_json(const WasteReport& report);

struct PipelineResult {
    std::vector<Classification> classifications;
    AccountGraph call_graph;
    AccountGraph creation_graph;
    WasteReport waste;
    CdfSet cdf;
    LoadReport account_load;
    LoadReport tx_load;
    nlohmann::json summary;
};

/// Classification, graphs, waste and CDFs over in-memory stores.
PipelineResult analyze(const AccountStore& accounts, const TxStore& txs, const AnalysisConfig& config);

/// Counts in quantity-table layout plus graph and ingestion statistics.
nlohmann::json make_summary(const PipelineResult& result, std::size_t account_count, std::size_t contract_count);

/// Layout: summary.json, classifications.jsonl, waste.json, cdf/<label>.tsv,
/// call_graph.{dot,edges.tsv}, creation_graph.{dot,edges.tsv}.
void write_outputs(const PipelineResult& result, const std::filesystem::path& dir);
void write_graph_outputs(const AccountGraph& call, const AccountGraph& creation, const std::filesystem::path& dir);
void write_report_outputs(const WasteReport& waste, const CdfSet& cdf, const std::filesystem::path& dir);

struct PipelineOptions {
    std::filesystem::path accounts_path;
    std::filesystem::path txs_path;
    std::filesystem::path output_dir;
    AnalysisConfig config;
};

/// Loads both dumps, analyzes, writes outputs. Ingestion failures throw IngestError.
PipelineResult run_pipeline(const PipelineOptions& options);

}  // namespace erascan
