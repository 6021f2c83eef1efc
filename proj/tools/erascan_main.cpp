// Copyright 2026 The erascan Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <erascan/classify_batch.hpp>
#include <erascan/config.hpp>
#include <erascan/report.hpp>
#include <erascan/rpc_fetcher.hpp>
#include <erascan/statedb.hpp>

namespace {

using namespace erascan;

constexpr int kExitIngest = 2;

struct CommonFlags {
    std::string config_path;
    std::string out_dir = "erascan-out";
    int workers = -1;
    std::optional<std::size_t> max_paths;
    std::optional<std::size_t> max_steps;
    std::optional<long> time_limit_ms;
    std::string fork;
    std::string removed_path;
    std::optional<std::uint64_t> attack_timestamp;
    std::string usd_price;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("-c,--config", f.config_path, "JSON config file")->check(CLI::ExistingFile);
    cmd->add_option("-o,--out", f.out_dir, "Output directory");
    cmd->add_option("-j,--workers", f.workers, "Worker threads (0 = one per processor)");
    cmd->add_option("--max-paths", f.max_paths, "Symbolic execution path budget");
    cmd->add_option("--max-steps", f.max_steps, "Symbolic execution steps per path");
    cmd->add_option("--time-limit-ms", f.time_limit_ms, "Symbolic execution wall-clock limit per contract");
    cmd->add_option("--fork", f.fork, "Instruction set (frontier .. cancun)");
    cmd->add_option("--removed", f.removed_path, "File listing removed contract addresses")->check(CLI::ExistingFile);
    cmd->add_option("--attack-timestamp", f.attack_timestamp, "Unix time of the Parity library removal");
    cmd->add_option("--usd-price", f.usd_price, "USD per ETH, e.g. 204.36");
}

AnalysisConfig resolve_config(const CommonFlags& f) {
    AnalysisConfig c = f.config_path.empty() ? AnalysisConfig{} : load_config(f.config_path);
    if (f.workers >= 0) c.workers = f.workers;
    if (f.max_paths) c.detector.exec_budget.max_paths = *f.max_paths;
    if (f.max_steps) c.detector.exec_budget.max_steps = *f.max_steps;
    if (f.time_limit_ms) c.detector.exec_budget.time_limit = std::chrono::milliseconds(*f.time_limit_ms);
    if (!f.fork.empty()) {
        auto fork = evm::parse_fork(f.fork);
        if (!fork) throw std::invalid_argument("unknown fork " + f.fork);
        c.detector.fork = *fork;
    }
    if (!f.removed_path.empty()) c.detector.removed_contracts = load_address_list(f.removed_path);
    if (f.attack_timestamp) c.attack_timestamp = *f.attack_timestamp;
    if (!f.usd_price.empty()) {
        auto p = UsdPrice::parse(f.usd_price);
        if (!p) throw std::invalid_argument("bad USD price " + f.usd_price);
        c.eth_price = *p;
    }
    c.detector.validate();
    return c;
}

void log_load(std::string_view what, const LoadReport& r) {
    spdlog::info("{}: {} loaded, {} rejected", what, r.loaded, r.rejected);
    for (const auto& e : r.errors) spdlog::warn("{} line {}: {}", what, e.line, e.message);
}

std::vector<Address> read_addresses(const std::string& path) {
    const auto set = load_address_list(path);
    return {set.begin(), set.end()};
}

int run_fetch(const std::string& url, const std::string& addresses_path, const std::string& hashes_path,
              const std::string& out_dir, const std::string& cache_dir, std::size_t concurrency, long timeout_ms,
              int attempts) {
    rpc::RpcEndpoint endpoint;
    endpoint.url = url;
    endpoint.max_concurrent_requests = concurrency;
    endpoint.request_timeout = std::chrono::milliseconds(timeout_ms);
    endpoint.retry.max_attempts = attempts;
    rpc::RpcClient client(endpoint, cache_dir.empty() ? std::nullopt : std::optional<std::filesystem::path>(cache_dir));

    std::filesystem::create_directories(out_dir);
    const auto addresses = read_addresses(addresses_path);
    spdlog::info("fetching {} accounts at block {}", addresses.size(), client.pin_block());
    const auto accounts = client.fetch_accounts(addresses);
    write_accounts(std::filesystem::path(out_dir) / "accounts.jsonl", accounts);

    if (!hashes_path.empty()) {
        std::ifstream in(hashes_path);
        if (!in) throw IngestError("cannot read " + hashes_path);
        std::vector<TxRecord> txs;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            auto h = Hash32::parse(line);
            if (!h) throw IngestError("bad transaction hash: " + line);
            txs.push_back(client.fetch_transaction(*h));
        }
        write_transactions(std::filesystem::path(out_dir) / "transactions.jsonl", txs);
    }
    const auto s = client.stats();
    spdlog::info("{} requests, {} cache hits, {} retries", s.requests, s.cache_hits, s.retries);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"erascan: find erasable Ethereum accounts"};
    app.require_subcommand(1);
    bool verbose = false;
    app.add_flag("-v,--verbose", verbose, "Debug logging");

    CommonFlags common;
    std::string accounts_path;
    std::string txs_path;
    std::string classifications_path;

    auto* classify = app.add_subcommand("classify", "Classify account and transaction dumps, write all outputs");
    add_common(classify, common);
    classify->add_option("--accounts", accounts_path, "Account dump (JSON lines)")->required();
    classify->add_option("--txs", txs_path, "Transaction dump (JSON lines)")->required();

    auto* graph = app.add_subcommand("graph", "Build call and creation graphs from classifications");
    add_common(graph, common);
    graph->add_option("--classifications", classifications_path, "classifications.jsonl")->required();
    graph->add_option("--accounts", accounts_path, "Account dump")->required();
    graph->add_option("--txs", txs_path, "Transaction dump")->required();

    auto* report = app.add_subcommand("report", "Waste and creation-time reports from classifications");
    add_common(report, common);
    report->add_option("--classifications", classifications_path, "classifications.jsonl")->required();
    report->add_option("--accounts", accounts_path, "Account dump")->required();
    report->add_option("--txs", txs_path, "Transaction dump")->required();

    std::string rpc_url;
    std::string addresses_path;
    std::string hashes_path;
    std::string cache_dir;
    std::size_t concurrency = 4;
    long timeout_ms = 10'000;
    int attempts = 3;
    auto* fetch = app.add_subcommand("fetch", "Fetch accounts (and transactions) over JSON-RPC into local dumps");
    fetch->add_option("--rpc-url", rpc_url, "JSON-RPC endpoint")->envname("ERASCAN_RPC_URL")->required();
    fetch->add_option("--addresses", addresses_path, "Address list, one per line")->required()->check(CLI::ExistingFile);
    fetch->add_option("--tx-hashes", hashes_path, "Transaction hash list")->check(CLI::ExistingFile);
    fetch->add_option("-o,--out", common.out_dir, "Output directory");
    fetch->add_option("--cache-dir", cache_dir, "Response cache for resumable crawls");
    fetch->add_option("--concurrency", concurrency, "Maximum requests in flight")->check(CLI::PositiveNumber);
    fetch->add_option("--timeout-ms", timeout_ms, "Per-request timeout")->check(CLI::PositiveNumber);
    fetch->add_option("--attempts", attempts, "Attempts per request")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);
    spdlog::set_default_logger(spdlog::stderr_color_mt("erascan"));
    spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);

    try {
        if (fetch->parsed()) {
            return run_fetch(rpc_url, addresses_path, hashes_path, common.out_dir, cache_dir, concurrency, timeout_ms,
                             attempts);
        }
        const AnalysisConfig config = resolve_config(common);
        if (classify->parsed()) {
            PipelineOptions options{accounts_path, txs_path, common.out_dir, config};
            const PipelineResult r = run_pipeline(options);
            log_load("accounts", r.account_load);
            log_load("transactions", r.tx_load);
            std::cout << r.summary.dump(2) << '\n';
            return 0;
        }

        auto accounts = load_accounts(accounts_path);
        auto txs = load_transactions(txs_path);
        log_load("accounts", accounts.report);
        log_load("transactions", txs.report);
        const auto classified = load_classifications(classifications_path);

        if (graph->parsed()) {
            const auto interactions = extract_interactions(accounts.store, classified, config.detector, config.workers);
            GraphContext ctx{&accounts.store, config.detector.removed_contracts};
            const AccountGraph call = build_call_graph(classified, interactions, ctx);
            const AccountGraph creation = build_creation_graph(classified, accounts.store, txs.store);
            write_graph_outputs(call, creation, common.out_dir);
            spdlog::info("call graph: {} nodes, {} edges; creation graph: {} nodes, {} edges", call.nodes().size(),
                         call.edge_count(), creation.nodes().size(), creation.edge_count());
            return 0;
        }
        if (report->parsed()) {
            const WasteReport waste =
                compute_waste(classified, txs.store, accounts.store, WasteConfig{config.attack_timestamp, config.eth_price});
            const CdfSet cdf = compute_cdf(classified, txs.store);
            write_report_outputs(waste, cdf, common.out_dir);
            std::cout << waste_to_json(waste).dump(2) << '\n';
            return 0;
        }
    } catch (const IngestError& e) {
        spdlog::error("ingestion failed: {}", e.what());
        return kExitIngest;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return 1;
    }
    return 1;
}
