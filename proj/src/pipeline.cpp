// Copyright 2026 The erascan Authors
// SPDX-License-Identifier: Apache-2.0

#include <erascan/report.hpp>

#include <fstream>

#include <spdlog/spdlog.h>

#include <erascan/classify_batch.hpp>

namespace erascan {

using nlohmann::json;

namespace {

void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

json load_report_json(const LoadReport& r) {
    json errors = json::array();
    for (const auto& e : r.errors) errors.push_back({{"line", e.line}, {"message", e.message}});
    return json{{"loaded", r.loaded}, {"rejected", r.rejected}, {"errors", std::move(errors)}, {"warnings", r.warnings}};
}

json graph_json(const AccountGraph& g, bool with_shapes) {
    json kinds = json::object();
    for (auto k : {EdgeKind::Call, EdgeKind::CallCode, EdgeKind::DelegateCall, EdgeKind::StaticCall, EdgeKind::Probe,
                   EdgeKind::Creation, EdgeKind::Trigger}) {
        if (const auto n = g.edge_count(k); n != 0) kinds[std::string(to_string(k))] = n;
    }
    json j{{"nodes", g.nodes().size()}, {"edges", g.edge_count()}, {"edge_kinds", std::move(kinds)},
           {"self_calls", g.self_calls}, {"warnings", g.warnings}};
    if (with_shapes) {
        json shapes = json::array();
        for (const auto& [addr, attrs] : g.nodes()) {
            const GraphShape s = classify_shape(g, addr);
            if (s.kind == GraphShape::Kind::Other) continue;
            shapes.push_back({{"node", addr.hex()}, {"shape", std::string(to_string(s.kind))}, {"degree", s.degree}});
        }
        j["shapes"] = std::move(shapes);
    }
    return j;
}

}  // namespace

json make_summary(const PipelineResult& result, std::size_t account_count, std::size_t contract_count) {
    std::map<Label, std::size_t> by_label;
    std::map<Label, std::size_t> any_label;
    std::size_t erasable = 0;
    std::size_t incomplete = 0;
    for (const auto& c : result.classifications) {
        if (c.evidence_incomplete) ++incomplete;
        for (Label l : c.labels) ++any_label[l];
        if (!c.primary) continue;
        ++erasable;
        ++by_label[*c.primary];
    }

    json rows = json::array();
    for (Category cat : kAllCategories) {
        json labels = json::object();
        std::size_t quantity = 0;
        for (Label l : kAllLabels) {
            if (category_of(l) != cat) continue;
            labels[std::string(to_string(l))] = by_label[l];
            quantity += by_label[l];
        }
        rows.push_back({{"category", std::string(to_string(cat))}, {"quantity", quantity}, {"labels", std::move(labels)}});
    }
    json all_labels = json::object();
    json no_tx = json::object();
    for (Label l : kAllLabels) {
        all_labels[std::string(to_string(l))] = any_label[l];
        const auto it = result.cdf.without_transactions.find(l);
        no_tx[std::string(to_string(l))] = it == result.cdf.without_transactions.end() ? 0 : it->second;
    }

    return json{
        {"accounts_analyzed", account_count},
        {"contracts", contract_count},
        {"eoas", account_count - contract_count},
        {"erasable_total", erasable},
        {"evidence_incomplete", incomplete},
        {"categories", std::move(rows)},
        {"label_hits", std::move(all_labels)},
        {"cdf_excluded_without_transactions", std::move(no_tx)},
        {"call_graph", graph_json(result.call_graph, true)},
        {"creation_graph", graph_json(result.creation_graph, false)},
        {"ingest", {{"accounts", load_report_json(result.account_load)}, {"transactions", load_report_json(result.tx_load)}}},
    };
}

PipelineResult analyze(const AccountStore& accounts, const TxStore& txs, const AnalysisConfig& config) {
    config.detector.validate();
    PipelineResult r;
    r.classifications = classify_accounts(accounts, txs, config.detector, config.workers);
    const auto interactions = extract_interactions(accounts, r.classifications, config.detector, config.workers);

    GraphContext ctx;
    ctx.accounts = &accounts;
    ctx.removed = config.detector.removed_contracts;
    r.call_graph = build_call_graph(r.classifications, interactions, ctx);
    r.creation_graph = build_creation_graph(r.classifications, accounts, txs);

    r.waste = compute_waste(r.classifications, txs, accounts, WasteConfig{config.attack_timestamp, config.eth_price});
    r.cdf = compute_cdf(r.classifications, txs);

    std::size_t contracts = 0;
    for (const auto& a : accounts.accounts()) contracts += a.code.empty() ? 0 : 1;
    r.summary = make_summary(r, accounts.size(), contracts);
    return r;
}

void write_graph_outputs(const AccountGraph& call, const AccountGraph& creation, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    export_dot(call, dir / "call_graph.dot", DotOptions{"call_graph"});
    export_edge_list(call, dir / "call_graph.edges.tsv");
    export_dot(creation, dir / "creation_graph.dot", DotOptions{"creation_graph"});
    export_edge_list(creation, dir / "creation_graph.edges.tsv");
}

void write_report_outputs(const WasteReport& waste, const CdfSet& cdf, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir / "cdf");
    write_json(dir / "waste.json", waste_to_json(waste));
    for (const auto& [label, series] : cdf.series) {
        const auto path = dir / "cdf" / (std::string(to_string(label)) + ".tsv");
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        out << "timestamp\tcumulative\n";
        for (const auto& p : series.points) out << p.timestamp << '\t' << p.cumulative << '\n';
    }
}

void write_outputs(const PipelineResult& result, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_json(dir / "summary.json", result.summary);
    write_classifications(dir / "classifications.jsonl", result.classifications);
    write_graph_outputs(result.call_graph, result.creation_graph, dir);
    write_report_outputs(result.waste, result.cdf, dir);
}

PipelineResult run_pipeline(const PipelineOptions& options) {
    auto accounts = load_accounts(options.accounts_path);
    auto txs = load_transactions(options.txs_path);
    spdlog::info("loaded {} accounts ({} rejected), {} transactions ({} rejected)", accounts.report.loaded,
                 accounts.report.rejected, txs.report.loaded, txs.report.rejected);

    PipelineResult r = analyze(accounts.store, txs.store, options.config);
    r.account_load = std::move(accounts.report);
    r.tx_load = std::move(txs.report);
    std::size_t contracts = 0;
    for (const auto& a : accounts.store.accounts()) contracts += a.code.empty() ? 0 : 1;
    r.summary = make_summary(r, accounts.store.size(), contracts);
    write_outputs(r, options.output_dir);
    return r;
}

}  // namespace erascan
