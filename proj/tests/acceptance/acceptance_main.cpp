// Copyright 2026 The erascan Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance criteria 1-10. Each prints one PASS/FAIL line; the exit status
// is nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <erascan/classify_batch.hpp>
#include <erascan/concrete_evm.hpp>
#include <erascan/detectors.hpp>
#include <erascan/evm_isa.hpp>
#include <erascan/graphs.hpp>
#include <erascan/report.hpp>
#include <erascan/rpc_fetcher.hpp>
#include <erascan/symstack.hpp>

#include "fixtures.hpp"

namespace {

using namespace erascan;
using Clock = std::chrono::steady_clock;
namespace gen = erascan::testing::gen;

struct Outcome {
    bool pass = true;
    std::string detail;
};

/// Collects the first few failure messages of a criterion.
class Checker {
  public:
    void expect(bool ok, const std::string& what) {
        if (ok) return;
        ++failures_;
        if (failures_ <= 3) msgs_ << (failures_ > 1 ? "; " : "") << what;
    }
    [[nodiscard]] bool ok() const { return failures_ == 0; }
    [[nodiscard]] Outcome outcome(const std::string& summary) const {
        if (ok()) return {true, summary};
        return {false, std::to_string(failures_) + " failure(s): " + msgs_.str()};
    }

  private:
    std::size_t failures_ = 0;
    std::ostringstream msgs_;
};

Outcome decoder_round_trip() {
    std::mt19937_64 rng(1001);
    Checker c;
    const auto t0 = Clock::now();
    for (int i = 0; i < 10'000; ++i) {
        const Bytes code = gen::random_bytes(rng, 1024);
        const auto ins = evm::decode(code);
        Bytes out = evm::serialize(ins);
        if (out.size() < code.size()) {
            c.expect(false, "case " + std::to_string(i) + " shorter after re-serialization");
            continue;
        }
        out.resize(code.size());
        c.expect(out == code, "case " + std::to_string(i) + " differs");
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
    c.expect(ms < 5000, "took " + std::to_string(ms) + " ms");
    return c.outcome("10000 sequences, " + std::to_string(ms) + " ms");
}

Outcome depth_equivalence() {
    std::mt19937_64 rng(1002);
    Checker c;
    std::size_t underflows = 0;
    for (int i = 0; i < 10'000; ++i) {
        const Bytes code = gen::random_block(rng, 64);
        const auto block = evm::first_block(code);
        if (!block) {
            c.expect(code.empty(), "no first block for non-empty code");
            continue;
        }
        const auto d = sym::simulate_depth(*block);
        underflows += d.kind == sym::DepthOutcome::Kind::Underflow;
        for (int e = 0; e < 3; ++e) {
            const auto t = oracle::run_concrete(code, gen::random_env(rng), 1000);
            bool same = false;
            switch (d.kind) {
                case sym::DepthOutcome::Kind::Underflow:
                    same = t.halt == oracle::HaltReason::Underflow && t.halt_offset == d.offset;
                    break;
                case sym::DepthOutcome::Kind::Overflow:
                    same = t.halt == oracle::HaltReason::Overflow && t.halt_offset == d.offset;
                    break;
                case sym::DepthOutcome::Kind::Ok:
                    same = t.halt != oracle::HaltReason::Underflow && t.halt != oracle::HaltReason::Overflow;
                    if (t.halt == oracle::HaltReason::CodeEnd) same = same && t.final_stack.size() == d.final_depth;
                    break;
            }
            c.expect(same, "block " + std::to_string(i) + " env " + std::to_string(e) + ": " +
                               std::string(sym::to_string(d.kind)) + " vs " + std::string(oracle::to_string(t.halt)));
        }
    }
    return c.outcome("10000 blocks x 3 environments, " + std::to_string(underflows) + " underflows, 0 mismatches");
}

Outcome folding_equivalence() {
    std::mt19937_64 rng(1003);
    Checker c;
    std::size_t words = 0;
    for (int i = 0; i < 2000; ++i) {
        const Bytes code = gen::random_fold_program(rng);
        const auto sym_run = sym::run_single_path(code, 10'000);
        const auto t = oracle::run_concrete(code, gen::random_env(rng), 10'000);
        const std::string id = "program " + std::to_string(i);
        c.expect(t.halt == oracle::HaltReason::Stopped, id + " did not stop");
        if (sym_run.state.stack.size() != t.final_stack.size()) {
            c.expect(false, id + " stack size differs");
            continue;
        }
        for (std::size_t k = 0; k < t.final_stack.size(); ++k) {
            const auto& w = sym_run.state.peek(k);
            c.expect(w.is_concrete() && w.value() == t.final_stack[k], id + " word " + std::to_string(k));
            ++words;
        }
    }
    return c.outcome("2000 programs, " + std::to_string(words) + " stack words, 0 mismatches");
}

Outcome worked_examples() {
    namespace ex = erascan::testing::examples;
    const auto config = DetectorConfig::defaults();
    Checker c;
    const auto t0 = Clock::now();
    auto primary = [&](const Bytes& code) {
        return classify(AccountState{testing::make_address(0xe0, 1), 1, 0, std::nullopt, code}, AccountHistory{}, config)
            .primary;
    };
    c.expect(primary(ex::mc_s()) == Label::MC_S, "0x00-first code");
    c.expect(primary(ex::mc_rs_revert()) == Label::MC_RS, "REVERT in first block");
    c.expect(primary(ex::mc_rs_selfdestruct()) == Label::MC_RS, "SELFDESTRUCT in first block");
    c.expect(primary(ex::stack_error_div()) == Label::StackError, "DIV-first code");
    c.expect(primary(ex::opcode_error_d9()) == Label::OpcodeError, "0xd929 code");
    c.expect(primary(ex::dos_malicious(200)) == Label::DoSMalicious, "200 EXTCODESIZE");
    c.expect(!primary(ex::dos_malicious(100)).has_value(), "exactly 100 EXTCODESIZE");
    c.expect(primary(ex::parity_wallet()) == Label::ParityDependent, "PUSH20 library + DELEGATECALL");
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
    c.expect(ms < 1000, "took " + std::to_string(ms) + " ms");
    return c.outcome("8 fixtures, " + std::to_string(ms) + " ms");
}

Outcome planted_corpus() {
    const auto corpus = testing::make_planted_corpus(2024);
    const AccountStore accounts(corpus.accounts);
    const TxStore txs(corpus.txs);
    Checker c;
    const auto t0 = Clock::now();
    const auto classified = classify_accounts_serial(accounts, txs, DetectorConfig::defaults());
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();

    std::map<Label, std::size_t> got;
    std::size_t false_positives = 0;
    std::size_t clean = 0;
    for (const auto& cl : classified) {
        const auto& want = corpus.expected.at(cl.address);
        if (!want) {
            ++clean;
            false_positives += cl.primary.has_value();
        }
        c.expect(cl.primary == want, cl.address.hex() + " misclassified");
        if (cl.primary) ++got[*cl.primary];
    }
    c.expect(got == corpus.planted_counts(), "per-category counts differ");
    c.expect(false_positives == 0, std::to_string(false_positives) + " false positives");
    c.expect(corpus.accounts.size() == 1000, "corpus size");
    c.expect(corpus.real_contracts.size() >= 5, "fewer than 5 compiled contracts");
    c.expect(ms < 60'000, "took " + std::to_string(ms) + " ms");
    return c.outcome("1000 accounts, " + std::to_string(clean) + " clean incl. " +
                     std::to_string(corpus.real_contracts.size()) + " compiled contracts, " + std::to_string(ms) +
                     " ms single-threaded");
}

Outcome eoa_strictness() {
    const Address a = testing::make_address(0xe1, 1);
    const Address attacker = testing::make_address(0xe1, 2);
    auto tx = [&](std::uint64_t n, TxKind kind, const Address& from, const Address& to) {
        TxRecord r;
        r.hash = testing::make_hash(0xe1, n);
        r.kind = kind;
        r.from = from;
        r.to = to;
        r.block_number = 10 + n;
        r.index = 0;
        r.value = 1;
        return r;
    };
    auto verdict = [&](AccountState s, std::vector<TxRecord> records) {
        const TxStore store(std::move(records));
        return detect_dos_eoa(s, store.history(s.address));
    };
    const AccountState base{a, 0, 1, std::nullopt, {}};
    const TxRecord in = tx(1, TxKind::Internal, attacker, a);
    Checker c;
    c.expect(verdict(base, {in}), "baseline not detected");

    AccountState s = base;
    s.balance = 2;
    c.expect(!verdict(s, {in}), "balance 2 Wei");
    s.balance = 0;
    c.expect(!verdict(s, {in}), "balance 0 Wei");
    s = base;
    s.nonce = 1;
    c.expect(!verdict(s, {in}), "nonce 1");
    s = base;
    s.code = {0x00};
    c.expect(!verdict(s, {in}), "nonzero code");
    c.expect(!verdict(base, {in, tx(2, TxKind::External, attacker, a)}), "incoming external tx");
    c.expect(!verdict(base, {in, tx(2, TxKind::External, a, attacker)}), "outgoing external tx");
    TxRecord errored = in;
    errored.error = "Out of Gas Error";
    c.expect(!verdict(base, {errored}), "errored internal tx");
    c.expect(!verdict(base, {in, tx(2, TxKind::Internal, attacker, a)}), "duplicated internal tx");
    return c.outcome("baseline detected, 8 single-feature mutations all rejected");
}

Outcome waste_exactness() {
    const auto f = testing::make_waste_fixture();
    const auto w =
        compute_waste(f.classified, TxStore(f.txs), AccountStore(f.accounts), WasteConfig{f.attack_timestamp, kDefaultEthPrice});
    Checker c;
    const auto& mc = w.per_category.at(Category::MeaninglessContract);
    const auto& dos = w.per_category.at(Category::DoSContract);
    const auto& eoa = w.per_category.at(Category::DoSEOA);
    c.expect(mc.gas_wasted == 300 && mc.gas_cost_wei == 600, "meaningless contract gas");
    c.expect(dos.gas_wasted == 70 && dos.gas_cost_wei == 230, "DoS contract gas");
    c.expect(dos.gas_excluded_pre_attack == 50 && dos.gas_cost_excluded_pre_attack == 150 &&
                 dos.excluded_transactions == 1,
             "pre-attack exclusion");
    c.expect(dos.eth_returned_excluded == 10, "reverted value exclusion");
    c.expect(dos.eth_locked == 12 && eoa.eth_locked == 1, "locked balances");
    c.expect(w.total.gas_wasted == 370 && w.total.gas_cost_wei == 830 && w.total.eth_locked == 13 &&
                 w.total.eth_returned_excluded == 10 && w.total.gas_excluded_pre_attack == 50,
             "totals");
    return c.outcome("gas 370, cost 830 Wei, locked 13 Wei, excluded 50 gas and 10 Wei");
}

Outcome graph_shapes() {
    Checker c;
    const auto many = testing::many_to_one_fixture(20);
    const AccountGraph g1 = testing::call_graph_for(many);
    const AccountGraph g2 = testing::call_graph_for(many);
    const auto s1 = classify_shape(g1, many.center);
    c.expect(g1.interaction_in_degree(many.center) == 20, "center in-degree");
    c.expect(s1.kind == GraphShape::Kind::ManyToOne && s1.degree == 20, "ManyToOne(20)");
    c.expect(to_dot(g1) == to_dot(g2), "many-to-one DOT differs between runs");

    const auto one = testing::one_to_many_fixture(200);
    const AccountGraph h1 = testing::call_graph_for(one);
    const AccountGraph h2 = testing::call_graph_for(one);
    const auto s2 = classify_shape(h1, one.center);
    c.expect(s2.kind == GraphShape::Kind::OneToMany && s2.degree == 200, "OneToMany(200)");
    c.expect(to_dot(h1) == to_dot(h2), "one-to-many DOT differs between runs");
    return c.outcome("ManyToOne(20), OneToMany(200), DOT byte-identical");
}

Outcome cdf_correctness() {
    const auto corpus = testing::make_planted_corpus(2025);
    const AccountStore accounts(corpus.accounts);
    const TxStore txs(corpus.txs);
    const auto classified = classify_accounts_serial(accounts, txs, DetectorConfig::defaults());
    const CdfSet cdf = compute_cdf(classified, txs);
    Checker c;
    std::size_t points = 0;
    for (Label l : kAllLabels) {
        std::vector<std::uint64_t> t;
        if (auto it = corpus.creation_times.find(l); it != corpus.creation_times.end()) t = it->second;
        std::sort(t.begin(), t.end());
        std::vector<CdfPoint> expected;
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (i + 1 < t.size() && t[i + 1] == t[i]) continue;
            expected.push_back({t[i], i + 1});
        }
        const auto& got = cdf.series.at(l).points;
        c.expect(got == expected, std::string(to_string(l)) + " series differs");
        for (std::size_t i = 1; i < got.size(); ++i) {
            c.expect(got[i - 1].cumulative <= got[i].cumulative && got[i - 1].timestamp < got[i].timestamp,
                     std::string(to_string(l)) + " not monotone");
        }
        points += got.size();
    }
    return c.outcome(std::to_string(points) + " points across 8 series match the brute-force sort");
}

Outcome rpc_fetcher() {
    using nlohmann::json;
    Checker c;
    testing::MockRpcServer server;
    server.on_result("eth_blockNumber", "0x100");
    server.on("eth_getBalance", [](const json& p) { return json(p[0].get<std::string>().back() == '1' ? "0x1" : "0x0"); });
    server.on_result("eth_getTransactionCount", "0x0");
    server.on("eth_getCode", [](const json& p) { return json(p[0].get<std::string>().back() == '1' ? "0x" : "0x00"); });
    server.set_delay(std::chrono::milliseconds(10));

    rpc::RpcEndpoint e;
    e.url = server.url();
    e.max_concurrent_requests = 3;
    e.request_timeout = std::chrono::milliseconds(2000);
    const auto cache = std::filesystem::temp_directory_path() / "erascan-acceptance-cache";
    std::filesystem::remove_all(cache);

    std::vector<Address> addresses;
    for (std::uint64_t i = 0; i < 16; ++i) addresses.push_back(testing::make_address(0xe2, i));
    {
        rpc::RpcClient client(e, cache);
        const AccountState one = client.fetch_account(addresses[1]);
        c.expect(one == AccountState{addresses[1], 0, 1, std::nullopt, {}}, "1 Wei EOA assembled wrongly");
        const AccountState two = client.fetch_account(addresses[2]);
        c.expect(two == AccountState{addresses[2], 0, 0, std::nullopt, Bytes{0x00}}, "0x00 contract assembled wrongly");
        // Interrupted after half of the list.
        client.fetch_accounts(std::span(addresses).first(8));
    }
    const std::size_t in_flight = server.max_in_flight();
    c.expect(server.max_in_flight() <= 3, "in-flight " + std::to_string(server.max_in_flight()) + " > 3");
    c.expect(server.max_in_flight() >= 2, "requests never overlapped");

    server.reset_counters();
    rpc::RpcClient resumed(e, cache);
    const auto all = resumed.fetch_accounts(addresses);
    c.expect(all.size() == addresses.size(), "resumed crawl incomplete");
    c.expect(server.requests() == 8 * 3, std::to_string(server.requests()) + " requests after resume, expected 24");
    c.expect(resumed.stats().cache_hits == 8 * 3, "cache hits");
    return c.outcome("exact assembly, max in-flight " + std::to_string(in_flight) + " with cap 3, resume served 24 of 48 from cache");
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"decoder round trip", decoder_round_trip},
        {"oracle depth equivalence", depth_equivalence},
        {"constant-folding equivalence", folding_equivalence},
        {"example fixtures classify correctly", worked_examples},
        {"planted-corpus exactness", planted_corpus},
        {"DoS EOA rule strictness", eoa_strictness},
        {"waste accounting exactness", waste_exactness},
        {"graph shapes", graph_shapes},
        {"CDF correctness", cdf_correctness},
        {"RPC fetcher", rpc_fetcher},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << (i + 1) << ": " << criteria[i].first << " -- "
                  << o.detail << std::endl;
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
    return failed == 0 ? 0 : 1;
}
