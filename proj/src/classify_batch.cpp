// Copyright 2026 The erascan Authors
// SPDX-License-Identifier: Apache-2.0

#include <erascan/classify_batch.hpp>

#include <omp.h>
#include <spdlog/spdlog.h>

namespace erascan {

namespace {

Classification classify_one(const AccountState& account, const TxStore& txs, const DetectorConfig& config) {
    try {
        return classify(account, txs.history(account.address), config);
    } catch (const std::exception& e) {
        // A single bad account must not abort the batch.
        spdlog::warn("classification of {} failed: {}", account.address.hex(), e.what());
        Classification c;
        c.address = account.address;
        c.evidence_incomplete = true;
        return c;
    }
}

ContractInteractions interactions_of(const AccountState& account, const DetectorConfig& config) {
    ContractInteractions out;
    out.contract = account.address;
    try {
        auto r = sym::sym_exec(account.code, config.exec_budget, config.fork);
        out.calls = std::move(r.calls);
        out.probes = std::move(r.probes);
        out.complete = r.terminated_normally;
    } catch (const std::exception& e) {
        spdlog::warn("symbolic execution of {} failed: {}", account.address.hex(), e.what());
        out.complete = false;
    }
    return out;
}

int thread_count(int workers) { return workers > 0 ? workers : omp_get_num_procs(); }

std::vector<const AccountState*> dos_targets(const AccountStore& accounts, std::span<const Classification> classified) {
    std::vector<const AccountState*> targets;
    for (const auto& c : classified) {
        if (!is_dos_contract(c)) continue;
        const AccountState* a = accounts.find(c.address);
        if (a != nullptr && !a->code.empty()) targets.push_back(a);
    }
    return targets;
}

}  // namespace

std::vector<Classification> classify_accounts_serial(const AccountStore& accounts, const TxStore& txs,
                                                     const DetectorConfig& config) {
    std::vector<Classification> out;
    out.reserve(accounts.size());
    for (const auto& a : accounts.accounts()) {
        out.push_back(classify_one(a, txs, config));
    }
    return out;
}

std::vector<Classification> classify_accounts(const AccountStore& accounts, const TxStore& txs,
                                              const DetectorConfig& config, int workers) {
    const auto all = accounts.accounts();
    const auto n = static_cast<std::ptrdiff_t>(all.size());
    std::vector<Classification> out(all.size());

    // Cost per account varies by orders of magnitude (EOAs vs symbolic execution), hence dynamic.
#pragma omp parallel for schedule(dynamic, 16) num_threads(thread_count(workers))
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = classify_one(all[static_cast<std::size_t>(i)], txs, config);
    }
    return out;
}

bool is_dos_contract(const Classification& c) noexcept {
    return c.has(Label::ParityDependent) || c.has(Label::DoSMalicious);
}

std::vector<ContractInteractions> extract_interactions_serial(const AccountStore& accounts,
                                                              std::span<const Classification> classified,
                                                              const DetectorConfig& config) {
    std::vector<ContractInteractions> out;
    for (const AccountState* a : dos_targets(accounts, classified)) {
        out.push_back(interactions_of(*a, config));
    }
    return out;
}

std::vector<ContractInteractions> extract_interactions(const AccountStore& accounts,
                                                       std::span<const Classification> classified,
                                                       const DetectorConfig& config, int workers) {
    const auto targets = dos_targets(accounts, classified);
    const auto n = static_cast<std::ptrdiff_t>(targets.size());
    std::vector<ContractInteractions> out(targets.size());

#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count(workers))
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = interactions_of(*targets[static_cast<std::size_t>(i)], config);
    }
    return out;
}

}  // namespace erascan
