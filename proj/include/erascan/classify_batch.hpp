// Copyright 2026 The erascan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Batch kernels over whole account stores. Each has a serial reference
// implementation and an OpenMP version that must produce identical output.

#include <span>
#include <vector>

#include <erascan/detectors.hpp>
#include <erascan/statedb.hpp>
#include <erascan/symstack.hpp>

namespace erascan {

/// Output is in account-store order (sorted by address), one entry per account.
std::vector<Classification> classify_accounts_serial(const AccountStore& accounts, const TxStore& txs,
                                                     const DetectorConfig& config);

/// `workers` <= 0 means one thread per processor.
std::vector<Classification> classify_accounts(const AccountStore& accounts, const TxStore& txs,
                                              const DetectorConfig& config, int workers = 0);

/// Concrete call targets and probed addresses of one contract.
struct ContractInteractions {
    Address contract;
    std::vector<sym::CallEvent> calls;
    std::vector<sym::ProbeEvent> probes;
    bool complete = true;  // symbolic execution finished within budget
};

/// Whether an account's labels put it in the DoS-contract category.
bool is_dos_contract(const Classification& c) noexcept;

/// Runs symbolic execution for every DoS-contract classification whose
/// account has code. Output follows the order of `classified`.
std::vector<ContractInteractions> extract_interactions_serial(const AccountStore& accounts,
                                                              std::span<const Classification> classified,
                                                              const DetectorConfig& config);
std::vector<ContractInteractions> extract_interactions(const AccountStore& accounts,
                                                       std::span<const Classification> classified,
                                                       const DetectorConfig& config, int workers = 0);

}  // namespace erascan
