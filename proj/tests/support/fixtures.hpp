// Copyright 2026 The erascan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include <erascan/common.hpp>
#include <erascan/concrete_evm.hpp>
#include <erascan/detectors.hpp>
#include <erascan/evm_isa.hpp>
#include <erascan/graphs.hpp>
#include <erascan/statedb.hpp>

namespace erascan::testing {

class CodeBuilder {
  public:
    CodeBuilder& op(std::uint8_t opcode);
    CodeBuilder& ops(std::initializer_list<std::uint8_t> opcodes);
    /// Smallest PUSH that holds `value` (PUSH1 for zero).
    CodeBuilder& push(const u256& value);
    /// PUSHn with exactly `width` immediate bytes.
    CodeBuilder& push_n(const u256& value, std::size_t width);
    CodeBuilder& push_address(const Address& a);
    CodeBuilder& raw(ByteView bytes);
    [[nodiscard]] std::size_t size() const noexcept { return code_.size(); }
    [[nodiscard]] Bytes build() const { return code_; }

  private:
    Bytes code_;
};

Address parity_library();
/// Deterministic address derived from a namespace tag and an index.
Address make_address(std::uint32_t tag, std::uint64_t index);
Hash32 make_hash(std::uint32_t tag, std::uint64_t index);

// Small contracts reconstructed from the worked examples of each class.
namespace examples {
Bytes mc_s();                        // 0x00 ...
Bytes mc_rs_revert();                // REVERT in the first block
Bytes mc_rs_selfdestruct();          // SELFDESTRUCT in the first block
Bytes stack_error_div();             // DIV as the first operation
Bytes opcode_error_d9();             // 0xd929
Bytes dos_malicious(std::size_t extcodesize_count);  // one block of EXTCODESIZE probes
Bytes parity_wallet();               // PUSH20 library + DELEGATECALL
/// DELEGATECALL into `target` behind a selector dispatch.
Bytes dispatching_wallet(const Address& target, std::uint32_t selector);
/// One block probing each target with EXTCODESIZE.
Bytes prober(std::span<const Address> targets);
}  // namespace examples

struct CompiledContract {
    std::string_view name;
    std::string_view hex;
};

/// Token, Storage, Bank, Ballot, Ownable and WalletStub.
std::span<const CompiledContract> compiled_contracts();
Bytes compiled_code(std::string_view name);

struct PlantedCounts {
    std::size_t mc_s = 50;
    std::size_t mc_rs = 40;
    std::size_t stack_error = 10;
    std::size_t opcode_error = 10;
    std::size_t dos_malicious = 20;
    std::size_t parity = 30;
    std::size_t empty_account = 25;
    std::size_t dos_eoa = 100;
    std::size_t total = 1000;
};

struct PlantedCorpus {
    std::vector<AccountState> accounts;
    std::vector<TxRecord> txs;
    std::map<Address, std::optional<Label>> expected;   // every account, nullopt when clean
    std::map<Address, std::string> clean_kind;          // which decoy each clean account is
    std::vector<Address> real_contracts;                // clean accounts running compiled code
    std::map<Label, std::vector<std::uint64_t>> creation_times;  // planted, per primary label
    std::map<Label, std::size_t> without_transactions;

    [[nodiscard]] std::map<Label, std::size_t> planted_counts() const;
};

PlantedCorpus make_planted_corpus(std::uint64_t seed, const PlantedCounts& counts = {});

/// Waste fixture with hand-computed totals; see waste_fixture.cpp for the arithmetic.
struct WasteFixture {
    std::vector<AccountState> accounts;
    std::vector<TxRecord> txs;
    std::vector<Classification> classified;
    std::uint64_t attack_timestamp = 0;
};
WasteFixture make_waste_fixture();

/// Contracts whose call graph has a known shape around `center`.
struct GraphFixture {
    std::vector<AccountState> accounts;
    std::vector<Classification> classified;
    Address center;
};
/// `wallets` Parity wallets delegating to the removed library (the center).
GraphFixture many_to_one_fixture(std::size_t wallets);
/// One prober contract (the center) touching `targets` distinct addresses.
GraphFixture one_to_many_fixture(std::size_t targets);
/// Classification, symbolic execution and call-graph construction for a fixture.
AccountGraph call_graph_for(const GraphFixture& fixture, const DetectorConfig& config = DetectorConfig::defaults());

/// A JSON-RPC 2.0 server on 127.0.0.1 answering from a method table.
class MockRpcServer {
  public:
    using Handler = std::function<nlohmann::json(const nlohmann::json& params)>;

    MockRpcServer();
    ~MockRpcServer();
    MockRpcServer(const MockRpcServer&) = delete;
    MockRpcServer& operator=(const MockRpcServer&) = delete;

    /// Result for a method; throwing MockRpcError from a handler produces an error reply.
    void on(const std::string& method, Handler handler);
    void on_result(const std::string& method, nlohmann::json result);

    /// Each request sleeps this long before answering.
    void set_delay(std::chrono::milliseconds d) { delay_ms_ = d.count(); }
    /// The next `n` requests sleep `stall` before answering (to trip client timeouts).
    void stall_next(int n, std::chrono::milliseconds stall);

    [[nodiscard]] std::string url() const;
    [[nodiscard]] std::size_t max_in_flight() const { return max_in_flight_.load(); }
    [[nodiscard]] std::size_t requests() const { return requests_.load(); }
    [[nodiscard]] std::size_t requests_for(const std::string& method) const;
    void reset_counters();

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::atomic<long long> delay_ms_{0};
    std::atomic<std::size_t> in_flight_{0};
    std::atomic<std::size_t> max_in_flight_{0};
    std::atomic<std::size_t> requests_{0};
};

struct MockRpcError {
    std::int64_t code;
    std::string message;
};

}  // namespace erascan::testing

namespace erascan::testing::gen {

Bytes random_bytes(std::mt19937_64& rng, std::size_t max_len);

/// Straight-line block of known opcodes: no JUMPDEST, no INVALID, and a
/// terminator (if any) only in last position. At most `max_bytes` long.
Bytes random_block(std::mt19937_64& rng, std::size_t max_bytes = 64, evm::Fork fork = evm::kDefaultFork);

/// PUSH, DUP, SWAP, POP, PC, CODESIZE and pure arithmetic/comparison/bitwise
/// operations, never underflowing, ending in STOP.
Bytes random_fold_program(std::mt19937_64& rng, std::size_t max_ops = 40);

oracle::ConcreteEnv random_env(std::mt19937_64& rng);

}  // namespace erascan::testing::gen
