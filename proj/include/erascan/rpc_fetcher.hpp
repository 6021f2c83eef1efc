// Copyright 2026 The erascan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include <erascan/common.hpp>
#include <erascan/statedb.hpp>

namespace erascan::rpc {

struct RetryPolicy {
    int max_attempts = 3;
    std::chrono::milliseconds backoff_base{200};  // doubled after each failed attempt
};

struct RpcEndpoint {
    std::string url;
    std::chrono::milliseconds request_timeout{10'000};
    std::size_t max_concurrent_requests = 4;
    RetryPolicy retry;

    /// Throws std::invalid_argument for an empty url, a zero cap or no attempts.
    void validate() const;
};

enum class RpcErrorKind { Transport, Timeout, Malformed, Unsupported, NotFound, Remote };

std::string_view to_string(RpcErrorKind kind) noexcept;

class RpcError : public std::runtime_error {
  public:
    RpcError(RpcErrorKind kind, const std::string& message, std::string excerpt = {});
    [[nodiscard]] RpcErrorKind kind() const noexcept { return kind_; }
    /// Leading part of the offending payload, for malformed responses.
    [[nodiscard]] const std::string& excerpt() const noexcept { return excerpt_; }

  private:
    RpcErrorKind kind_;
    std::string excerpt_;
};

struct TraceStep {
    std::uint64_t pc = 0;
    std::string op;
    std::uint32_t depth = 0;
};

struct TraceCall {
    std::string op;        // CALL, CALLCODE, DELEGATECALL or STATICCALL
    Address target;
    std::uint64_t pc = 0;
    std::uint32_t depth = 0;
};

struct TraceSummary {
    std::vector<TraceStep> steps;
    std::vector<TraceCall> calls;

    [[nodiscard]] bool calls_to(const Address& target, std::string_view op = "DELEGATECALL") const;
};

struct ClientStats {
    std::size_t requests = 0;     // HTTP attempts issued
    std::size_t cache_hits = 0;
    std::size_t retries = 0;
};

/// JSON-RPC 2.0 client with a concurrency cap, retries and an optional disk cache.
///
/// Cache layout: <cache_dir>/pinned_block holds the block tag of the crawl;
/// <cache_dir>/<method>/<16 hex digits>.json holds {"key": ..., "result": ...}
/// where key is the canonical (method, params, block tag) string.
class RpcClient {
  public:
    explicit RpcClient(RpcEndpoint endpoint, std::optional<std::filesystem::path> cache_dir = std::nullopt);
    ~RpcClient();
    RpcClient(const RpcClient&) = delete;
    RpcClient& operator=(const RpcClient&) = delete;

    /// Raw call. Cached when `cacheable` and a cache directory is set.
    nlohmann::json call(const std::string& method, const nlohmann::json& params, bool cacheable = false);

    /// Pins the block tag used by state queries: reuses the cached pin if one
    /// exists, otherwise asks for the latest block number.
    const std::string& pin_block();
    [[nodiscard]] const std::string& block_tag() const noexcept { return block_tag_; }

    AccountState fetch_account(const Address& address);

    /// Fetches concurrently (bounded by the endpoint cap). `sink` is invoked
    /// from a single thread, in completion order. Results are returned in input order.
    std::vector<AccountState> fetch_accounts(std::span<const Address> addresses,
                                             const std::function<void(const AccountState&)>& sink = {});

    TraceSummary fetch_trace(const Hash32& tx_hash);
    TxRecord fetch_transaction(const Hash32& tx_hash);

    [[nodiscard]] ClientStats stats() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::string block_tag_;
};

}  // namespace erascan::rpc
