// Copyright 2026 The erascan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <erascan/common.hpp>

namespace erascan {

/// World-state record of one account.
struct AccountState {
    Address address;
    std::uint64_t nonce = 0;
    Wei balance = 0;
    std::optional<Hash32> storage_root;
    Bytes code;

    [[nodiscard]] bool is_eoa() const noexcept { return code.empty(); }
    bool operator==(const AccountState&) const = default;
};

enum class TxKind { External, Internal };

struct TxRecord {
    Hash32 hash;
    TxKind kind = TxKind::External;
    Address from;
    std::optional<Address> to;               // nullopt for contract creation
    std::optional<Address> created_address;
    Wei value = 0;
    std::uint64_t gas_used = 0;
    Wei gas_price = 0;
    Bytes input;
    std::optional<std::string> error;        // e.g. "Out of Gas Error"
    std::uint64_t timestamp = 0;
    std::uint64_t block_number = 0;
    std::optional<std::uint64_t> index;      // position inside the block

    [[nodiscard]] bool is_creation() const noexcept { return !to.has_value() && created_address.has_value(); }
    [[nodiscard]] bool mentions(const Address& a) const noexcept {
        return from == a || to == a || created_address == a;
    }
    bool operator==(const TxRecord&) const = default;
};

using TxRef = const TxRecord*;

/// Transactions of one address partitioned by direction and kind, each
/// ordered by (block_number, intra-block index).
struct AccountHistory {
    std::vector<TxRef> external_in;
    std::vector<TxRef> external_out;
    std::vector<TxRef> internal_in;
    std::vector<TxRef> internal_out;
    TxRef oldest = nullptr;

    [[nodiscard]] std::size_t external_count() const noexcept { return external_in.size() + external_out.size(); }
    [[nodiscard]] bool empty() const noexcept { return oldest == nullptr; }
};

struct LoadError {
    std::size_t line = 0;
    std::string message;
};

struct LoadReport {
    std::size_t loaded = 0;
    std::size_t rejected = 0;
    std::vector<LoadError> errors;
    std::vector<std::string> warnings;
};

/// Raised when an input file cannot be read at all.
class IngestError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class AccountStore {
  public:
    AccountStore() = default;
    explicit AccountStore(std::vector<AccountState> accounts);

    [[nodiscard]] const AccountState* find(const Address& address) const;
    /// Sorted by address.
    [[nodiscard]] std::span<const AccountState> accounts() const noexcept { return accounts_; }
    [[nodiscard]] std::size_t size() const noexcept { return accounts_.size(); }

    bool operator==(const AccountStore& other) const { return accounts_ == other.accounts_; }

  private:
    std::vector<AccountState> accounts_;
    std::unordered_map<Address, std::size_t> index_;
};

class TxStore {
  public:
    TxStore() = default;
    explicit TxStore(std::vector<TxRecord> records);

    [[nodiscard]] AccountHistory history(const Address& address) const;
    /// Records mentioning `address`, ordered by (block_number, index).
    [[nodiscard]] std::vector<TxRef> related(const Address& address) const;
    /// All records sharing a transaction hash (an external call and its internals).
    [[nodiscard]] std::vector<TxRef> by_hash(const Hash32& hash) const;
    [[nodiscard]] std::span<const TxRecord> records() const noexcept { return records_; }
    [[nodiscard]] std::size_t size() const noexcept { return records_.size(); }
    /// Position of a record inside records(); stable identity for deduplication.
    [[nodiscard]] std::size_t position(TxRef record) const noexcept {
        return static_cast<std::size_t>(record - records_.data());
    }

    bool operator==(const TxStore& other) const { return records_ == other.records_; }

  private:
    std::vector<TxRecord> records_;
    std::unordered_map<Address, std::vector<std::size_t>> by_address_;
    std::unordered_map<Hash32, std::vector<std::size_t>> by_hash_;
};

template <typename Store>
struct Loaded {
    Store store;
    LoadReport report;
};

/// Parses one line-delimited account record. Throws std::invalid_argument on malformed input.
AccountState parse_account_line(std::string_view line);
TxRecord parse_tx_line(std::string_view line);

std::string format_account_line(const AccountState& account);
std::string format_tx_line(const TxRecord& tx);

Loaded<AccountStore> load_accounts(std::istream& in);
Loaded<AccountStore> load_accounts(const std::filesystem::path& path);
Loaded<TxStore> load_transactions(std::istream& in);
Loaded<TxStore> load_transactions(const std::filesystem::path& path);

void write_accounts(const std::filesystem::path& path, std::span<const AccountState> accounts);
void write_transactions(const std::filesystem::path& path, std::span<const TxRecord> records);

}  // namespace erascan
