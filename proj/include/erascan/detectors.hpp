// Copyright 2026 The erascan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <bitset>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <erascan/common.hpp>
#include <erascan/evm_isa.hpp>
#include <erascan/statedb.hpp>
#include <erascan/symstack.hpp>

namespace erascan {

enum class Label : std::uint8_t {
    MC_S,
    MC_RS,
    StackError,
    OpcodeError,
    DoSMalicious,
    ParityDependent,
    EmptyAccount,
    DoSEOA,
};

inline constexpr std::array<Label, 8> kAllLabels = {
    Label::MC_S,         Label::MC_RS,           Label::StackError,   Label::OpcodeError,
    Label::DoSMalicious, Label::ParityDependent, Label::EmptyAccount, Label::DoSEOA,
};

/// Highest precedence first; the primary label is the first one that fired.
inline constexpr std::array<Label, 8> kLabelPrecedence = {
    Label::MC_S,            Label::OpcodeError,  Label::StackError,   Label::MC_RS,
    Label::ParityDependent, Label::DoSMalicious, Label::EmptyAccount, Label::DoSEOA,
};

std::string_view to_string(Label label) noexcept;
std::optional<Label> parse_label(std::string_view name) noexcept;

/// Reporting categories, one row each in the quantity table.
enum class Category : std::uint8_t {
    DoSContract,
    MeaninglessContract,
    StackOpcodeError,
    EmptyAccount,
    DoSEOA,
};

inline constexpr std::array<Category, 5> kAllCategories = {
    Category::DoSContract, Category::MeaninglessContract, Category::StackOpcodeError, Category::EmptyAccount,
    Category::DoSEOA,
};

Category category_of(Label label) noexcept;
std::string_view to_string(Category category) noexcept;

/// The Parity multi-sig library removed in November 2017.
inline constexpr std::string_view kParityLibrary = "0x863df6bfa4469f3ead0be8f9f2aae51c91a907b4";

struct DetectorConfig {
    std::set<Address> removed_contracts;
    std::size_t dos_op_threshold = 100;    // strictly more than this many
    std::bitset<256> dos_ops;
    sym::ExecBudget exec_budget;
    evm::Fork fork = evm::kDefaultFork;

    /// Parity library as the only removed contract, the seven resource-heavy opcodes.
    static DetectorConfig defaults();

    /// Throws std::invalid_argument when the threshold is zero.
    void validate() const;
};

struct Classification {
    Address address;
    std::vector<Label> labels;       // in precedence order
    std::optional<Label> primary;
    std::map<Label, std::string> evidence;
    bool evidence_incomplete = false;

    [[nodiscard]] bool has(Label l) const noexcept;
    [[nodiscard]] bool erasable() const noexcept { return primary.has_value(); }
    bool operator==(const Classification&) const = default;
};

bool detect_mc_s(ByteView code);
bool detect_mc_rs(ByteView code, evm::Fork fork = evm::kDefaultFork);

/// Underflow or overflow of the first block. The outcome is returned for evidence.
sym::DepthOutcome first_block_depth(ByteView code, evm::Fork fork = evm::kDefaultFork);
bool detect_stack_error(ByteView code, evm::Fork fork = evm::kDefaultFork);

bool detect_opcode_error(ByteView code, evm::Fork fork = evm::kDefaultFork);

/// Count of instructions in `code` whose opcode is one of `config.dos_ops`,
/// or nullopt if the code has more than one basic block.
std::optional<std::size_t> single_block_dos_count(ByteView code, const DetectorConfig& config);
bool detect_dos_malicious(ByteView code, const DetectorConfig& config);

struct ParityResult {
    bool hit = false;
    std::vector<Address> matched;   // sorted, unique
    bool ran_symbolic = false;
    bool inconclusive = false;      // budget ran out without a hit
};

ParityResult detect_parity_dep(ByteView code, const DetectorConfig& config);

bool detect_empty_account(const AccountState& state, const AccountHistory& history);
bool detect_dos_eoa(const AccountState& state, const AccountHistory& history);

Classification classify(const AccountState& state, const AccountHistory& history, const DetectorConfig& config);

}  // namespace erascan
