// Copyright 2026 The erascan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <erascan/detectors.hpp>

namespace erascan {

/// Dollar price with six fractional digits, kept as an integer.
struct UsdPrice {
    std::uint64_t micro_dollars = 0;

    static std::optional<UsdPrice> parse(std::string_view text);
    [[nodiscard]] std::string str() const;
    bool operator==(const UsdPrice&) const = default;
};

/// ETH price on 25 May 2020.
inline constexpr UsdPrice kDefaultEthPrice{204'360'000};

/// Block time of the transaction that removed the Parity multi-sig library
/// (6 Nov 2017, 15:25:21 UTC).
inline constexpr std::uint64_t kDefaultAttackTimestamp = 1'509'981'921;

struct AnalysisConfig {
    DetectorConfig detector = DetectorConfig::defaults();
    std::uint64_t attack_timestamp = kDefaultAttackTimestamp;
    UsdPrice eth_price = kDefaultEthPrice;
    int workers = 0;  // 0 = number of processors
};

/// Reads a JSON config file; absent keys keep their defaults. Throws
/// std::runtime_error for unreadable files and std::invalid_argument for bad values.
AnalysisConfig load_config(const std::filesystem::path& path);
AnalysisConfig parse_config(std::string_view json_text);

/// One address per line; blank lines and '#' comments ignored.
std::set<Address> load_address_list(const std::filesystem::path& path);

}  // namespace erascan
