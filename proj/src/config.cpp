// Copyright 2026 The erascan Authors
// SPDX-License-Identifier: Apache-2.0

#include <erascan/config.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace erascan {

using nlohmann::json;

std::optional<UsdPrice> UsdPrice::parse(std::string_view text) {
    if (text.empty()) return std::nullopt;
    std::uint64_t whole = 0;
    std::uint64_t frac = 0;
    int frac_digits = 0;
    bool seen_dot = false;
    bool any_digit = false;
    for (char c : text) {
        if (c == '.') {
            if (seen_dot) return std::nullopt;
            seen_dot = true;
            continue;
        }
        if (c < '0' || c > '9') return std::nullopt;
        any_digit = true;
        const auto d = static_cast<std::uint64_t>(c - '0');
        if (seen_dot) {
            if (frac_digits == 6) return std::nullopt;
            frac = frac * 10 + d;
            ++frac_digits;
        } else {
            if (whole > 1'000'000'000'000ULL) return std::nullopt;
            whole = whole * 10 + d;
        }
    }
    if (!any_digit) return std::nullopt;
    while (frac_digits < 6) {
        frac *= 10;
        ++frac_digits;
    }
    return UsdPrice{whole * 1'000'000 + frac};
}

std::string UsdPrice::str() const {
    std::string frac = std::to_string(micro_dollars % 1'000'000);
    frac.insert(0, 6 - frac.size(), '0');
    while (frac.size() > 2 && frac.back() == '0') frac.pop_back();
    return std::to_string(micro_dollars / 1'000'000) + "." + frac;
}

AnalysisConfig parse_config(std::string_view json_text) {
    const json j = json::parse(json_text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw std::invalid_argument("config: not a JSON object");

    AnalysisConfig cfg;
    DetectorConfig& d = cfg.detector;
    if (auto it = j.find("removed_contracts"); it != j.end()) {
        d.removed_contracts.clear();
        for (const auto& v : *it) {
            auto a = Address::parse(v.get<std::string>());
            if (!a) throw std::invalid_argument("config: removed_contracts entry is not a 20-byte address");
            d.removed_contracts.insert(*a);
        }
    }
    if (auto it = j.find("dos_op_threshold"); it != j.end()) d.dos_op_threshold = it->get<std::size_t>();
    if (auto it = j.find("dos_ops"); it != j.end()) {
        d.dos_ops.reset();
        for (const auto& v : *it) {
            auto b = evm::opcode_by_mnemonic(v.get<std::string>());
            if (!b) throw std::invalid_argument("config: unknown opcode mnemonic " + v.get<std::string>());
            d.dos_ops.set(*b);
        }
    }
    if (auto it = j.find("exec_budget"); it != j.end()) {
        if (auto m = it->find("max_paths"); m != it->end()) d.exec_budget.max_paths = m->get<std::size_t>();
        if (auto m = it->find("max_steps"); m != it->end()) d.exec_budget.max_steps = m->get<std::size_t>();
        if (auto m = it->find("time_limit_ms"); m != it->end())
            d.exec_budget.time_limit = std::chrono::milliseconds(m->get<std::int64_t>());
        if (auto m = it->find("max_revisits"); m != it->end()) d.exec_budget.max_revisits = m->get<unsigned>();
    }
    if (auto it = j.find("fork"); it != j.end()) {
        auto f = evm::parse_fork(it->get<std::string>());
        if (!f) throw std::invalid_argument("config: unknown fork " + it->get<std::string>());
        d.fork = *f;
    }
    if (auto it = j.find("attack_timestamp"); it != j.end()) cfg.attack_timestamp = it->get<std::uint64_t>();
    if (auto it = j.find("usd_price"); it != j.end()) {
        const std::string text = it->is_string() ? it->get<std::string>() : it->dump();
        auto p = UsdPrice::parse(text);
        if (!p) throw std::invalid_argument("config: bad usd_price " + text);
        cfg.eth_price = *p;
    }
    if (auto it = j.find("workers"); it != j.end()) cfg.workers = it->get<int>();
    d.validate();
    return cfg;
}

AnalysisConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_config(ss.str());
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
}

std::set<Address> load_address_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read address list " + path.string());
    std::set<Address> out;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        auto a = Address::parse(line.substr(first, last - first + 1));
        if (!a) throw std::invalid_argument(path.string() + ":" + std::to_string(n) + ": not an address");
        out.insert(*a);
    }
    return out;
}

}  // namespace erascan
