// Copyright 2026 The erascan Authors
// SPDX-License-Identifier: Apache-2.0

#include <erascan/report.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace erascan {

using nlohmann::json;

namespace {

struct CategoryAccumulator {
    std::set<std::size_t> counted;    // tx positions already summed
    std::set<std::size_t> excluded;   // pre-attack Parity wallet txs
    std::set<std::size_t> reverted;
};

bool touches_parity_wallet(const TxRecord& r, const std::set<Address>& wallets) {
    if (wallets.contains(r.from)) return true;
    if (r.to && wallets.contains(*r.to)) return true;
    return r.created_address && wallets.contains(*r.created_address);
}

std::string plural(std::size_t n, std::string_view word) {
    std::string s = std::to_string(n) + " " + std::string(word);
    if (n != 1) s += "s";
    return s;
}

}  // namespace

std::string usd_value(const Wei& wei, UsdPrice price) {
    // wei * micro$/ETH / 1e18 Wei/ETH / 1e4 micro$/cent
    static const u512 kCentDivisor = u512(10000000000ULL) * u512(1000000000000ULL);
    const u512 scaled = u512(wei) * price.micro_dollars;
    const u512 cents = (scaled + kCentDivisor / 2) / kCentDivisor;
    const u512 whole = cents / 100;
    const unsigned frac = static_cast<unsigned>(cents % 100);
    std::string out = whole.str();
    out += '.';
    out += static_cast<char>('0' + frac / 10);
    out += static_cast<char>('0' + frac % 10);
    return out;
}

WasteReport compute_waste(std::span<const Classification> classified, const TxStore& txs,
                          const AccountStore& accounts, const WasteConfig& config) {
    WasteReport report;
    report.eth_price = config.eth_price;
    for (Category c : kAllCategories) report.per_category[c];

    std::set<Address> parity_wallets;
    for (const auto& c : classified) {
        if (c.has(Label::ParityDependent)) parity_wallets.insert(c.address);
    }

    std::map<Category, CategoryAccumulator> acc;
    for (const auto& c : classified) {
        if (!c.primary) continue;
        const Category cat = category_of(*c.primary);
        CategoryWaste& w = report.per_category[cat];
        CategoryAccumulator& a = acc[cat];
        ++w.accounts;
        if (const AccountState* s = accounts.find(c.address)) w.eth_locked += s->balance;

        for (TxRef r : txs.related(c.address)) {
            const std::size_t pos = txs.position(r);
            if (r->error && *r->error == kRevertedError && r->value != 0 && a.reverted.insert(pos).second) {
                w.eth_returned_excluded += r->value;
            }
            if (r->timestamp < config.attack_timestamp && touches_parity_wallet(*r, parity_wallets)) {
                if (a.excluded.insert(pos).second) {
                    ++w.excluded_transactions;
                    w.gas_excluded_pre_attack += r->gas_used;
                    w.gas_cost_excluded_pre_attack += Wei(r->gas_used) * r->gas_price;
                }
                continue;
            }
            if (!a.counted.insert(pos).second) continue;
            ++w.transactions;
            w.gas_wasted += r->gas_used;
            w.gas_cost_wei += Wei(r->gas_used) * r->gas_price;
        }
    }

    for (const auto& [cat, w] : report.per_category) {
        CategoryWaste& t = report.total;
        t.accounts += w.accounts;
        t.transactions += w.transactions;
        t.gas_wasted += w.gas_wasted;
        t.gas_cost_wei += w.gas_cost_wei;
        t.gas_excluded_pre_attack += w.gas_excluded_pre_attack;
        t.gas_cost_excluded_pre_attack += w.gas_cost_excluded_pre_attack;
        t.eth_locked += w.eth_locked;
        t.eth_returned_excluded += w.eth_returned_excluded;
        t.excluded_transactions += w.excluded_transactions;

        const auto name = std::string(to_string(cat));
        if (w.excluded_transactions != 0) {
            report.exclusions_applied.push_back(name + ": " + plural(w.excluded_transactions, "pre-attack Parity wallet transaction") +
                                                " excluded (" + std::to_string(w.gas_excluded_pre_attack) + " gas)");
        }
        if (w.eth_returned_excluded != 0) {
            report.exclusions_applied.push_back(name + ": " + to_decimal(w.eth_returned_excluded) +
                                                " Wei returned by reverted transactions excluded");
        }
    }
    return report;
}

CdfSet compute_cdf(std::span<const Classification> classified, const TxStore& txs) {
    CdfSet out;
    std::map<Label, std::vector<std::uint64_t>> times;
    for (Label l : kAllLabels) {
        out.series[l].category = l;
        out.without_transactions[l] = 0;
    }
    for (const auto& c : classified) {
        if (!c.primary) continue;
        const AccountHistory h = txs.history(c.address);
        if (h.oldest == nullptr) {
            ++out.without_transactions[*c.primary];
            continue;
        }
        times[*c.primary].push_back(h.oldest->timestamp);
    }
    for (auto& [label, ts] : times) {
        std::sort(ts.begin(), ts.end());
        auto& points = out.series[label].points;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            if (!points.empty() && points.back().timestamp == ts[i]) {
                points.back().cumulative = i + 1;
            } else {
                points.push_back({ts[i], i + 1});
            }
        }
    }
    return out;
}

json classification_to_json(const Classification& c) {
    json labels = json::array();
    for (Label l : c.labels) labels.push_back(std::string(to_string(l)));
    json evidence = json::object();
    for (const auto& [l, text] : c.evidence) evidence[std::string(to_string(l))] = text;
    json j;
    j["address"] = c.address.hex();
    j["labels"] = std::move(labels);
    j["primary"] = c.primary ? json(std::string(to_string(*c.primary))) : json(nullptr);
    j["evidence"] = std::move(evidence);
    j["evidence_incomplete"] = c.evidence_incomplete;
    return j;
}

Classification classification_from_json(const json& j) {
    auto label_of = [](const json& v) {
        auto l = parse_label(v.get<std::string>());
        if (!l) throw std::invalid_argument("unknown label " + v.dump());
        return *l;
    };
    Classification c;
    auto addr = Address::parse(j.at("address").get<std::string>());
    if (!addr) throw std::invalid_argument("bad address");
    c.address = *addr;
    for (const auto& v : j.at("labels")) c.labels.push_back(label_of(v));
    if (const auto it = j.find("primary"); it != j.end() && !it->is_null()) c.primary = label_of(*it);
    if (const auto it = j.find("evidence"); it != j.end()) {
        for (const auto& [k, v] : it->items()) c.evidence[label_of(json(k))] = v.get<std::string>();
    }
    c.evidence_incomplete = j.value("evidence_incomplete", false);
    return c;
}

void write_classifications(const std::filesystem::path& path, std::span<const Classification> classified) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (const auto& c : classified) out << classification_to_json(c).dump() << '\n';
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<Classification> load_classifications(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot read " + path.string());
    std::vector<Classification> out;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(classification_from_json(json::parse(line)));
        } catch (const std::exception& e) {
            throw IngestError(path.string() + ":" + std::to_string(n) + ": " + e.what());
        }
    }
    return out;
}

namespace {

json category_waste_json(const CategoryWaste& w, UsdPrice price) {
    return json{
        {"accounts", w.accounts},
        {"transactions", w.transactions},
        {"gas_wasted", w.gas_wasted},
        {"gas_cost_wei", to_decimal(w.gas_cost_wei)},
        {"gas_excluded_pre_attack", w.gas_excluded_pre_attack},
        {"gas_cost_excluded_pre_attack_wei", to_decimal(w.gas_cost_excluded_pre_attack)},
        {"excluded_transactions", w.excluded_transactions},
        {"eth_locked_wei", to_decimal(w.eth_locked)},
        {"eth_returned_excluded_wei", to_decimal(w.eth_returned_excluded)},
        {"usd_value", usd_value(w.wasted_wei(), price)},
    };
}

}  // namespace

json waste_to_json(const WasteReport& report) {
    json cats = json::array();
    for (const auto& [cat, w] : report.per_category) {
        json row = category_waste_json(w, report.eth_price);
        row["category"] = std::string(to_string(cat));
        cats.push_back(std::move(row));
    }
    return json{
        {"usd_per_eth", report.eth_price.str()},
        {"categories", std::move(cats)},
        {"total", category_waste_json(report.total, report.eth_price)},
        {"exclusions_applied", report.exclusions_applied},
    };
}

}  // namespace erascan
