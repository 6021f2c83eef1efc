// Copyright 2026 The erascan Authors
// SPDX-License-Identifier: Apache-2.0

#include <erascan/statedb.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <tuple>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

namespace erascan {

using nlohmann::json;

namespace {

[[noreturn]] void malformed(const std::string& what) { throw std::invalid_argument(what); }

const json& required(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
        malformed(std::string("missing field '") + key + "'");
    }
    return *it;
}

const json* optional_field(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return nullptr;
    return &*it;
}

Address parse_address(const json& v, const char* key) {
    if (!v.is_string()) malformed(std::string(key) + ": expected hex string");
    auto a = Address::parse(v.get_ref<const std::string&>());
    if (!a) malformed(std::string(key) + ": not a 20-byte hex address");
    return *a;
}

std::optional<Address> parse_optional_address(const json& obj, const char* key) {
    const json* v = optional_field(obj, key);
    if (v == nullptr) return std::nullopt;
    if (v->is_string() && v->get_ref<const std::string&>().empty()) return std::nullopt;
    return parse_address(*v, key);
}

u256 parse_amount(const json& v, const char* key) {
    if (v.is_number_unsigned()) return u256(v.get<std::uint64_t>());
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return u256(v.get<std::int64_t>());
    if (v.is_string()) {
        if (auto q = parse_quantity(v.get_ref<const std::string&>())) return *q;
    }
    malformed(std::string(key) + ": expected non-negative integer (decimal or 0x-hex)");
}

std::uint64_t parse_u64(const json& v, const char* key) {
    const u256 x = parse_amount(v, key);
    if (x > std::numeric_limits<std::uint64_t>::max()) malformed(std::string(key) + ": exceeds 64 bits");
    return static_cast<std::uint64_t>(x);
}

Bytes parse_bytes(const json& obj, const char* key) {
    const json* v = optional_field(obj, key);
    if (v == nullptr) return {};
    if (!v->is_string()) malformed(std::string(key) + ": expected hex string");
    auto b = from_hex(v->get_ref<const std::string&>());
    if (!b) malformed(std::string(key) + ": malformed hex (odd length or bad digit)");
    return *b;
}

json parse_object(std::string_view line) {
    json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (obj.is_discarded() || !obj.is_object()) malformed("not a JSON object");
    return obj;
}

// Sort key for per-address history: (block, intra-block index, file position).
auto order_key(const TxRecord& r, std::size_t pos) {
    return std::make_tuple(r.block_number, r.index.value_or(pos), pos);
}

template <typename Store, typename Item, typename Parse, typename Build>
Loaded<Store> load_lines(std::istream& in, Parse parse, Build build) {
    LoadReport report;
    std::vector<Item> items;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        try {
            items.push_back(parse(line));
            ++report.loaded;
        } catch (const std::exception& e) {
            ++report.rejected;
            report.errors.push_back(LoadError{line_no, e.what()});
        }
    }
    return Loaded<Store>{build(std::move(items), report), std::move(report)};
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IngestError("cannot read " + path.string());
    }
    return in;
}

}  // namespace

AccountState parse_account_line(std::string_view line) {
    const json obj = parse_object(line);
    AccountState a;
    a.address = parse_address(required(obj, "address"), "address");
    a.nonce = parse_u64(required(obj, "nonce"), "nonce");
    a.balance = parse_amount(required(obj, "balance"), "balance");
    a.code = parse_bytes(obj, "code");
    if (const json* root = optional_field(obj, "storage_root")) {
        if (!root->is_string()) malformed("storage_root: expected hex string");
        auto h = Hash32::parse(root->get_ref<const std::string&>());
        if (!h) malformed("storage_root: not a 32-byte hex hash");
        a.storage_root = *h;
    }
    return a;
}

TxRecord parse_tx_line(std::string_view line) {
    const json obj = parse_object(line);
    TxRecord t;
    const json& hash = required(obj, "hash");
    if (!hash.is_string()) malformed("hash: expected hex string");
    auto h = Hash32::parse(hash.get_ref<const std::string&>());
    if (!h) malformed("hash: not a 32-byte hex hash");
    t.hash = *h;

    const json& kind = required(obj, "kind");
    if (kind == "external") {
        t.kind = TxKind::External;
    } else if (kind == "internal") {
        t.kind = TxKind::Internal;
    } else {
        malformed("kind: expected \"external\" or \"internal\"");
    }
    t.from = parse_address(required(obj, "from"), "from");
    t.to = parse_optional_address(obj, "to");
    t.created_address = parse_optional_address(obj, "created_address");
    if (!t.to && !t.created_address) malformed("creation record (no 'to') requires 'created_address'");

    if (const json* v = optional_field(obj, "value")) t.value = parse_amount(*v, "value");
    if (const json* v = optional_field(obj, "gas_used")) t.gas_used = parse_u64(*v, "gas_used");
    if (const json* v = optional_field(obj, "gas_price")) t.gas_price = parse_amount(*v, "gas_price");
    t.input = parse_bytes(obj, "input");
    if (const json* v = optional_field(obj, "error")) {
        if (!v->is_string()) malformed("error: expected string");
        if (!v->get_ref<const std::string&>().empty()) t.error = v->get<std::string>();
    }
    t.timestamp = parse_u64(required(obj, "timestamp"), "timestamp");
    t.block_number = parse_u64(required(obj, "block_number"), "block_number");
    if (const json* v = optional_field(obj, "index")) t.index = parse_u64(*v, "index");
    return t;
}

std::string format_account_line(const AccountState& a) {
    json obj;
    obj["address"] = a.address.hex();
    obj["nonce"] = a.nonce;
    obj["balance"] = to_decimal(a.balance);
    obj["code"] = to_hex(a.code);
    if (a.storage_root) obj["storage_root"] = a.storage_root->hex();
    return obj.dump();
}

std::string format_tx_line(const TxRecord& t) {
    json obj;
    obj["hash"] = t.hash.hex();
    obj["kind"] = t.kind == TxKind::External ? "external" : "internal";
    obj["from"] = t.from.hex();
    obj["to"] = t.to ? json(t.to->hex()) : json(nullptr);
    if (t.created_address) obj["created_address"] = t.created_address->hex();
    obj["value"] = to_decimal(t.value);
    obj["gas_used"] = t.gas_used;
    obj["gas_price"] = to_decimal(t.gas_price);
    obj["input"] = to_hex(t.input);
    if (t.error) obj["error"] = *t.error;
    obj["timestamp"] = t.timestamp;
    obj["block_number"] = t.block_number;
    if (t.index) obj["index"] = *t.index;
    return obj.dump();
}

AccountStore::AccountStore(std::vector<AccountState> accounts) {
    // Later occurrences replace earlier ones.
    std::map<Address, AccountState> unique;
    for (auto& a : accounts) {
        unique.insert_or_assign(a.address, std::move(a));
    }
    accounts_.reserve(unique.size());
    for (auto& [addr, a] : unique) {
        index_.emplace(addr, accounts_.size());
        accounts_.push_back(std::move(a));
    }
}

const AccountState* AccountStore::find(const Address& address) const {
    auto it = index_.find(address);
    return it == index_.end() ? nullptr : &accounts_[it->second];
}

TxStore::TxStore(std::vector<TxRecord> records) : records_(std::move(records)) {
    for (std::size_t i = 0; i < records_.size(); ++i) {
        const TxRecord& r = records_[i];
        std::array<std::optional<Address>, 3> mentioned{r.from, r.to, r.created_address};
        for (std::size_t k = 0; k < mentioned.size(); ++k) {
            if (!mentioned[k]) continue;
            bool dup = false;
            for (std::size_t j = 0; j < k; ++j) dup = dup || mentioned[j] == mentioned[k];
            if (!dup) by_address_[*mentioned[k]].push_back(i);
        }
        by_hash_[r.hash].push_back(i);
    }
    for (auto& [addr, positions] : by_address_) {
        std::sort(positions.begin(), positions.end(), [this](std::size_t a, std::size_t b) {
            return order_key(records_[a], a) < order_key(records_[b], b);
        });
    }
}

std::vector<TxRef> TxStore::related(const Address& address) const {
    std::vector<TxRef> out;
    auto it = by_address_.find(address);
    if (it == by_address_.end()) return out;
    out.reserve(it->second.size());
    for (auto pos : it->second) out.push_back(&records_[pos]);
    return out;
}

std::vector<TxRef> TxStore::by_hash(const Hash32& hash) const {
    std::vector<TxRef> out;
    auto it = by_hash_.find(hash);
    if (it == by_hash_.end()) return out;
    for (auto pos : it->second) out.push_back(&records_[pos]);
    return out;
}

AccountHistory TxStore::history(const Address& address) const {
    AccountHistory h;
    for (TxRef r : related(address)) {
        if (h.oldest == nullptr) h.oldest = r;
        const bool incoming = r->to == address || r->created_address == address;
        const bool outgoing = r->from == address;
        if (r->kind == TxKind::External) {
            if (incoming) h.external_in.push_back(r);
            if (outgoing) h.external_out.push_back(r);
        } else {
            if (incoming) h.internal_in.push_back(r);
            if (outgoing) h.internal_out.push_back(r);
        }
    }
    return h;
}

Loaded<AccountStore> load_accounts(std::istream& in) {
    return load_lines<AccountStore, AccountState>(
        in, parse_account_line, [](std::vector<AccountState> items, LoadReport& report) {
            std::unordered_map<Address, std::size_t> seen;
            for (const auto& a : items) {
                if (++seen[a.address] == 2) {
                    report.warnings.push_back("duplicate address " + a.address.hex() + ", keeping last occurrence");
                    spdlog::warn("duplicate account {} in dump; keeping last occurrence", a.address.hex());
                }
            }
            return AccountStore(std::move(items));
        });
}

Loaded<AccountStore> load_accounts(const std::filesystem::path& path) {
    auto in = open_input(path);
    return load_accounts(in);
}

Loaded<TxStore> load_transactions(std::istream& in) {
    return load_lines<TxStore, TxRecord>(in, parse_tx_line, [](std::vector<TxRecord> items, LoadReport&) {
        return TxStore(std::move(items));
    });
}

Loaded<TxStore> load_transactions(const std::filesystem::path& path) {
    auto in = open_input(path);
    return load_transactions(in);
}

namespace {

template <typename Range, typename Format>
void write_lines(const std::filesystem::path& path, const Range& items, Format format) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (const auto& item : items) {
        out << format(item) << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

void write_accounts(const std::filesystem::path& path, std::span<const AccountState> accounts) {
    write_lines(path, accounts, format_account_line);
}

void write_transactions(const std::filesystem::path& path, std::span<const TxRecord> records) {
    write_lines(path, records, format_tx_line);
}

}  // namespace erascan
