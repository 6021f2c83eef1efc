// Copyright 2026 The erascan Authors
// SPDX-License-Identifier: Apache-2.0

#include <erascan/rpc_fetcher.hpp>

#include <condition_variable>
#include <cstdio>
#include <deque>
#include <fstream>
#include <mutex>
#include <semaphore>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <spdlog/spdlog.h>

namespace erascan::rpc {

using nlohmann::json;

namespace {

constexpr std::size_t kExcerptLength = 200;
constexpr std::int64_t kMethodNotFound = -32601;

std::string excerpt_of(std::string_view s) { return std::string(s.substr(0, kExcerptLength)); }

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

struct SplitUrl {
    std::string base;  // scheme://host[:port]
    std::string path;
};

SplitUrl split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    const auto host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
    const auto slash = url.find('/', host_start);
    if (slash == std::string::npos) return {url, "/"};
    return {url.substr(0, slash), url.substr(slash)};
}

u256 quantity(const json& v, std::string_view what) {
    if (!v.is_string()) throw RpcError(RpcErrorKind::Malformed, std::string(what) + " is not a string", excerpt_of(v.dump()));
    auto q = parse_quantity(v.get<std::string>());
    if (!q) throw RpcError(RpcErrorKind::Malformed, std::string(what) + " is not a quantity", excerpt_of(v.dump()));
    return *q;
}

std::uint64_t small_quantity(const json& v, std::string_view what) {
    const u256 q = quantity(v, what);
    if (q > u256(std::numeric_limits<std::uint64_t>::max())) {
        throw RpcError(RpcErrorKind::Malformed, std::string(what) + " out of range", excerpt_of(v.dump()));
    }
    return static_cast<std::uint64_t>(q);
}

Bytes data_field(const json& v, std::string_view what) {
    if (!v.is_string()) throw RpcError(RpcErrorKind::Malformed, std::string(what) + " is not a string", excerpt_of(v.dump()));
    auto b = from_hex(v.get<std::string>());
    if (!b) throw RpcError(RpcErrorKind::Malformed, std::string(what) + " is not hex data", excerpt_of(v.dump()));
    return std::move(*b);
}

template <typename T>
T fixed_field(const json& v, std::string_view what) {
    if (!v.is_string()) throw RpcError(RpcErrorKind::Malformed, std::string(what) + " is not a string", excerpt_of(v.dump()));
    auto f = T::parse(v.get<std::string>());
    if (!f) throw RpcError(RpcErrorKind::Malformed, std::string(what) + " has the wrong size", excerpt_of(v.dump()));
    return *f;
}

// Stack words come either as 0x-quantities or as bare 64-digit hex.
Address address_from_stack_word(const std::string& word) {
    std::string_view w = word;
    if (w.starts_with("0x") || w.starts_with("0X")) w.remove_prefix(2);
    std::string padded(w.size() % 2, '0');
    padded += w;
    auto raw = from_hex(padded);
    if (!raw) throw RpcError(RpcErrorKind::Malformed, "bad stack word", excerpt_of(word));
    return address_from_word(u256_from_be(*raw));
}

bool is_call_op(std::string_view op) {
    return op == "CALL" || op == "CALLCODE" || op == "DELEGATECALL" || op == "STATICCALL";
}

}  // namespace

std::string_view to_string(RpcErrorKind kind) noexcept {
    switch (kind) {
        case RpcErrorKind::Transport: return "transport";
        case RpcErrorKind::Timeout: return "timeout";
        case RpcErrorKind::Malformed: return "malformed";
        case RpcErrorKind::Unsupported: return "unsupported";
        case RpcErrorKind::NotFound: return "not found";
        case RpcErrorKind::Remote: return "remote";
    }
    return "?";
}

RpcError::RpcError(RpcErrorKind kind, const std::string& message, std::string excerpt)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message + (excerpt.empty() ? "" : " [" + excerpt + "]")),
      kind_(kind),
      excerpt_(std::move(excerpt)) {}

void RpcEndpoint::validate() const {
    if (url.empty()) throw std::invalid_argument("RPC url is empty");
    if (max_concurrent_requests == 0) throw std::invalid_argument("max_concurrent_requests must be at least 1");
    if (retry.max_attempts < 1) throw std::invalid_argument("retry max_attempts must be at least 1");
    if (request_timeout.count() <= 0) throw std::invalid_argument("request_timeout must be positive");
}

bool TraceSummary::calls_to(const Address& target, std::string_view op) const {
    for (const auto& c : calls) {
        if (c.target == target && c.op == op) return true;
    }
    return false;
}

struct RpcClient::Impl {
    RpcEndpoint endpoint;
    SplitUrl url;
    std::optional<std::filesystem::path> cache_dir;
    std::counting_semaphore<> slots;
    std::atomic<std::uint64_t> next_id{1};
    std::atomic<std::size_t> requests{0};
    std::atomic<std::size_t> cache_hits{0};
    std::atomic<std::size_t> retries{0};

    Impl(RpcEndpoint e, std::optional<std::filesystem::path> dir)
        : endpoint(std::move(e)),
          url(split_url(endpoint.url)),
          cache_dir(std::move(dir)),
          slots(static_cast<std::ptrdiff_t>(endpoint.max_concurrent_requests)) {}

    std::filesystem::path cache_path(const std::string& method, const std::string& key) const {
        char name[32];
        std::snprintf(name, sizeof name, "%016llx.json", static_cast<unsigned long long>(fnv1a(key)));
        return *cache_dir / method / name;
    }

    std::optional<json> cache_get(const std::string& method, const std::string& key) {
        if (!cache_dir) return std::nullopt;
        std::ifstream in(cache_path(method, key));
        if (!in) return std::nullopt;
        const json entry = json::parse(in, nullptr, false);
        // A torn or colliding entry is ignored and refetched.
        if (entry.is_discarded() || !entry.contains("key") || entry["key"] != key) return std::nullopt;
        ++cache_hits;
        return std::optional<json>(std::in_place, entry.at("result"));
    }

    void cache_put(const std::string& method, const std::string& key, const json& result) {
        if (!cache_dir) return;
        const auto path = cache_path(method, key);
        std::filesystem::create_directories(path.parent_path());
        auto tmp = path;
        tmp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            out << json{{"key", key}, {"result", result}}.dump();
            if (!out) return;
        }
        std::filesystem::rename(tmp, path);
    }

    json post_once(const std::string& body) {
        slots.acquire();
        struct Release {
            std::counting_semaphore<>& s;
            ~Release() { s.release(); }
        } release{slots};

        ++requests;
        httplib::Client client(url.base);
        const auto secs = endpoint.request_timeout.count() / 1000;
        const auto usecs = (endpoint.request_timeout.count() % 1000) * 1000;
        client.set_connection_timeout(secs, usecs);
        client.set_read_timeout(secs, usecs);
        client.set_write_timeout(secs, usecs);
        auto res = client.Post(url.path, body, "application/json");
        if (!res) {
            const auto err = res.error();
            const bool timeout = err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read;
            throw RpcError(timeout ? RpcErrorKind::Timeout : RpcErrorKind::Transport, httplib::to_string(err));
        }
        if (res->status >= 500) {
            throw RpcError(RpcErrorKind::Transport, "HTTP " + std::to_string(res->status), excerpt_of(res->body));
        }
        if (res->status != 200) {
            throw RpcError(RpcErrorKind::Remote, "HTTP " + std::to_string(res->status), excerpt_of(res->body));
        }
        json reply = json::parse(res->body, nullptr, false);
        if (reply.is_discarded() || !reply.is_object()) {
            throw RpcError(RpcErrorKind::Malformed, "response is not a JSON object", excerpt_of(res->body));
        }
        return reply;
    }

    json call(const std::string& method, const json& params, const std::string& block_tag, bool cacheable) {
        const std::string key = method + "|" + params.dump() + "|" + block_tag;
        if (cacheable) {
            if (auto hit = cache_get(method, key)) return std::move(*hit);
        }
        const json request{{"jsonrpc", "2.0"}, {"id", next_id++}, {"method", method}, {"params", params}};
        const std::string body = request.dump();

        json reply;
        auto delay = endpoint.retry.backoff_base;
        for (int attempt = 1;; ++attempt) {
            try {
                reply = post_once(body);
                break;
            } catch (const RpcError& e) {
                const bool retryable = e.kind() == RpcErrorKind::Transport || e.kind() == RpcErrorKind::Timeout;
                if (!retryable || attempt >= endpoint.retry.max_attempts) throw;
                spdlog::debug("{} attempt {} failed: {}", method, attempt, e.what());
                ++retries;
                std::this_thread::sleep_for(delay);
                delay *= 2;
            }
        }

        if (const auto err = reply.find("error"); err != reply.end() && !err->is_null()) {
            const std::int64_t code = err->value("code", std::int64_t{0});
            const std::string message = err->value("message", std::string{});
            if (code == kMethodNotFound) throw RpcError(RpcErrorKind::Unsupported, method + ": " + message);
            if (message.find("not found") != std::string::npos) throw RpcError(RpcErrorKind::NotFound, message);
            throw RpcError(RpcErrorKind::Remote, method + ": " + message, excerpt_of(err->dump()));
        }
        if (!reply.contains("result")) {
            throw RpcError(RpcErrorKind::Malformed, method + ": no result field", excerpt_of(reply.dump()));
        }
        json result = std::move(reply["result"]);
        if (cacheable && !result.is_null()) cache_put(method, key, result);
        return result;
    }
};

RpcClient::RpcClient(RpcEndpoint endpoint, std::optional<std::filesystem::path> cache_dir) {
    endpoint.validate();
    if (cache_dir) std::filesystem::create_directories(*cache_dir);
    impl_ = std::make_unique<Impl>(std::move(endpoint), std::move(cache_dir));
}

RpcClient::~RpcClient() = default;

json RpcClient::call(const std::string& method, const json& params, bool cacheable) {
    return impl_->call(method, params, "", cacheable);
}

const std::string& RpcClient::pin_block() {
    if (!block_tag_.empty()) return block_tag_;
    std::optional<std::filesystem::path> pin_file;
    if (impl_->cache_dir) {
        pin_file = *impl_->cache_dir / "pinned_block";
        std::ifstream in(*pin_file);
        std::string tag;
        if (in >> tag && parse_quantity(tag)) {
            block_tag_ = tag;
            return block_tag_;
        }
    }
    const json latest = impl_->call("eth_blockNumber", json::array(), "", false);
    block_tag_ = to_hex_quantity(quantity(latest, "eth_blockNumber"));
    if (pin_file) {
        std::ofstream out(*pin_file, std::ios::trunc);
        out << block_tag_ << '\n';
    }
    return block_tag_;
}

AccountState RpcClient::fetch_account(const Address& address) {
    const std::string tag = pin_block();
    const json params{address.hex(), tag};
    AccountState a;
    a.address = address;
    a.balance = quantity(impl_->call("eth_getBalance", params, tag, true), "balance");
    a.nonce = small_quantity(impl_->call("eth_getTransactionCount", params, tag, true), "nonce");
    a.code = data_field(impl_->call("eth_getCode", params, tag, true), "code");
    return a;
}

std::vector<AccountState> RpcClient::fetch_accounts(std::span<const Address> addresses,
                                                    const std::function<void(const AccountState&)>& sink) {
    pin_block();
    std::vector<AccountState> out(addresses.size());
    if (addresses.empty()) return out;

    struct Done {
        std::size_t index;
        std::optional<AccountState> state;
        std::exception_ptr error;
    };
    std::mutex mu;
    std::condition_variable cv;
    std::deque<Done> queue;
    std::atomic<std::size_t> next{0};

    const std::size_t n_workers = std::min(impl_->endpoint.max_concurrent_requests, addresses.size());
    std::vector<std::jthread> workers;
    workers.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) {
        workers.emplace_back([&] {
            for (std::size_t i = next++; i < addresses.size(); i = next++) {
                Done d{i, std::nullopt, nullptr};
                try {
                    d.state = fetch_account(addresses[i]);
                } catch (...) {
                    d.error = std::current_exception();
                }
                {
                    std::lock_guard lock(mu);
                    queue.push_back(std::move(d));
                }
                cv.notify_one();
            }
        });
    }

    // The calling thread is the only writer of `out` and the only caller of `sink`.
    std::exception_ptr first_error;
    for (std::size_t received = 0; received < addresses.size(); ++received) {
        std::unique_lock lock(mu);
        cv.wait(lock, [&] { return !queue.empty(); });
        Done d = std::move(queue.front());
        queue.pop_front();
        lock.unlock();
        if (d.error) {
            if (!first_error) first_error = d.error;
            continue;
        }
        if (sink) sink(*d.state);
        out[d.index] = std::move(*d.state);
    }
    workers.clear();
    if (first_error) std::rethrow_exception(first_error);
    return out;
}

TraceSummary RpcClient::fetch_trace(const Hash32& tx_hash) {
    const json result = impl_->call("debug_traceTransaction", json{tx_hash.hex(), json::object()}, "", true);
    if (result.is_null()) throw RpcError(RpcErrorKind::NotFound, "transaction " + tx_hash.hex());
    const auto logs = result.find("structLogs");
    if (logs == result.end() || !logs->is_array()) {
        throw RpcError(RpcErrorKind::Malformed, "trace has no structLogs", excerpt_of(result.dump()));
    }
    TraceSummary summary;
    for (const auto& entry : *logs) {
        TraceStep s;
        s.pc = entry.value("pc", std::uint64_t{0});
        s.op = entry.value("op", std::string{});
        s.depth = entry.value("depth", std::uint32_t{0});
        if (is_call_op(s.op)) {
            const auto stack = entry.find("stack");
            if (stack == entry.end() || !stack->is_array() || stack->size() < 2) {
                throw RpcError(RpcErrorKind::Malformed, s.op + " step without operands", excerpt_of(entry.dump()));
            }
            // Stack is listed bottom first; the target is the second item from the top.
            const auto& word = (*stack)[stack->size() - 2];
            summary.calls.push_back(TraceCall{s.op, address_from_stack_word(word.get<std::string>()), s.pc, s.depth});
        }
        summary.steps.push_back(std::move(s));
    }
    return summary;
}

TxRecord RpcClient::fetch_transaction(const Hash32& tx_hash) {
    const json tx = impl_->call("eth_getTransactionByHash", json{tx_hash.hex()}, "", true);
    if (tx.is_null()) throw RpcError(RpcErrorKind::NotFound, "transaction " + tx_hash.hex());
    const json receipt = impl_->call("eth_getTransactionReceipt", json{tx_hash.hex()}, "", true);
    if (receipt.is_null()) throw RpcError(RpcErrorKind::NotFound, "receipt " + tx_hash.hex());
    try {
        TxRecord r;
        r.hash = tx_hash;
        r.kind = TxKind::External;
        r.from = fixed_field<Address>(tx.at("from"), "from");
        if (!tx.at("to").is_null()) r.to = fixed_field<Address>(tx.at("to"), "to");
        if (const auto it = receipt.find("contractAddress"); it != receipt.end() && !it->is_null()) {
            r.created_address = fixed_field<Address>(*it, "contractAddress");
        }
        r.value = quantity(tx.at("value"), "value");
        r.gas_price = quantity(tx.at("gasPrice"), "gasPrice");
        r.gas_used = small_quantity(receipt.at("gasUsed"), "gasUsed");
        r.input = data_field(tx.at("input"), "input");
        r.block_number = small_quantity(tx.at("blockNumber"), "blockNumber");
        r.index = small_quantity(tx.at("transactionIndex"), "transactionIndex");
        if (const auto it = receipt.find("status"); it != receipt.end() && !it->is_null()) {
            if (quantity(*it, "status") == 0) r.error = "Failed";
        }
        const json block = impl_->call("eth_getBlockByNumber", json{to_hex_quantity(r.block_number), false}, "", true);
        if (block.is_null()) throw RpcError(RpcErrorKind::NotFound, "block " + std::to_string(r.block_number));
        r.timestamp = small_quantity(block.at("timestamp"), "timestamp");
        return r;
    } catch (const json::exception& e) {
        throw RpcError(RpcErrorKind::Malformed, e.what(), excerpt_of(tx.dump()));
    }
}

ClientStats RpcClient::stats() const {
    return ClientStats{impl_->requests.load(), impl_->cache_hits.load(), impl_->retries.load()};
}

}  // namespace erascan::rpc
