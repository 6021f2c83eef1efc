// Copyright 2026 The erascan Authors
// SPDX-License-Identifier: Apache-2.0

#include "fixtures.hpp"

#include <stdexcept>

#include <httplib.h>

namespace erascan::testing {

using nlohmann::json;

struct MockRpcServer::Impl {
    httplib::Server server;
    std::thread thread;
    int port = 0;
    mutable std::mutex mu;
    std::map<std::string, Handler> handlers;
    std::map<std::string, std::size_t> per_method;
    int stalls_left = 0;
    std::chrono::milliseconds stall{0};
};

MockRpcServer::MockRpcServer() : impl_(std::make_unique<Impl>()) {
    impl_->server.Post("/", [this](const httplib::Request& req, httplib::Response& res) {
        const std::size_t now = ++in_flight_;
        for (std::size_t seen = max_in_flight_.load(); now > seen && !max_in_flight_.compare_exchange_weak(seen, now);) {
        }
        ++requests_;

        std::chrono::milliseconds pause{delay_ms_.load()};
        Handler handler;
        json reply;
        const json request = json::parse(req.body, nullptr, false);
        const std::string method = request.is_object() ? request.value("method", std::string{}) : std::string{};
        {
            std::lock_guard lock(impl_->mu);
            ++impl_->per_method[method];
            if (impl_->stalls_left > 0) {
                --impl_->stalls_left;
                pause = impl_->stall;
            }
            if (auto it = impl_->handlers.find(method); it != impl_->handlers.end()) handler = it->second;
        }
        if (pause.count() > 0) std::this_thread::sleep_for(pause);

        reply["jsonrpc"] = "2.0";
        reply["id"] = request.is_object() ? request.value("id", json(nullptr)) : json(nullptr);
        if (!handler) {
            reply["error"] = {{"code", -32601}, {"message", "the method " + method + " does not exist/is not available"}};
        } else {
            try {
                reply["result"] = handler(request.value("params", json::array()));
            } catch (const MockRpcError& e) {
                reply["error"] = {{"code", e.code}, {"message", e.message}};
            }
        }
        res.set_content(reply.dump(), "application/json");
        --in_flight_;
    });
    impl_->port = impl_->server.bind_to_any_port("127.0.0.1");
    if (impl_->port <= 0) throw std::runtime_error("mock server could not bind");
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
}

MockRpcServer::~MockRpcServer() {
    impl_->server.stop();
    if (impl_->thread.joinable()) impl_->thread.join();
}

void MockRpcServer::on(const std::string& method, Handler handler) {
    std::lock_guard lock(impl_->mu);
    impl_->handlers[method] = std::move(handler);
}

void MockRpcServer::on_result(const std::string& method, json result) {
    on(method, [result = std::move(result)](const json&) { return result; });
}

void MockRpcServer::stall_next(int n, std::chrono::milliseconds stall) {
    std::lock_guard lock(impl_->mu);
    impl_->stalls_left = n;
    impl_->stall = stall;
}

std::string MockRpcServer::url() const { return "http://127.0.0.1:" + std::to_string(impl_->port) + "/"; }

std::size_t MockRpcServer::requests_for(const std::string& method) const {
    std::lock_guard lock(impl_->mu);
    const auto it = impl_->per_method.find(method);
    return it == impl_->per_method.end() ? 0 : it->second;
}

void MockRpcServer::reset_counters() {
    std::lock_guard lock(impl_->mu);
    impl_->per_method.clear();
    max_in_flight_ = 0;
    requests_ = 0;
}

}  // namespace erascan::testing
