// Copyright 2026 The rpclure Authors.
// Licensed under the Apache License, Version 2.0.

#include "rpclure/mock_backend.hpp"

#include <httplib.h>

#include <istream>

namespace rpclure {

using nlohmann::json;

struct MockBackend::Impl {
    httplib::Server server;
    std::thread thread;
    int port = 0;

    mutable std::mutex mutex;
    std::vector<Rule> rules;
    std::vector<RecordedCall> calls;
    std::optional<json> default_result;
    bool garbage_mode = false;

    json respond(const json& request) {
        json reply;
        reply["jsonrpc"] = "2.0";
        reply["id"] = request.contains("id") ? request["id"] : json(nullptr);

        const std::string method = request.value("method", "");
        const json params = request.contains("params") ? request["params"] : json::array();
        {
            std::lock_guard lock(mutex);
            calls.push_back({method, params});
            for (const auto& rule : rules) {
                if (rule.method != method) continue;
                if (rule.params && *rule.params != params) continue;
                if (rule.error) {
                    reply["error"] = *rule.error;
                } else {
                    reply["result"] = rule.result;
                }
                return reply;
            }
            if (default_result) {
                reply["result"] = *default_result;
                return reply;
            }
        }
        reply["error"] = {{"code", -32601}, {"message", "method not scripted"}};
        return reply;
    }
};

MockBackend::MockBackend() : impl_(std::make_unique<Impl>()) {
    impl_->server.Post(R"(/.*)", [this](const httplib::Request& req, httplib::Response& res) {
        {
            std::lock_guard lock(impl_->mutex);
            if (impl_->garbage_mode) {
                res.set_content("ceci n'est pas du json", "text/plain");
                return;
            }
        }
        const json request = json::parse(req.body, nullptr, false);
        if (request.is_discarded()) {
            res.set_content(R"({"jsonrpc":"2.0","id":null,"error":{"code":-32700,"message":"parse error"}})",
                            "application/json");
            return;
        }
        res.set_content(impl_->respond(request).dump(), "application/json");
    });
}

MockBackend::~MockBackend() { stop(); }

void MockBackend::add_rule(Rule rule) {
    std::lock_guard lock(impl_->mutex);
    impl_->rules.push_back(std::move(rule));
}

size_t MockBackend::load_fixture(std::istream& in) {
    size_t loaded = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const json doc = json::parse(line, nullptr, false);
        if (doc.is_discarded() || !doc.is_object() || !doc.contains("method")) continue;
        Rule rule;
        rule.method = doc["method"].get<std::string>();
        if (doc.contains("params")) rule.params = doc["params"];
        if (doc.contains("error")) rule.error = doc["error"];
        else if (doc.contains("result")) rule.result = doc["result"];
        add_rule(std::move(rule));
        ++loaded;
    }
    return loaded;
}

void MockBackend::set_default_result(json result) {
    std::lock_guard lock(impl_->mutex);
    impl_->default_result = std::move(result);
}

void MockBackend::set_garbage_mode(bool on) {
    std::lock_guard lock(impl_->mutex);
    impl_->garbage_mode = on;
}

int MockBackend::start() {
    impl_->port = impl_->server.bind_to_any_port("127.0.0.1");
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return impl_->port;
}

void MockBackend::stop() {
    if (impl_->thread.joinable()) {
        impl_->server.stop();
        impl_->thread.join();
    }
}

std::string MockBackend::url() const {
    return "http://127.0.0.1:" + std::to_string(impl_->port);
}

std::vector<MockBackend::RecordedCall> MockBackend::recorded_calls() const {
    std::lock_guard lock(impl_->mutex);
    return impl_->calls;
}

size_t MockBackend::call_count() const {
    std::lock_guard lock(impl_->mutex);
    return impl_->calls.size();
}

void MockBackend::clear_recorded() {
    std::lock_guard lock(impl_->mutex);
    impl_->calls.clear();
}

}  // namespace rpclure
