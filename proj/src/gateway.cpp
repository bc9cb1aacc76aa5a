// Copyright 2026 The rpclure Authors.
// Licensed under the Apache License, Version 2.0.

#include "rpclure/gateway.hpp"

#include <httplib.h>

#include <thread>

#include "rpclure/secp256k1.hpp"

namespace rpclure {

using nlohmann::json;

Forwarder http_forwarder(BackendEndpoint endpoint) {
    return [endpoint](const std::string& method, const json& params) {
        return forward(endpoint, method, params);
    };
}

namespace {

constexpr const char* kParseErrorMethod = "<parse-error>";

json error_response(const json& id, int code, const std::string& message) {
    json resp;
    resp["jsonrpc"] = "2.0";
    resp["id"] = id;
    resp["error"] = {{"code", code}, {"message", message}};
    return resp;
}

json result_response(const json& id, json result) {
    json resp;
    resp["jsonrpc"] = "2.0";
    resp["id"] = id;
    resp["result"] = std::move(result);
    return resp;
}

std::string random_tx_hash() {
    const Hash32 h = csprng_hash32();
    return h.to_hex();
}

std::string summarize(const json& result) {
    if (result.is_string()) return result.get<std::string>();
    return result.dump();
}

bool params_have(const json& params, size_t index, json::value_t type) {
    if (!params.is_array() || params.size() <= index) return false;
    if (type == json::value_t::object) return params[index].is_object();
    if (type == json::value_t::string) return params[index].is_string();
    return true;
}

bool same_address(const std::string& a, const std::string& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (std::tolower(static_cast<unsigned char>(a[i])) !=
            std::tolower(static_cast<unsigned char>(b[i])))
            return false;
    return true;
}

}  // namespace

Gateway::Gateway(HoneypotConfig config, Forwarder forwarder)
    : config_(std::move(config)), forwarder_(std::move(forwarder)) {}

ForwardOutcome Gateway::emulate(const std::string& method, const json& params) const {
    const auto invalid = [&] {
        return ForwardOutcome::synthetic(-32602, "invalid params for " + method);
    };

    if (method == "eth_sendTransaction" || method == "eth_signTransaction") {
        if (!params_have(params, 0, json::value_t::object)) return invalid();
        return ForwardOutcome::ok(random_tx_hash());
    }
    if (method == "eth_sendRawTransaction") {
        if (!params_have(params, 0, json::value_t::string)) return invalid();
        return ForwardOutcome::ok(random_tx_hash());
    }
    if (method == "eth_accounts" || method == "personal_listAccounts")
        return ForwardOutcome::ok(json::array({config_.decoy_account.to_hex()}));
    if (method == "eth_coinbase") return ForwardOutcome::ok(config_.decoy_account.to_hex());
    if (method == "personal_listWallets") {
        // geth-shaped wallet entry for the decoy keystore
        json wallet;
        wallet["accounts"] = json::array(
            {{{"address", config_.decoy_account.to_hex()},
              {"url", "keystore:///data/keystore/" + config_.decoy_account.to_hex().substr(2)}}});
        wallet["status"] = "Locked";
        wallet["url"] = "keystore:///data/keystore/" + config_.decoy_account.to_hex().substr(2);
        return ForwardOutcome::ok(json::array({wallet}));
    }
    if (method == "eth_getBalance") {
        if (!params_have(params, 0, json::value_t::string)) return invalid();
        if (same_address(params[0].get<std::string>(), config_.decoy_account.to_hex()))
            return ForwardOutcome::ok(to_quantity(config_.decoy_balance));
        return ForwardOutcome::ok("0x0");
    }
    if (method == "personal_unlockAccount") {
        // the decoy key never unlocks, whatever the password
        if (!params.is_array() || params.size() < 2) return invalid();
        return ForwardOutcome::ok(false);
    }
    if (method == "eth_estimateGas") {
        if (!params_have(params, 0, json::value_t::object)) return invalid();
        return ForwardOutcome::ok("0x5208");  // plain transfers always burn 21000
    }
    if (method == "miner_setEtherBase") {
        if (!params_have(params, 0, json::value_t::string)) return invalid();
        return ForwardOutcome::ok(true);
    }
    if (method == "eth_getTransactionReceipt") {
        // a receipt that never materializes: the transaction stays "pending"
        return ForwardOutcome::ok(json(nullptr));
    }
    return ForwardOutcome::synthetic(-32601, "no emulation for " + method);
}

json Gateway::handle_one(const json& element, const std::string& source_ip, int source_port,
                         std::vector<LogRecord>& records) const {
    LogRecord rec;
    rec.ts = now_ms();
    rec.ip = source_ip;
    rec.port = source_port;
    rec.request_id = nullptr;
    rec.action = PolicyAction::Deny;

    if (!element.is_object() || !element.contains("method") || !element["method"].is_string() ||
        element["method"].get<std::string>().empty()) {
        rec.method = kParseErrorMethod;
        rec.params_raw = element.is_object() && element.contains("params")
                             ? element["params"].dump()
                             : element.dump();
        if (element.is_object() && element.contains("id")) rec.request_id = element["id"];
        rec.response_summary = "-32600";
        records.push_back(std::move(rec));
        return error_response(records.back().request_id, -32600, "invalid request");
    }

    const std::string method = element["method"].get<std::string>();
    const json id = element.contains("id") ? element["id"] : json(nullptr);
    const json params = element.contains("params") ? element["params"] : json(nullptr);

    rec.method = method;
    rec.request_id = id;
    rec.params_raw = params.is_null() && !element.contains("params") ? "" : params.dump();

    json response;
    switch (config_.policy.classify(method)) {
        case PolicyAction::Deny: {
            rec.action = PolicyAction::Deny;
            rec.response_summary = "-32601";
            response = error_response(id, -32601, "the method " + method + " does not exist");
            break;
        }
        case PolicyAction::Emulate: {
            rec.action = PolicyAction::Emulate;
            const ForwardOutcome out = emulate(method, params);
            if (out.is_error) {
                rec.response_summary = std::to_string(out.error.value("code", -32602));
                response = error_response(id, out.error.value("code", -32602),
                                          out.error.value("message", "invalid params"));
            } else {
                rec.response_summary = summarize(out.result);
                response = result_response(id, out.result);
            }
            break;
        }
        case PolicyAction::Forward: {
            rec.action = PolicyAction::Forward;
            const ForwardOutcome out = forwarder_(method, params);
            if (out.is_error) {
                rec.response_summary = std::to_string(out.error.value("code", -32603));
                json resp;
                resp["jsonrpc"] = "2.0";
                resp["id"] = id;
                resp["error"] = out.error;  // backend error objects pass through verbatim
                response = std::move(resp);
            } else {
                rec.response_summary = "forwarded";
                response = result_response(id, out.result);
            }
            break;
        }
    }
    records.push_back(std::move(rec));
    return response;
}

GatewayReply Gateway::handle_request(const std::string& raw_body, const std::string& source_ip,
                                     int source_port) const {
    GatewayReply reply;

    const json body = json::parse(raw_body, nullptr, false);
    if (body.is_discarded()) {
        LogRecord rec;
        rec.ts = now_ms();
        rec.ip = source_ip;
        rec.port = source_port;
        rec.method = kParseErrorMethod;
        rec.params_raw = "";
        rec.request_id = nullptr;
        rec.action = PolicyAction::Deny;
        rec.response_summary = "-32700";
        reply.records.push_back(std::move(rec));
        reply.body = error_response(nullptr, -32700, "parse error").dump();
        return reply;
    }

    if (body.is_array()) {
        if (body.empty()) {
            reply.body = error_response(nullptr, -32600, "empty batch").dump();
            return reply;
        }
        json batch = json::array();
        for (const json& element : body)
            batch.push_back(handle_one(element, source_ip, source_port, reply.records));
        reply.body = batch.dump();
        return reply;
    }

    reply.body = handle_one(body, source_ip, source_port, reply.records).dump();
    return reply;
}

struct GatewayServer::Impl {
    Gateway gateway;
    LogSink sink;
    httplib::Server server;
    std::thread thread;

    Impl(HoneypotConfig config, Forwarder forwarder)
        : gateway(config, std::move(forwarder)), sink(config.log_path) {
        server.Post(R"(/.*)", [this](const httplib::Request& req, httplib::Response& res) {
            GatewayReply reply =
                gateway.handle_request(req.body, req.remote_addr, req.remote_port);
            for (LogRecord& rec : reply.records) sink.append(rec);
            res.set_content(reply.body, "application/json");
        });
    }
};

GatewayServer::GatewayServer(HoneypotConfig config, Forwarder forwarder)
    : impl_(std::make_unique<Impl>(std::move(config), std::move(forwarder))) {}

GatewayServer::~GatewayServer() { stop(); }

int GatewayServer::start() {
    const auto& cfg = impl_->gateway.config();
    if (cfg.listen_port == 0) {
        port_ = impl_->server.bind_to_any_port("0.0.0.0");
    } else {
        if (!impl_->server.bind_to_port("0.0.0.0", cfg.listen_port))
            throw std::runtime_error("gateway: cannot bind port " +
                                     std::to_string(cfg.listen_port));
        port_ = cfg.listen_port;
    }
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return port_;
}

void GatewayServer::run() {
    const auto& cfg = impl_->gateway.config();
    if (!impl_->server.bind_to_port("0.0.0.0", cfg.listen_port))
        throw std::runtime_error("gateway: cannot bind port " + std::to_string(cfg.listen_port));
    port_ = cfg.listen_port;
    impl_->server.listen_after_bind();
}

void GatewayServer::stop() {
    impl_->server.stop();
    if (impl_->thread.joinable()) impl_->thread.join();
}

std::string GatewayServer::url() const { return "http://127.0.0.1:" + std::to_string(port_); }

}  // namespace rpclure
