// Copyright 2026 The rpclure Authors.
// Licensed under the Apache License, Version 2.0.

#include "rpclure/node_client.hpp"

#include <httplib.h>

namespace rpclure {

using nlohmann::json;

ForwardOutcome ForwardOutcome::ok(json value) {
    ForwardOutcome out;
    out.result = std::move(value);
    return out;
}

ForwardOutcome ForwardOutcome::err(json error_object) {
    ForwardOutcome out;
    out.is_error = true;
    out.error = std::move(error_object);
    return out;
}

ForwardOutcome ForwardOutcome::synthetic(int code, const std::string& message) {
    return err(json{{"code", code}, {"message", message}});
}

namespace {

json rpc_envelope(const std::string& method, const json& params) {
    json req;
    req["jsonrpc"] = "2.0";
    req["method"] = method;
    req["params"] = params.is_null() ? json::array() : params;
    req["id"] = 1;
    return req;
}

}  // namespace

ForwardOutcome forward(const BackendEndpoint& endpoint, const std::string& method,
                       const json& params) {
    const std::string body = rpc_envelope(method, params).dump();

    httplib::Result res;
    for (int attempt = 0; attempt <= endpoint.max_retries; ++attempt) {
        httplib::Client client(endpoint.url);
        client.set_connection_timeout(0, endpoint.timeout_ms * 1000);
        client.set_read_timeout(0, endpoint.timeout_ms * 1000);
        client.set_write_timeout(0, endpoint.timeout_ms * 1000);
        res = client.Post("/", body, "application/json");
        if (res) break;  // got an HTTP reply; anything else is transport
    }
    if (!res)
        return ForwardOutcome::synthetic(-32603, "backend unreachable: " +
                                                     httplib::to_string(res.error()));
    if (res->status != 200)
        return ForwardOutcome::synthetic(-32603,
                                         "backend HTTP status " + std::to_string(res->status));

    const json reply = json::parse(res->body, nullptr, false);
    if (reply.is_discarded() || !reply.is_object())
        return ForwardOutcome::synthetic(-32603, "backend reply is not a JSON object");
    if (reply.contains("error") && !reply["error"].is_null())
        return ForwardOutcome::err(reply["error"]);
    if (reply.contains("result")) return ForwardOutcome::ok(reply["result"]);
    return ForwardOutcome::synthetic(-32603, "backend reply has neither result nor error");
}

bool health_check(const BackendEndpoint& endpoint) {
    BackendEndpoint single = endpoint;
    single.max_retries = 0;
    const ForwardOutcome out = forward(single, "web3_clientVersion", json::array());
    return !out.is_error;
}

}  // namespace rpclure
