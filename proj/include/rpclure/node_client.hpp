// Copyright 2026 The rpclure Authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <string>

#include <json.hpp>

namespace rpclure {

struct BackendEndpoint {
    std::string url;
    int timeout_ms = 5000;
    int max_retries = 1;  // transport errors only
};

/// Either the backend's result or a JSON-RPC error object. Backend-supplied
/// errors are answers and pass through verbatim; transport failures become a
/// synthetic -32603 with a diagnostic message.
struct ForwardOutcome {
    bool is_error = false;
    nlohmann::json result;
    nlohmann::json error;

    static ForwardOutcome ok(nlohmann::json value);
    static ForwardOutcome err(nlohmann::json error_object);
    static ForwardOutcome synthetic(int code, const std::string& message);
};

ForwardOutcome forward(const BackendEndpoint& endpoint, const std::string& method,
                       const nlohmann::json& params);

/// True iff web3_clientVersion yields a well-formed reply within the timeout.
bool health_check(const BackendEndpoint& endpoint);

}  // namespace rpclure
