// Copyright 2026 The rpclure Authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "rpclure/logrec.hpp"
#include "rpclure/node_client.hpp"
#include "rpclure/policy.hpp"

namespace rpclure {

/// Relay used for Forward methods. Injectable so tests can record or script
/// backend traffic without a live node.
using Forwarder =
    std::function<ForwardOutcome(const std::string& method, const nlohmann::json& params)>;

Forwarder http_forwarder(BackendEndpoint endpoint);

struct GatewayReply {
    std::string body;                // JSON-RPC response (single or batch)
    std::vector<LogRecord> records;  // exactly one per request object received
};

/// Request handling, transport-agnostic. Never throws on attacker input:
/// malformed bodies become -32700/-32600 replies with a Deny record.
class Gateway {
  public:
    Gateway(HoneypotConfig config, Forwarder forwarder);

    GatewayReply handle_request(const std::string& raw_body, const std::string& source_ip,
                                int source_port) const;

    /// Emulated result for a method the policy marks Emulate, or a -32602
    /// error for params that fail shape validation.
    ForwardOutcome emulate(const std::string& method, const nlohmann::json& params) const;

    const HoneypotConfig& config() const { return config_; }

  private:
    nlohmann::json handle_one(const nlohmann::json& element, const std::string& source_ip,
                              int source_port, std::vector<LogRecord>& records) const;

    HoneypotConfig config_;
    Forwarder forwarder_;
};

/// HTTP front: owns the server loop, funnels every record into one sink.
class GatewayServer {
  public:
    GatewayServer(HoneypotConfig config, Forwarder forwarder);
    ~GatewayServer();

    GatewayServer(const GatewayServer&) = delete;
    GatewayServer& operator=(const GatewayServer&) = delete;

    /// Binds config.listen_port (or an ephemeral port when 0) and serves on a
    /// background thread. Throws if the log sink or port is unavailable.
    int start();
    /// Serves on the calling thread until stop() (for the CLI).
    void run();
    void stop();

    int port() const { return port_; }
    std::string url() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    int port_ = 0;
};

}  // namespace rpclure
