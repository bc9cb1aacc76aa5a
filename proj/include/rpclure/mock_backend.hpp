// Copyright 2026 The rpclure Authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

namespace rpclure {

/// Scripted stand-in for the backend Ethereum node. Serves JSON-RPC over
/// HTTP from a fixture of method->response rules and records every call, so
/// gateway and crawler tests run without a real node.
class MockBackend {
  public:
    struct Rule {
        std::string method;
        std::optional<nlohmann::json> params;  // exact match when present
        nlohmann::json result;
        std::optional<nlohmann::json> error;  // takes precedence over result
    };

    struct RecordedCall {
        std::string method;
        nlohmann::json params;
    };

    MockBackend();
    ~MockBackend();

    MockBackend(const MockBackend&) = delete;
    MockBackend& operator=(const MockBackend&) = delete;

    void add_rule(Rule rule);
    /// NDJSON lines: {"method": "...", "params": [...], "result": ...} or
    /// {"method": "...", "error": {...}}. Returns rules loaded.
    size_t load_fixture(std::istream& in);

    /// Catch-all result for methods without a rule (default: -32601 error).
    void set_default_result(nlohmann::json result);
    /// Reply with syntactically broken bodies (for health-check tests).
    void set_garbage_mode(bool on);

    /// Binds an ephemeral port and serves until stop(). Returns the port.
    int start();
    void stop();
    std::string url() const;

    std::vector<RecordedCall> recorded_calls() const;
    size_t call_count() const;
    void clear_recorded();

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace rpclure
