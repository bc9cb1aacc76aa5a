// Copyright 2026 The rpclure Authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <map>
#include <string>
#include <string_view>

#include "rpclure/bytes.hpp"

namespace rpclure {

enum class PolicyAction { Forward, Emulate, Deny };

std::string_view to_string(PolicyAction action);

/// Immutable after startup; methods not listed map to Deny.
class Policy {
  public:
    Policy() = default;
    explicit Policy(std::map<std::string, PolicyAction> table) : table_(std::move(table)) {}

    PolicyAction classify(const std::string& method) const {
        auto it = table_.find(method);
        return it == table_.end() ? PolicyAction::Deny : it->second;
    }

    void set(const std::string& method, PolicyAction action) { table_[method] = action; }
    const std::map<std::string, PolicyAction>& table() const { return table_; }

  private:
    std::map<std::string, PolicyAction> table_;
};

/// Read-only queries relay to the backend; anything that would move funds or
/// leak key state is emulated; the rest is refused.
Policy default_policy();

struct HoneypotConfig {
    uint16_t listen_port = 8545;
    Address decoy_account;
    BigInt decoy_balance = BigInt("1000000000000000000");  // 1 Ether in Wei
    Policy policy = default_policy();
    std::string backend_url = "http://127.0.0.1:8546";
    std::string log_path = "gateway-log.ndjson";

    static HoneypotConfig defaults();

    /// Loads a JSON config file; unknown keys are rejected. Throws
    /// std::runtime_error with a description on any invalid field.
    static HoneypotConfig from_json_file(const std::string& path);
    static HoneypotConfig from_json_text(const std::string& text);
};

}  // namespace rpclure
