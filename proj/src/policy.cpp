// Copyright 2026 The rpclure Authors.
// Licensed under the Apache License, Version 2.0.

#include "rpclure/policy.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace rpclure {

using nlohmann::json;

std::string_view to_string(PolicyAction action) {
    switch (action) {
        case PolicyAction::Forward: return "forward";
        case PolicyAction::Emulate: return "emulate";
        case PolicyAction::Deny: return "deny";
    }
    return "deny";
}

Policy default_policy() {
    std::map<std::string, PolicyAction> table;
    for (const char* method :
         {"net_version", "rpc_modules", "web3_clientVersion", "eth_getBlockByNumber",
          "eth_blockNumber", "eth_getBlockByHash", "eth_gasPrice", "eth_getTransactionCount",
          "eth_getBalance"})
        table[method] = PolicyAction::Forward;
    for (const char* method :
         {"eth_accounts", "eth_coinbase", "personal_listAccounts", "personal_listWallets",
          "eth_sendTransaction", "eth_signTransaction", "eth_sendRawTransaction",
          "eth_estimateGas", "miner_setEtherBase", "personal_unlockAccount"})
        table[method] = PolicyAction::Emulate;
    return Policy(std::move(table));
}

HoneypotConfig HoneypotConfig::defaults() {
    HoneypotConfig cfg;
    cfg.decoy_account = Address::from_hex("0xa33023b7c14638f3391d705c938ac506544b25c3").value();
    return cfg;
}

HoneypotConfig HoneypotConfig::from_json_text(const std::string& text) {
    const json doc = json::parse(text);
    if (!doc.is_object()) throw std::runtime_error("config: top level must be an object");

    HoneypotConfig cfg = defaults();
    for (const auto& [key, value] : doc.items()) {
        if (key == "listen_port") {
            const int64_t port = value.get<int64_t>();
            if (port < 1 || port > 65535) throw std::runtime_error("config: bad listen_port");
            cfg.listen_port = static_cast<uint16_t>(port);
        } else if (key == "decoy_account") {
            auto addr = Address::from_hex(value.get<std::string>());
            if (!addr) throw std::runtime_error("config: decoy_account is not a 20-byte address");
            cfg.decoy_account = *addr;
        } else if (key == "decoy_balance") {
            auto wei = parse_quantity(value.is_string() ? value.get<std::string>()
                                                        : value.dump());
            if (!wei) throw std::runtime_error("config: decoy_balance is not a Wei amount");
            cfg.decoy_balance = *wei;
        } else if (key == "backend_url") {
            cfg.backend_url = value.get<std::string>();
        } else if (key == "log_path") {
            cfg.log_path = value.get<std::string>();
        } else if (key == "policy") {
            Policy policy;  // replacing, not extending, the default table
            for (const auto& [action_name, methods] : value.items()) {
                PolicyAction action;
                if (action_name == "forward") action = PolicyAction::Forward;
                else if (action_name == "emulate") action = PolicyAction::Emulate;
                else if (action_name == "deny") action = PolicyAction::Deny;
                else throw std::runtime_error("config: unknown policy action " + action_name);
                for (const auto& method : methods)
                    policy.set(method.get<std::string>(), action);
            }
            cfg.policy = std::move(policy);
        } else {
            throw std::runtime_error("config: unknown key " + key);
        }
    }
    return cfg;
}

HoneypotConfig HoneypotConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

}  // namespace rpclure
