// Copyright 2026 The rpclure Authors.
// Licensed under the Apache License, Version 2.0.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <regex>
#include <set>
#include <sstream>

#include "rpclure/gateway.hpp"
#include "rpclure/keccak.hpp"
#include "rpclure/mock_backend.hpp"

using namespace rpclure;
using nlohmann::json;

namespace {

struct RecordingForwarder {
    std::vector<std::string> methods;
    json canned = "0x10";

    Forwarder fn() {
        return [this](const std::string& method, const json&) {
            methods.push_back(method);
            return ForwardOutcome::ok(canned);
        };
    }
};

Gateway make_gateway(Forwarder fwd) { return Gateway(HoneypotConfig::defaults(), std::move(fwd)); }

Forwarder unreachable_forwarder() {
    return [](const std::string&, const json&) {
        FAIL("forwarder must not be called");
        return ForwardOutcome::synthetic(-32603, "unreachable");
    };
}

const std::string kSendBody = R"({
    "jsonrpc": "2.0",
    "method": "eth_sendTransaction",
    "params": [{
        "from": "0xa33023b7c14638f3391d705c938ac506544b25c3",
        "to": "0x63710c26a9be484581dcac1aacdd95ef628923ab",
        "gas": "0x5208",
        "gasPrice": "0x199c82cc00",
        "value": "0x2425f024b7fd000"
    }],
    "id": 739296
})";

}  // namespace

TEST_CASE("default policy classification") {
    const Policy policy = default_policy();
    CHECK(policy.classify("eth_sendTransaction") == PolicyAction::Emulate);
    CHECK(policy.classify("eth_blockNumber") == PolicyAction::Forward);
    CHECK(policy.classify("eth_getBalance") == PolicyAction::Forward);
    CHECK(policy.classify("admin_stopRPC") == PolicyAction::Deny);
    CHECK(policy.classify("") == PolicyAction::Deny);
    CHECK(policy.classify("personal_unlockAccount") == PolicyAction::Emulate);
}

TEST_CASE("config file parsing") {
    const HoneypotConfig cfg = HoneypotConfig::from_json_text(R"({
        "listen_port": 9999,
        "decoy_balance": "5000000000000000000",
        "policy": {"forward": ["eth_blockNumber"], "emulate": ["eth_sendTransaction"]}
    })");
    CHECK(cfg.listen_port == 9999);
    CHECK(cfg.decoy_balance == BigInt("5000000000000000000"));
    CHECK(cfg.policy.classify("eth_blockNumber") == PolicyAction::Forward);
    CHECK(cfg.policy.classify("eth_getBalance") == PolicyAction::Deny);  // table replaced
    CHECK(cfg.decoy_account.to_hex() == "0xa33023b7c14638f3391d705c938ac506544b25c3");

    CHECK_THROWS(HoneypotConfig::from_json_text(R"({"decoy_account": "0x1234"})"));
    CHECK_THROWS(HoneypotConfig::from_json_text(R"({"unknown_key": 1})"));
    CHECK_THROWS(HoneypotConfig::from_json_text("not-json"));
}

TEST_CASE("captured send is emulated with a fresh hash") {
    Gateway gw = make_gateway(unreachable_forwarder());
    const GatewayReply reply = gw.handle_request(kSendBody, "89.144.25.28", 40123);

    REQUIRE(reply.records.size() == 1);
    CHECK(reply.records[0].method == "eth_sendTransaction");
    CHECK(reply.records[0].action == PolicyAction::Emulate);
    CHECK(reply.records[0].ip == "89.144.25.28");

    const json resp = json::parse(reply.body);
    CHECK(resp["id"] == 739296);
    const std::string hash = resp["result"].get<std::string>();
    CHECK(std::regex_match(hash, std::regex("^0x[0-9a-f]{64}$")));
    CHECK(reply.records[0].response_summary == hash);

    // params text round-trips to an equal JSON value
    const json logged = json::parse(reply.records[0].params_raw);
    CHECK(logged[0]["to"] == "0x63710c26a9be484581dcac1aacdd95ef628923ab");
}

TEST_CASE("forward methods reach the backend") {
    RecordingForwarder backend;
    Gateway gw = make_gateway(backend.fn());
    const std::string body =
        R"({"jsonrpc":"2.0","method":"web3_clientVersion","params":[],"id":1})";
    const GatewayReply reply = gw.handle_request(body, "1.2.3.4", 1);

    REQUIRE(backend.methods.size() == 1);
    CHECK(backend.methods[0] == "web3_clientVersion");
    REQUIRE(reply.records.size() == 1);
    CHECK(reply.records[0].action == PolicyAction::Forward);
    CHECK(reply.records[0].response_summary == "forwarded");
    CHECK(json::parse(reply.body)["result"] == "0x10");
}

TEST_CASE("malformed body yields -32700 and one deny record") {
    Gateway gw = make_gateway(unreachable_forwarder());
    const GatewayReply reply = gw.handle_request("not-json", "1.2.3.4", 1);

    REQUIRE(reply.records.size() == 1);
    CHECK(reply.records[0].method == "<parse-error>");
    CHECK(reply.records[0].action == PolicyAction::Deny);
    const json resp = json::parse(reply.body);
    CHECK(resp["error"]["code"] == -32700);
    CHECK(resp["id"].is_null());
}

TEST_CASE("unknown method yields -32601") {
    Gateway gw = make_gateway(unreachable_forwarder());
    const GatewayReply reply = gw.handle_request(
        R"({"jsonrpc":"2.0","method":"admin_stopRPC","params":[],"id":"x"})", "1.2.3.4", 1);
    const json resp = json::parse(reply.body);
    CHECK(resp["error"]["code"] == -32601);
    CHECK(resp["id"] == "x");
    CHECK(reply.records[0].action == PolicyAction::Deny);
}

TEST_CASE("batches get one response and one record per element, in order") {
    RecordingForwarder backend;
    Gateway gw = make_gateway(backend.fn());
    const std::string body = R"([
        {"jsonrpc":"2.0","method":"eth_blockNumber","params":[],"id":1},
        42,
        {"jsonrpc":"2.0","method":"eth_accounts","params":[],"id":"two"},
        {"jsonrpc":"2.0","method":"no_such_method","id":3}
    ])";
    const GatewayReply reply = gw.handle_request(body, "1.2.3.4", 1);

    REQUIRE(reply.records.size() == 4);
    CHECK(reply.records[0].action == PolicyAction::Forward);
    CHECK(reply.records[1].method == "<parse-error>");
    CHECK(reply.records[2].action == PolicyAction::Emulate);
    CHECK(reply.records[3].action == PolicyAction::Deny);

    const json resp = json::parse(reply.body);
    REQUIRE(resp.is_array());
    REQUIRE(resp.size() == 4);
    CHECK(resp[0]["id"] == 1);
    CHECK(resp[1]["error"]["code"] == -32600);
    CHECK(resp[2]["id"] == "two");
    CHECK(resp[2]["result"] == json::array({"0xa33023b7c14638f3391d705c938ac506544b25c3"}));
    CHECK(resp[3]["error"]["code"] == -32601);

    // empty batch: a single error, zero request objects
    const GatewayReply empty = gw.handle_request("[]", "1.2.3.4", 1);
    CHECK(empty.records.empty());
    CHECK(json::parse(empty.body)["error"]["code"] == -32600);
}

TEST_CASE("emulation fixed answers") {
    Gateway gw = make_gateway(unreachable_forwarder());

    auto result = [&](const std::string& method, const json& params) {
        const ForwardOutcome out = gw.emulate(method, params);
        REQUIRE(!out.is_error);
        return out.result;
    };

    CHECK(result("eth_accounts", json::array()) ==
          json::array({"0xa33023b7c14638f3391d705c938ac506544b25c3"}));
    CHECK(result("eth_coinbase", json::array()) ==
          "0xa33023b7c14638f3391d705c938ac506544b25c3");
    CHECK(result("eth_estimateGas", json::array({json::object()})) == "0x5208");
    CHECK(result("personal_unlockAccount",
                 json::array({"0xa33023b7c14638f3391d705c938ac506544b25c3", "qwerty123456",
                              600})) == false);
    CHECK(result("miner_setEtherBase",
                 json::array({"0x63710c26a9be484581dcac1aacdd95ef628923ab"})) == true);
    CHECK(result("eth_getTransactionReceipt", json::array({"0xdead"})).is_null());
    CHECK(result("eth_getBalance",
                 json::array({"0xA33023B7C14638F3391D705C938AC506544B25C3", "latest"})) ==
          "0xde0b6b3a7640000");
    CHECK(result("eth_getBalance", json::array({"0x63710c26a9be484581dcac1aacdd95ef628923ab",
                                                "latest"})) == "0x0");

    const ForwardOutcome bad = gw.emulate("eth_sendTransaction", json::array());
    CHECK(bad.is_error);
    CHECK(bad.error["code"] == -32602);
}

TEST_CASE("emulated send hashes are fresh across 10000 calls") {
    Gateway gw = make_gateway(unreachable_forwarder());
    std::set<std::string> hashes;
    const std::regex pattern("^0x[0-9a-f]{64}$");
    for (int i = 0; i < 10'000; ++i) {
        const ForwardOutcome out =
            gw.emulate("eth_sendTransaction", json::array({json::object()}));
        const std::string hash = out.result.get<std::string>();
        CHECK(std::regex_match(hash, pattern));
        hashes.insert(hash);
    }
    CHECK(hashes.size() == 10'000);
}

TEST_CASE("backend error objects pass through verbatim") {
    Gateway gw = make_gateway([](const std::string&, const json&) {
        return ForwardOutcome::err(json{{"code", -32000}, {"message", "nope"}, {"data", 7}});
    });
    const GatewayReply reply = gw.handle_request(
        R"({"jsonrpc":"2.0","method":"eth_blockNumber","params":[],"id":5})", "9.9.9.9", 2);
    const json resp = json::parse(reply.body);
    CHECK(resp["error"]["code"] == -32000);
    CHECK(resp["error"]["data"] == 7);
    CHECK(reply.records[0].action == PolicyAction::Forward);
}

TEST_CASE("log sink appends exactly one line per record and round-trips") {
    const std::string path = "test_sink.ndjson";
    std::filesystem::remove(path);
    {
        LogSink sink(path);
        LogRecord rec;
        rec.ip = "1.2.3.4";
        rec.port = 5;
        rec.method = "eth_getBalance";
        rec.params_raw = R"(["0xabc","latest"])";
        rec.request_id = json("with\nnewline");
        rec.action = PolicyAction::Forward;
        rec.response_summary = "forwarded";
        sink.append(rec);
        CHECK(rec.ts > 0);

        LogRecord second = rec;
        second.request_id = nullptr;
        sink.append(second);
        CHECK(second.ts >= rec.ts);
    }
    std::ifstream in(path);
    std::string line;
    size_t lines = 0;
    while (std::getline(in, line)) {
        ++lines;
        CHECK(!json::parse(line, nullptr, false).is_discarded());
    }
    CHECK(lines == 2);  // embedded newline stays escaped inside one line

    LogReadStats stats;
    const auto records = read_log_file(path, &stats);
    CHECK(stats.parsed == 2);
    CHECK(records[0].request_id.get<std::string>() == "with\nnewline");
    std::filesystem::remove(path);
}

TEST_CASE("log sink refuses an unwritable path") {
    CHECK_THROWS(LogSink("/no/such/dir/x.ndjson"));
}

TEST_CASE("10000 appended records re-parse JSON-equal") {
    const std::string path = "test_sink_bulk.ndjson";
    std::filesystem::remove(path);
    KeccakRng rng(0x4c4f47);
    std::vector<std::string> expected_params;
    {
        LogSink sink(path);
        for (int i = 0; i < 10'000; ++i) {
            LogRecord rec;
            rec.ip = "10.0.0." + std::to_string(i % 256);
            rec.port = static_cast<int>(rng.next_below(65536));
            rec.method = "m" + std::to_string(i % 17);
            const json params = json::array({i, to_hex(rng.bytes(8)), json{{"k", i}}});
            rec.params_raw = params.dump();
            expected_params.push_back(rec.params_raw);
            rec.request_id = i;
            rec.action = PolicyAction::Emulate;
            rec.response_summary = "r";
            sink.append(rec);
        }
    }
    LogReadStats stats;
    const auto records = read_log_file(path, &stats);
    REQUIRE(stats.parsed == 10'000);
    CHECK(stats.malformed == 0);
    InstantMs last = 0;
    for (size_t i = 0; i < records.size(); ++i) {
        CHECK(records[i].ts >= last);
        last = records[i].ts;
        if (json::parse(records[i].params_raw) != json::parse(expected_params[i])) {
            FAIL("params mismatch at ", i);
        }
    }
}

TEST_CASE("live forward through the scripted mock") {
    MockBackend mock;
    mock.add_rule({"eth_blockNumber", std::nullopt, json("0x10"), std::nullopt});
    const json block =
        json{{"number", "0x0"}, {"hash", "0x00"}, {"transactions", json::array()}};
    mock.add_rule({"eth_getBlockByNumber", json::array({"0x0", false}), block, std::nullopt});
    mock.start();

    const BackendEndpoint endpoint{mock.url(), 2000, 1};
    const ForwardOutcome a = forward(endpoint, "eth_blockNumber", json::array());
    CHECK(!a.is_error);
    CHECK(a.result == "0x10");

    const ForwardOutcome b =
        forward(endpoint, "eth_getBlockByNumber", json::array({"0x0", false}));
    CHECK(b.result == block);  // byte-for-byte pass-through of the scripted value

    // one backend call per forward, no amplification
    const size_t before = mock.call_count();
    forward(endpoint, "eth_blockNumber", json::array());
    CHECK(mock.call_count() == before + 1);

    CHECK(health_check(endpoint) == false);  // web3_clientVersion not scripted
    mock.add_rule({"web3_clientVersion", std::nullopt, json("Geth/v1.8.0"), std::nullopt});
    CHECK(health_check(endpoint) == true);

    mock.set_garbage_mode(true);
    CHECK(health_check(endpoint) == false);
    mock.set_garbage_mode(false);

    mock.stop();
    const ForwardOutcome down = forward(endpoint, "eth_blockNumber", json::array());
    CHECK(down.is_error);
    CHECK(down.error["code"] == -32603);
    CHECK(health_check(endpoint) == false);
}

TEST_CASE("gateway stays up when the backend is down") {
    const BackendEndpoint dead{"http://127.0.0.1:1", 200, 0};
    Gateway gw(HoneypotConfig::defaults(), http_forwarder(dead));
    const GatewayReply reply = gw.handle_request(
        R"({"jsonrpc":"2.0","method":"eth_blockNumber","params":[],"id":1})", "1.1.1.1", 1);
    const json resp = json::parse(reply.body);
    CHECK(resp["error"]["code"] == -32603);
    CHECK(reply.records[0].action == PolicyAction::Forward);
}

TEST_CASE("policy safety under random bodies") {
    RecordingForwarder backend;
    Gateway gw = make_gateway(backend.fn());
    const Policy policy = default_policy();

    const std::vector<std::string> methods = {
        "eth_sendTransaction", "eth_blockNumber",  "eth_accounts",   "admin_stopRPC",
        "eth_getBalance",      "personal_unlockAccount", "miner_setEtherBase", "debug_traceCall",
    };

    KeccakRng rng(0x46555a);
    size_t expected_records = 0;
    size_t produced_records = 0;
    for (int i = 0; i < 1000; ++i) {
        std::string body;
        switch (rng.next_below(4)) {
            case 0: {  // well-formed single
                json req;
                req["jsonrpc"] = "2.0";
                req["method"] = methods[rng.next_below(methods.size())];
                req["params"] = json::array({json::object()});
                req["id"] = static_cast<int64_t>(rng.next_below(1000));
                body = req.dump();
                expected_records += 1;
                break;
            }
            case 1: {  // batch
                const size_t n = rng.next_below(5);
                json batch = json::array();
                for (size_t k = 0; k < n; ++k) {
                    json req;
                    req["method"] = methods[rng.next_below(methods.size())];
                    req["id"] = static_cast<int64_t>(k);
                    batch.push_back(req);
                }
                body = batch.dump();
                expected_records += n;
                break;
            }
            case 2: {  // raw bytes
                body = std::string(reinterpret_cast<const char*>(rng.bytes(20).data()), 20);
                expected_records += 1;
                break;
            }
            default: {  // scalar json
                body = std::to_string(rng.next_u64());
                expected_records += 1;
                break;
            }
        }
        const GatewayReply reply = gw.handle_request(body, "8.8.8.8", 1);
        produced_records += reply.records.size();
        CHECK(!json::parse(reply.body, nullptr, false).is_discarded());
    }
    CHECK(produced_records == expected_records);
    for (const std::string& method : backend.methods)
        CHECK(policy.classify(method) == PolicyAction::Forward);
}
