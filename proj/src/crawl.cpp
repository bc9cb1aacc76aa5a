// Copyright 2026 The rpclure Authors.
// Licensed under the Apache License, Version 2.0.

#include "rpclure/crawl.hpp"

#include <chrono>
#include <fstream>
#include <thread>

#include <json.hpp>

namespace rpclure {

using nlohmann::json;

namespace {

std::optional<uint64_t> read_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("last_block"))
        return std::nullopt;
    return doc["last_block"].get<uint64_t>();
}

void write_checkpoint(const std::string& path, uint64_t last_block) {
    std::ofstream out(path, std::ios::trunc);
    out << json{{"last_block", last_block}}.dump() << '\n';
}

std::optional<LedgerTx> tx_from_rpc(const json& raw, InstantMs block_ts) {
    if (!raw.is_object()) return std::nullopt;
    LedgerTx tx;
    auto hash = Hash32::from_hex(raw.value("hash", ""));
    auto from = Address::from_hex(raw.value("from", ""));
    if (!hash || !from) return std::nullopt;
    tx.hash = *hash;
    tx.from = *from;
    if (raw.contains("to") && raw["to"].is_string()) {
        auto to = Address::from_hex(raw["to"].get<std::string>());
        if (!to) return std::nullopt;
        tx.to = *to;
    }
    auto value = parse_quantity(raw.value("value", "0x0"));
    auto block = parse_quantity(raw.value("blockNumber", "0x0"));
    if (!value || !block || !fits_u64(*block)) return std::nullopt;
    tx.value = *value;
    tx.block = to_u64(*block);
    tx.ts = block_ts;
    return tx;
}

}  // namespace

CrawlStats crawl(const BackendEndpoint& endpoint, const CrawlOptions& options,
                 std::ostream& out) {
    CrawlStats stats;

    uint64_t start = options.from_block;
    if (!options.checkpoint_path.empty()) {
        if (auto done = read_checkpoint(options.checkpoint_path); done && *done >= start)
            start = *done + 1;
    }

    for (uint64_t number = start; number <= options.to_block; ++number) {
        ForwardOutcome outcome;
        for (int attempt = 0;; ++attempt) {
            outcome = forward(endpoint, "eth_getBlockByNumber",
                              json::array({to_quantity(number), true}));
            const bool transport_error =
                outcome.is_error && outcome.error.value("code", 0) == -32603;
            if (!transport_error || attempt + 1 >= options.max_attempts) break;
            std::this_thread::sleep_for(
                std::chrono::milliseconds(options.retry_backoff_ms << attempt));
        }
        if (outcome.is_error) {
            stats.error = "block " + std::to_string(number) + ": " +
                          outcome.error.value("message", "backend error");
            return stats;
        }

        const json& block = outcome.result;
        InstantMs block_ts = 0;
        if (block.is_object()) {
            if (auto ts = parse_quantity(block.value("timestamp", "0x0")); ts && fits_u64(*ts))
                block_ts = static_cast<InstantMs>(to_u64(*ts)) * 1000;
            if (block.contains("transactions") && block["transactions"].is_array()) {
                for (const json& raw : block["transactions"]) {
                    if (auto tx = tx_from_rpc(raw, block_ts)) {
                        out << tx->to_ndjson_line() << '\n';
                        ++stats.txs;
                    }
                }
            }
        }
        out.flush();
        ++stats.blocks;
        if (!options.checkpoint_path.empty()) write_checkpoint(options.checkpoint_path, number);
    }
    stats.completed = true;
    return stats;
}

}  // namespace rpclure
