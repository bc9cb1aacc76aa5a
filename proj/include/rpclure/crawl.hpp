// Copyright 2026 The rpclure Authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <ostream>
#include <string>

#include "rpclure/ledger.hpp"
#include "rpclure/node_client.hpp"

namespace rpclure {

struct CrawlOptions {
    uint64_t from_block = 0;
    uint64_t to_block = 0;  // inclusive
    std::string checkpoint_path;  // optional JSON {"last_block": N}
    int retry_backoff_ms = 200;
    int max_attempts = 3;  // per block, transport errors only
};

struct CrawlStats {
    uint64_t blocks = 0;
    uint64_t txs = 0;
    bool completed = false;  // false when a block kept failing; checkpoint stays valid
    std::string error;
};

/// Walks eth_getBlockByNumber with full transactions and emits one LedgerTx
/// line per external transfer. Resumable: with a checkpoint file present,
/// crawling restarts after the last completed block, so replays never emit
/// duplicate lines.
CrawlStats crawl(const BackendEndpoint& endpoint, const CrawlOptions& options, std::ostream& out);

}  // namespace rpclure
