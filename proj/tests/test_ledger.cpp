// Copyright 2026 The rpclure Authors.
// Licensed under the Apache License, Version 2.0.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "rpclure/crawl.hpp"
#include "rpclure/keccak.hpp"
#include "rpclure/ledger.hpp"
#include "rpclure/mock_backend.hpp"

using namespace rpclure;
using nlohmann::json;

namespace {

std::string tx_line(const std::string& hash_seed, const std::string& from,
                    const std::string& to, const std::string& value, uint64_t block) {
    json doc;
    doc["hash"] = keccak256(std::string_view(hash_seed)).to_hex();
    doc["from"] = from;
    if (to.empty()) doc["to"] = nullptr;
    else doc["to"] = to;
    doc["value"] = value;
    doc["block"] = block;
    doc["ts"] = "2018-07-01T00:00:00.000Z";
    return doc.dump();
}

const std::string kA = "0x00000000000000000000000000000000000000aa";
const std::string kB = "0x00000000000000000000000000000000000000bb";
const std::string kC = "0x00000000000000000000000000000000000000cc";

}  // namespace

TEST_CASE("import is idempotent and dedupes on hash") {
    LedgerStore store;
    const std::string lines = tx_line("t1", kA, kB, "5", 1) + "\n" +
                              tx_line("t2", kA, kC, "7", 2) + "\n" +
                              tx_line("t3", kB, kC, "2", 2) + "\n";
    {
        std::istringstream in(lines);
        const ImportStats stats = store.import(in);
        CHECK(stats.inserted == 3);
        CHECK(stats.duplicates == 0);
    }
    {
        std::istringstream in(lines);
        const ImportStats stats = store.import(in);
        CHECK(stats.inserted == 0);
        CHECK(stats.duplicates == 3);
    }
    CHECK(store.size() == 3);

    // duplicate hash within one stream counts once
    std::istringstream dup(tx_line("t9", kA, kB, "1", 3) + "\n" +
                           tx_line("t9", kA, kB, "1", 3) + "\n");
    const ImportStats stats = store.import(dup);
    CHECK(stats.inserted == 1);
    CHECK(stats.duplicates == 1);
}

TEST_CASE("malformed lines are counted, never fatal") {
    LedgerStore store;
    std::istringstream in("garbage\n" + tx_line("t1", kA, kB, "5", 1) + "\n" +
                          R"({"hash":"0x12"})" + "\n");
    const ImportStats stats = store.import(in);
    CHECK(stats.inserted == 1);
    CHECK(stats.malformed == 2);
}

TEST_CASE("contract creation lines import with to absent") {
    LedgerStore store;
    std::istringstream in(tx_line("t1", kA, "", "0", 1));
    CHECK(store.import(in).inserted == 1);
    CHECK(!store.all()[0].to.has_value());
}

TEST_CASE("incoming sums and outgoing order") {
    LedgerStore store;
    std::istringstream in(tx_line("t1", kA, kB, "5", 7) + "\n" +
                          tx_line("t2", kA, kB, "2", 3) + "\n" +
                          tx_line("t3", kA, kA, "7", 4) + "\n" +
                          tx_line("t4", kB, kC, "3", 5) + "\n");
    store.import(in);

    const Address a = Address::from_hex(kA).value();
    const Address b = Address::from_hex(kB).value();
    const Address c = Address::from_hex(kC).value();

    CHECK(store.incoming_sum(b) == 7);
    CHECK(store.incoming_sum(a) == 7);          // the self-transfer
    CHECK(store.incoming_sum_nonself(a) == 0);  // excluded downstream
    CHECK(store.incoming_sum(c) == 3);
    CHECK(store.incoming_sum(Address{}) == 0);
    CHECK(store.outgoing(Address{}).empty());

    const auto out_a = store.outgoing(a);
    REQUIRE(out_a.size() == 3);
    CHECK(out_a[0]->block == 3);  // (block, hash) ordering
    CHECK(out_a[1]->block == 4);
    CHECK(out_a[2]->block == 7);
}

TEST_CASE("conservation: sum of incoming equals sum of stored values") {
    KeccakRng rng(0x4c4544);
    LedgerStore store;
    std::vector<Address> addrs;
    for (int i = 0; i < 8; ++i) addrs.push_back(Address::from_bytes(rng.bytes(20)));

    BigInt total = 0;
    for (int i = 0; i < 200; ++i) {
        LedgerTx tx;
        std::copy_n(rng.bytes(32).begin(), 32, tx.hash.bytes.begin());
        tx.from = addrs[rng.next_below(addrs.size())];
        tx.to = addrs[rng.next_below(addrs.size())];
        tx.value = BigInt(rng.next_u64());
        tx.block = rng.next_below(1000);
        if (store.insert(tx)) total += tx.value;
    }
    BigInt incoming = 0;
    for (const Address& addr : addrs) incoming += store.incoming_sum(addr);
    CHECK(incoming == total);
}

TEST_CASE("save produces a canonical re-importable dump") {
    LedgerStore store;
    std::istringstream in(tx_line("t1", kA, kB, "50000000000000000000", 7) + "\n" +
                          tx_line("t2", kA, kC, "0x2a", 3) + "\n");
    store.import(in);

    std::ostringstream dumped;
    store.save(dumped);

    LedgerStore reloaded;
    std::istringstream back(dumped.str());
    CHECK(reloaded.import(back).inserted == 2);
    CHECK(reloaded.incoming_sum(Address::from_hex(kC).value()) == 42);
    CHECK(reloaded.incoming_sum(Address::from_hex(kB).value()) ==
          BigInt("50000000000000000000"));

    std::ostringstream again;
    reloaded.save(again);
    CHECK(again.str() == dumped.str());  // stable bytes
}

TEST_CASE("labels csv") {
    std::istringstream in(
        "address,label,name\n"
        "0x00000000000000000000000000000000000000aa,market,Binance\n"
        "0x00000000000000000000000000000000000000bb,tor_exit,\n"
        "0x00000000000000000000000000000000000000cc,other,misc\n"
        "0x1234,market,broken\n"
        "0x00000000000000000000000000000000000000dd,nonsense,x\n");
    size_t malformed = 0;
    const auto labels = load_labels_csv(in, &malformed);
    REQUIRE(labels.size() == 3);
    CHECK(labels[0].kind == LabelKind::Market);
    CHECK(labels[0].name == "Binance");
    CHECK(labels[1].kind == LabelKind::TorExit);
    CHECK(malformed == 2);
}

namespace {

json block_fixture(uint64_t number, const std::vector<std::pair<std::string, std::string>>& txs) {
    json block;
    block["number"] = to_quantity(number);
    block["timestamp"] = to_quantity(1530403200 + number * 15);
    json list = json::array();
    for (size_t i = 0; i < txs.size(); ++i) {
        json tx;
        tx["hash"] =
            keccak256(std::string_view("blk" + std::to_string(number) + "-" + std::to_string(i)))
                .to_hex();
        tx["from"] = txs[i].first;
        tx["to"] = txs[i].second;
        tx["value"] = "0x5";
        tx["blockNumber"] = to_quantity(number);
        list.push_back(tx);
    }
    block["transactions"] = list;
    return block;
}

}  // namespace

TEST_CASE("crawl walks blocks, resumes from checkpoint, never duplicates") {
    MockBackend mock;
    mock.add_rule({"eth_getBlockByNumber", json::array({"0x0", true}),
                   block_fixture(0, {{kA, kB}, {kA, kC}}), std::nullopt});
    mock.add_rule({"eth_getBlockByNumber", json::array({"0x1", true}),
                   block_fixture(1, {{kB, kC}, {kC, kA}}), std::nullopt});
    mock.add_rule({"eth_getBlockByNumber", json::array({"0x2", true}), block_fixture(2, {}),
                   std::nullopt});
    mock.start();

    const std::string checkpoint = "test_crawl_checkpoint.json";
    std::filesystem::remove(checkpoint);
    const BackendEndpoint endpoint{mock.url(), 2000, 0};

    std::ostringstream first;
    CrawlOptions options;
    options.from_block = 0;
    options.to_block = 1;
    options.checkpoint_path = checkpoint;
    CrawlStats stats = crawl(endpoint, options, first);
    CHECK(stats.completed);
    CHECK(stats.blocks == 2);
    CHECK(stats.txs == 4);

    // resume to block 2: earlier blocks must not be re-emitted
    std::ostringstream second;
    options.to_block = 2;
    stats = crawl(endpoint, options, second);
    CHECK(stats.completed);
    CHECK(stats.blocks == 1);  // only the empty block 2
    CHECK(stats.txs == 0);

    LedgerStore store;
    std::istringstream merged(first.str() + second.str());
    const ImportStats imported = store.import(merged);
    CHECK(imported.inserted == 4);
    CHECK(imported.duplicates == 0);
    CHECK(imported.malformed == 0);

    mock.stop();
    std::filesystem::remove(checkpoint);
}

TEST_CASE("crawl against a dead backend leaves a resumable state") {
    const BackendEndpoint endpoint{"http://127.0.0.1:1", 100, 0};
    CrawlOptions options;
    options.from_block = 5;
    options.to_block = 9;
    options.max_attempts = 1;
    options.retry_backoff_ms = 1;
    std::ostringstream out;
    const CrawlStats stats = crawl(endpoint, options, out);
    CHECK(!stats.completed);
    CHECK(!stats.error.empty());
    CHECK(out.str().empty());
}
