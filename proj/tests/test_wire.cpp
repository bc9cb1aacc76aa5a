// Copyright 2026 The rpclure Authors.
// Licensed under the Apache License, Version 2.0.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "rpclure/abi.hpp"
#include "rpclure/bytes.hpp"
#include "rpclure/keccak.hpp"
#include "rpclure/rlp.hpp"
#include "rpclure/secp256k1.hpp"
#include "rpclure/timeutil.hpp"
#include "rpclure/tx.hpp"

using namespace rpclure;

// Captured eth_sendRawTransaction payload: a zero-gas-price ERC20 transfer
// signed on a dev chain. Every expected field below was cross-checked against
// an independent keccak/secp256k1 implementation before being frozen here.
static const char* kGoldenRawTx =
    "0xf8a682125f8082ea60941a95b271b0535d15fa49932daba31ba612b5294680b844a9059cbb"
    "0000000000000000000000000fe07dbd07ba4c1075c1db97806ba3c5b113cee0"
    "000000000000000000000000000000000000000000000000000000000bebc200"
    "1ca095e6417786f699db2dc195f47662c412bb125b8419b9af030ac237d64c5a9250"
    "a0357a79a314eecd583f9be2235fd627d85c9af8fe292f9e47d4fa261efc0487bc";

TEST_CASE("hex round trips and rejects junk") {
    CHECK(to_hex_prefixed(Bytes{0xde, 0xad}) == "0xdead");
    CHECK(from_hex("0xDEAD").value() == Bytes{0xde, 0xad});
    CHECK(from_hex("dead").value() == Bytes{0xde, 0xad});
    CHECK(!from_hex("0xdea").has_value());
    CHECK(!from_hex("zz").has_value());
    CHECK(from_hex("").value().empty());
}

TEST_CASE("quantity parsing") {
    CHECK(parse_quantity("0x5208").value() == 21000);
    CHECK(parse_quantity("0x199c82cc00").value() == BigInt("110000000000"));
    CHECK(parse_quantity("123456789012345678901234567890").value() ==
          BigInt("123456789012345678901234567890"));
    CHECK(to_quantity(21000) == "0x5208");
    CHECK(to_quantity(0) == "0x0");
    CHECK(!parse_quantity("").has_value());
    CHECK(!parse_quantity("0x").has_value());
    CHECK(!parse_quantity("12a").has_value());
}

TEST_CASE("timestamp format and parse") {
    const InstantMs ms = parse_iso_ms("2018-07-01T12:44:09.123Z").value();
    CHECK(format_iso_ms(ms) == "2018-07-01T12:44:09.123Z");
    CHECK(format_utc_date(ms) == "2018-07-01");
    CHECK(parse_iso_ms("2018-07-01T12:44:09Z").value() == ms - 123);
    CHECK(!parse_iso_ms("2018-07-01 12:44:09Z").has_value());
    CHECK(utc_day_index(ms) == utc_day_index(ms + 1000));
    CHECK(utc_day_index(0) == 0);
    CHECK(utc_day_index(-1) == -1);
}

TEST_CASE("keccak256 known answers") {
    CHECK(keccak256(BytesView{}).to_hex() ==
          "0xc5d2460186f7233c927e7db2dcc703c0e500b653ca82273b7bfad8045d85a470");
    CHECK(keccak256(std::string_view("abc")).to_hex() ==
          "0x4e03657aea45a94fc7d47ba826c8d667c0d1e6e33a64a036ec44f58fa12d6c45");
    // spans more than one 136-byte block
    const std::string long_input(300, 'a');
    CHECK(keccak256(std::string_view(long_input)) == keccak256(std::string_view(long_input)));
    CHECK(keccak256(std::string_view("a")) != keccak256(std::string_view("b")));
}

TEST_CASE("function selectors") {
    CHECK(abi::selector_hex(abi::selector_of("transfer(address,uint256)")) == "a9059cbb");
    CHECK(abi::selector_hex(abi::selector_of("balanceOf(address)")) == "70a08231");
    CHECK(abi::selector_of("balanceOf(address)") == abi::selector_of("balanceOf(address)"));
}

TEST_CASE("rlp canonical atoms") {
    CHECK(rlp::decode(from_hex("80").value()) == rlp::Item(Bytes{}));
    CHECK(rlp::decode(from_hex("c0").value()) == rlp::Item(rlp::List{}));
    CHECK(rlp::decode(from_hex("7f").value()) == rlp::Item(Bytes{0x7f}));
    CHECK(rlp::encode(rlp::Item(Bytes{})) == from_hex("80").value());
    CHECK(rlp::encode(rlp::Item(rlp::List{})) == from_hex("c0").value());
}

TEST_CASE("rlp error kinds are distinct") {
    auto kind_of = [](const std::string& hex) {
        try {
            rlp::decode(from_hex(hex).value());
        } catch (const rlp::Error& e) {
            return e.kind();
        }
        FAIL("expected rlp::Error");
        return rlp::ErrorKind::Truncated;
    };
    CHECK(kind_of("82ff") == rlp::ErrorKind::Truncated);          // short string cut off
    CHECK(kind_of("b838") == rlp::ErrorKind::Truncated);          // long form, no payload
    CHECK(kind_of("8100") == rlp::ErrorKind::NonCanonical);       // 0x00 must be itself
    CHECK(kind_of("b80401020304") == rlp::ErrorKind::NonCanonical);  // long form, short payload
    CHECK(kind_of("b90004" + std::string(2048, '0')) == rlp::ErrorKind::NonCanonical);
    CHECK(kind_of("8080") == rlp::ErrorKind::Trailing);
}

namespace {

rlp::Item random_item(KeccakRng& rng, int depth, size_t& budget) {
    const bool make_list = depth < 4 && budget > 16 && rng.next_below(3) == 0;
    if (!make_list) {
        const size_t len = rng.next_below(std::min<uint64_t>(budget, 64));
        budget -= std::min(budget, len + 2);
        return rlp::Item(rng.bytes(len));
    }
    rlp::List children;
    const size_t n = rng.next_below(5);
    for (size_t i = 0; i < n && budget > 4; ++i)
        children.push_back(random_item(rng, depth + 1, budget));
    return rlp::Item(std::move(children));
}

}  // namespace

TEST_CASE("rlp round trip on random items") {
    KeccakRng rng(0x524c50);
    for (int trial = 0; trial < 200; ++trial) {
        size_t budget = 1024;
        const rlp::Item item = random_item(rng, 0, budget);
        const Bytes encoded = rlp::encode(item);
        CHECK(rlp::decode(encoded) == item);
        CHECK(rlp::encode(rlp::decode(encoded)) == encoded);
    }
}

TEST_CASE("golden raw transaction decodes field by field") {
    const Bytes raw = from_hex(kGoldenRawTx).value();
    DecodedTransaction tx = decode_legacy_tx(raw);

    CHECK(tx.nonce == 4703);
    CHECK(tx.gas_price == 0);
    CHECK(tx.gas_limit == 60000);
    CHECK(tx.to.value().to_hex() == "0x1a95b271b0535d15fa49932daba31ba612b52946");
    CHECK(tx.value == 0);
    CHECK(tx.v == 28);
    CHECK(tx.chain_id() == std::nullopt);
    CHECK(tx.r == parse_quantity(
                      "0x95e6417786f699db2dc195f47662c412bb125b8419b9af030ac237d64c5a9250")
                      .value());
    CHECK(tx.s == parse_quantity(
                      "0x357a79a314eecd583f9be2235fd627d85c9af8fe292f9e47d4fa261efc0487bc")
                      .value());
    CHECK(to_hex(tx.data).substr(0, 8) == "a9059cbb");

    // byte-exact round trip
    CHECK(encode_legacy_tx(tx) == raw);

    // digest frozen from the independent implementation
    CHECK(signing_hash(tx).to_hex() ==
          "0xf154930fca0bd798f8fd2d4e34913fe99c56451d42c19c57825745b606916bf1");

    CHECK(recover_sender(tx).to_hex() == "0x00a329c0648769a73afac7f9381e08fb43dbea72");
    CHECK(tx.from.value().to_hex() == "0x00a329c0648769a73afac7f9381e08fb43dbea72");
}

TEST_CASE("transaction decode rejects malformed payloads") {
    auto kind_of = [](const Bytes& raw) {
        try {
            decode_legacy_tx(raw);
        } catch (const TxError& e) {
            return e.kind();
        }
        FAIL("expected TxError");
        return TxErrorKind::Rlp;
    };

    auto valid_fields = [] {
        std::vector<Bytes> f(9, rlp::encode_integer(1));
        f[3] = rlp::encode_bytes(Bytes(20, 0xaa));  // to
        f[5] = rlp::encode_bytes(Bytes{});          // data
        f[6] = rlp::encode_integer(27);             // v
        return f;
    };
    CHECK_NOTHROW(decode_legacy_tx(rlp::encode_list(valid_fields())));

    // 8-item list
    std::vector<Bytes> eight(8, rlp::encode_integer(1));
    CHECK(kind_of(rlp::encode_list(eight)) == TxErrorKind::WrongArity);

    // typed envelope marker
    CHECK(kind_of(Bytes{0x02, 0x01}) == TxErrorKind::TypedEnvelope);

    // leading-zero integer
    auto fields = valid_fields();
    fields[0] = rlp::encode_bytes(Bytes{0x00, 0x01});
    CHECK(kind_of(rlp::encode_list(fields)) == TxErrorKind::LeadingZero);

    // 19-byte to field
    fields = valid_fields();
    fields[3] = rlp::encode_bytes(Bytes(19, 0xaa));
    CHECK(kind_of(rlp::encode_list(fields)) == TxErrorKind::BadAddress);

    // oversized r
    fields = valid_fields();
    fields[7] = rlp::encode_bytes(Bytes(33, 0x7f));
    CHECK(kind_of(rlp::encode_list(fields)) == TxErrorKind::Oversized);

    // v = 5: neither legacy nor EIP-155
    fields = valid_fields();
    fields[6] = rlp::encode_integer(5);
    CHECK(kind_of(rlp::encode_list(fields)) == TxErrorKind::BadSignature);

    // nested list where bytes belong
    fields = valid_fields();
    fields[5] = rlp::encode_list({});
    CHECK(kind_of(rlp::encode_list(fields)) == TxErrorKind::FieldNotBytes);

    // garbage bytes
    CHECK(kind_of(from_hex("0xdead").value()) == TxErrorKind::Rlp);
}

TEST_CASE("degenerate signature fails recovery") {
    const Bytes raw = from_hex(kGoldenRawTx).value();
    DecodedTransaction tx = decode_legacy_tx(raw);
    tx.r = 0;
    CHECK_THROWS_AS(recover_sender(tx), RecoveryError);
    tx = decode_legacy_tx(raw);
    tx.s = 0;
    CHECK_THROWS_AS(recover_sender(tx), RecoveryError);
}

TEST_CASE("sign then recover round trips across keys") {
    KeccakRng rng(0x5349474e);
    for (int trial = 0; trial < 100; ++trial) {
        const Bytes seed = rng.bytes(32);
        const PrivateKey key = PrivateKey::from_seed_bytes(seed);
        const Address expected = key.address();

        DecodedTransaction tx;
        tx.nonce = rng.next_below(1 << 20);
        tx.gas_price = BigInt(rng.next_u64() % 1'000'000'000'000ull);
        tx.gas_limit = 21000 + rng.next_below(100000);
        tx.to = Address::from_bytes(rng.bytes(20));
        tx.value = BigInt(rng.next_u64());
        tx.data = rng.bytes(rng.next_below(80));

        sign_tx(tx, key);
        CHECK((tx.v == 27 || tx.v == 28));

        const Bytes wire = encode_legacy_tx(tx);
        DecodedTransaction decoded = decode_legacy_tx(wire);
        CHECK(recover_sender(decoded).to_hex() == expected.to_hex());
    }
}

TEST_CASE("eip155 signing hash differs and still recovers") {
    const PrivateKey key = PrivateKey::from_seed_bytes(keccak256(std::string_view("k")).bytes);
    DecodedTransaction tx;
    tx.nonce = 7;
    tx.gas_limit = 21000;
    tx.to = Address::from_hex("0x1a95b271b0535d15fa49932daba31ba612b52946");
    tx.value = 1;

    sign_tx(tx, key);
    const Hash32 legacy_digest = signing_hash(tx);
    const int recid = static_cast<int>(tx.v - 27);

    // same signature material re-tagged with chain id 1
    DecodedTransaction eip = tx;
    eip.v = 35 + 2 * 1 + recid;
    CHECK(eip.chain_id().value() == 1);
    CHECK(signing_hash(eip) != legacy_digest);
}

TEST_CASE("golden call data decodes as an ERC20 transfer") {
    const Bytes raw = from_hex(kGoldenRawTx).value();
    const DecodedTransaction tx = decode_legacy_tx(raw);
    const auto registry = abi::SelectorRegistry::with_defaults();

    const abi::DecodedCall call = abi::decode_call_data(tx.data, registry);
    CHECK(call.kind == abi::DecodedCall::Kind::Known);
    CHECK(call.function == "transfer(address,uint256)");
    CHECK(call.is_erc20_transfer());
    REQUIRE(call.args.size() == 2);
    CHECK(call.args[0].name == "_to");
    CHECK(std::get<Address>(call.args[0].value).to_hex() ==
          "0x0fe07dbd07ba4c1075c1db97806ba3c5b113cee0");
    CHECK(call.args[1].name == "_value");
    CHECK(std::get<BigInt>(call.args[1].value) == 200'000'000);
}

TEST_CASE("call data edge cases") {
    const auto registry = abi::SelectorRegistry::with_defaults();

    const abi::DecodedCall empty = abi::decode_call_data(BytesView{}, registry);
    CHECK(empty.kind == abi::DecodedCall::Kind::PlainTransfer);
    CHECK(empty.function == "plain-transfer");

    const Bytes junk = from_hex("deadbeef").value();
    const abi::DecodedCall unknown = abi::decode_call_data(junk, registry);
    CHECK(unknown.kind == abi::DecodedCall::Kind::Unknown);
    CHECK(unknown.raw == junk);
    CHECK(unknown.selector.has_value());

    const Bytes stub = from_hex("ab").value();
    const abi::DecodedCall tiny = abi::decode_call_data(stub, registry);
    CHECK(tiny.kind == abi::DecodedCall::Kind::Unknown);
    CHECK(tiny.raw == stub);
    CHECK(!tiny.selector.has_value());

    // transfer selector with a truncated argument area
    Bytes short_call = from_hex("a9059cbb00").value();
    CHECK_THROWS_AS(abi::decode_call_data(short_call, registry), abi::MalformedCall);
}

TEST_CASE("registry csv loading verifies selector column") {
    abi::SelectorRegistry reg;
    std::istringstream csv(
        "a9059cbb,transfer(address,uint256)\n"
        "# comment\n"
        "70a08231,balanceOf(address)\n"
        "deadbeef,balanceOf(address)\n"       // wrong selector for signature
        "ffffffff,weird(string)\n"            // unsupported dynamic type
        "nonsense-line\n");
    const size_t skipped = reg.load_csv(csv);
    CHECK(skipped == 3);
    CHECK(reg.find(abi::selector_of("transfer(address,uint256)")) != nullptr);
    CHECK(reg.find(abi::selector_of("balanceOf(address)")) != nullptr);
}

TEST_CASE("selector registry agrees with keccak for every entry") {
    const auto registry = abi::SelectorRegistry::with_defaults();
    for (const auto& [sel, entry] : registry.entries())
        CHECK(abi::selector_of(entry.signature) == sel);
}
