// Copyright 2026 The rpclure Authors.
// Licensed under the Apache License, Version 2.0.

#include "rpclure/tx.hpp"

namespace rpclure {

namespace {

const Bytes& field_bytes(const rlp::List& fields, size_t index, const char* name) {
    if (!fields[index].is_bytes())
        throw TxError(TxErrorKind::FieldNotBytes, std::string("tx: ") + name + " is a list");
    return fields[index].as_bytes();
}

BigInt decode_integer(const Bytes& raw, size_t max_bytes, const char* name) {
    if (!raw.empty() && raw[0] == 0x00)
        throw TxError(TxErrorKind::LeadingZero, std::string("tx: ") + name + " has leading zero");
    if (raw.size() > max_bytes)
        throw TxError(TxErrorKind::Oversized, std::string("tx: ") + name + " wider than " +
                                                  std::to_string(max_bytes) + " bytes");
    return bytes_to_bigint(raw);
}

uint64_t decode_u64(const Bytes& raw, const char* name) {
    return to_u64(decode_integer(raw, 8, name));
}

}  // namespace

std::optional<uint64_t> DecodedTransaction::chain_id() const {
    if (v < 35) return std::nullopt;
    return (v - 35) / 2;
}

DecodedTransaction decode_legacy_tx(BytesView raw) {
    if (raw.empty()) throw TxError(TxErrorKind::Rlp, "tx: empty payload");
    if (raw[0] <= 0x7f)
        throw TxError(TxErrorKind::TypedEnvelope, "tx: typed transaction envelope not supported");

    rlp::Item item = [&] {
        try {
            return rlp::decode(raw);
        } catch (const rlp::Error& e) {
            throw TxError(TxErrorKind::Rlp, std::string("tx: ") + e.what());
        }
    }();

    if (!item.is_list()) throw TxError(TxErrorKind::NotAList, "tx: payload is not a list");
    const rlp::List& fields = item.as_list();
    if (fields.size() != 9)
        throw TxError(TxErrorKind::WrongArity,
                      "tx: expected 9 fields, got " + std::to_string(fields.size()));

    DecodedTransaction tx;
    tx.nonce = decode_u64(field_bytes(fields, 0, "nonce"), "nonce");
    tx.gas_price = decode_integer(field_bytes(fields, 1, "gasPrice"), 32, "gasPrice");
    tx.gas_limit = decode_u64(field_bytes(fields, 2, "gasLimit"), "gasLimit");

    const Bytes& to_raw = field_bytes(fields, 3, "to");
    if (to_raw.size() == 20) {
        tx.to = Address::from_bytes(to_raw);
    } else if (!to_raw.empty()) {
        throw TxError(TxErrorKind::BadAddress, "tx: to field is not 0 or 20 bytes");
    }

    tx.value = decode_integer(field_bytes(fields, 4, "value"), 32, "value");
    tx.data = field_bytes(fields, 5, "data");
    tx.v = decode_u64(field_bytes(fields, 6, "v"), "v");
    tx.r = decode_integer(field_bytes(fields, 7, "r"), 32, "r");
    tx.s = decode_integer(field_bytes(fields, 8, "s"), 32, "s");

    if (tx.v != 27 && tx.v != 28 && tx.v < 35)
        throw TxError(TxErrorKind::BadSignature, "tx: v=" + std::to_string(tx.v) +
                                                     " is neither 27/28 nor EIP-155 form");
    return tx;
}

namespace {

std::vector<Bytes> body_fields(const DecodedTransaction& tx) {
    std::vector<Bytes> out;
    out.push_back(rlp::encode_integer(tx.nonce));
    out.push_back(rlp::encode_integer(tx.gas_price));
    out.push_back(rlp::encode_integer(tx.gas_limit));
    out.push_back(tx.to ? rlp::encode_bytes(tx.to->bytes) : rlp::encode_bytes({}));
    out.push_back(rlp::encode_integer(tx.value));
    out.push_back(rlp::encode_bytes(tx.data));
    return out;
}

}  // namespace

Bytes encode_legacy_tx(const DecodedTransaction& tx) {
    std::vector<Bytes> fields = body_fields(tx);
    fields.push_back(rlp::encode_integer(tx.v));
    fields.push_back(rlp::encode_integer(tx.r));
    fields.push_back(rlp::encode_integer(tx.s));
    return rlp::encode_list(fields);
}

Hash32 signing_hash(const DecodedTransaction& tx) {
    std::vector<Bytes> fields = body_fields(tx);
    if (auto chain = tx.chain_id()) {
        fields.push_back(rlp::encode_integer(*chain));
        fields.push_back(rlp::encode_integer(0));
        fields.push_back(rlp::encode_integer(0));
    }
    return keccak256(rlp::encode_list(fields));
}

}  // namespace rpclure
