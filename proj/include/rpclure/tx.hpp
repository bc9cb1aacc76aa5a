// Copyright 2026 The rpclure Authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <optional>
#include <stdexcept>

#include "rpclure/bytes.hpp"
#include "rpclure/keccak.hpp"
#include "rpclure/rlp.hpp"

namespace rpclure {

/// The nine fields of a pre-typed-envelope Ethereum transaction, plus the
/// sender once recovered from the signature.
struct DecodedTransaction {
    uint64_t nonce = 0;
    BigInt gas_price = 0;
    uint64_t gas_limit = 0;
    std::optional<Address> to;  // absent = contract creation
    BigInt value = 0;
    Bytes data;
    uint64_t v = 0;
    BigInt r = 0;
    BigInt s = 0;
    std::optional<Address> from;

    bool is_eip155() const { return v >= 35; }
    /// Present only for EIP-155 signatures.
    std::optional<uint64_t> chain_id() const;
};

enum class TxErrorKind {
    TypedEnvelope,   // first byte <= 0x7f: typed transaction, unsupported
    NotAList,        // payload is not an RLP list
    WrongArity,      // list does not have exactly 9 items
    FieldNotBytes,   // a field is a nested list
    LeadingZero,     // integer field has a leading zero byte
    Oversized,       // integer field wider than its type allows
    BadAddress,      // `to` is neither empty nor 20 bytes
    BadSignature,    // v outside {27,28} and below the EIP-155 range
    Rlp,             // malformed RLP (wraps rlp::Error)
};

class TxError : public std::runtime_error {
  public:
    TxError(TxErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    TxErrorKind kind() const { return kind_; }

  private:
    TxErrorKind kind_;
};

/// Positional decode of the 9-field legacy wire format. `from` is left unset;
/// use recover_sender for that.
DecodedTransaction decode_legacy_tx(BytesView raw);

/// Canonical re-encode; decode_legacy_tx(encode_legacy_tx(tx)) round-trips.
Bytes encode_legacy_tx(const DecodedTransaction& tx);

/// Digest the signature commits to: keccak of the 6-field RLP for v in
/// {27,28}, or the 9-field EIP-155 form (chain_id, 0, 0) otherwise.
Hash32 signing_hash(const DecodedTransaction& tx);

}  // namespace rpclure
