// Copyright 2026 The rpclure Authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <optional>
#include <stdexcept>

#include "rpclure/bytes.hpp"
#include "rpclure/tx.hpp"

namespace rpclure {

class RecoveryError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// ECDSA public-key recovery on secp256k1. recid selects the parity of the
/// ephemeral point. Returns the 64-byte uncompressed key (x || y).
/// Throws RecoveryError for r/s out of [1, n-1], x not on the curve, or a
/// point at infinity.
Bytes recover_pubkey(const Hash32& digest, const BigInt& r, const BigInt& s, int recid);

/// keccak256(pubkey)[12..32]
Address pubkey_to_address(BytesView pubkey64);

/// Sender of a signed legacy transaction; also writes tx.from.
Address recover_sender(DecodedTransaction& tx);
Address recover_sender(const DecodedTransaction& tx);

/// Throwaway signing keys for scenario replay and round-trip tests.
struct PrivateKey {
    std::array<uint8_t, 32> bytes{};

    /// Reduces arbitrary 32 bytes into a valid nonzero scalar.
    static PrivateKey from_seed_bytes(BytesView seed32);

    Address address() const;
};

/// Signs the transaction body in place (fills v, r, s, from). v is the
/// legacy 27/28 form; s is normalized to the low half of the order.
void sign_tx(DecodedTransaction& tx, const PrivateKey& key);

/// Process CSPRNG (OpenSSL RAND); safe for concurrent use.
void csprng_fill(uint8_t* out, size_t len);
Hash32 csprng_hash32();

}  // namespace rpclure
