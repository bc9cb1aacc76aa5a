// Copyright 2026 The rpclure Authors.
// Licensed under the Apache License, Version 2.0.

#include "rpclure/secp256k1.hpp"

#include <openssl/bn.h>
#include <openssl/ec.h>
#include <openssl/obj_mac.h>
#include <openssl/rand.h>

#include <memory>

namespace rpclure {

namespace {

struct BnDeleter {
    void operator()(BIGNUM* p) const { BN_free(p); }
};
struct BnCtxDeleter {
    void operator()(BN_CTX* p) const { BN_CTX_free(p); }
};
struct PointDeleter {
    void operator()(EC_POINT* p) const { EC_POINT_free(p); }
};

using BnPtr = std::unique_ptr<BIGNUM, BnDeleter>;
using BnCtxPtr = std::unique_ptr<BN_CTX, BnCtxDeleter>;
using PointPtr = std::unique_ptr<EC_POINT, PointDeleter>;

const EC_GROUP* curve() {
    static EC_GROUP* group = EC_GROUP_new_by_curve_name(NID_secp256k1);
    if (!group) throw RecoveryError("secp256k1: curve unavailable in crypto backend");
    return group;
}

BnPtr to_bn(const BigInt& v) {
    Bytes raw = bigint_to_bytes(v);
    BnPtr bn(BN_bin2bn(raw.data(), static_cast<int>(raw.size()), nullptr));
    if (!bn) throw RecoveryError("secp256k1: out of memory");
    return bn;
}

BnPtr to_bn(BytesView raw) {
    BnPtr bn(BN_bin2bn(raw.data(), static_cast<int>(raw.size()), nullptr));
    if (!bn) throw RecoveryError("secp256k1: out of memory");
    return bn;
}

BigInt from_bn(const BIGNUM* bn) {
    Bytes raw(static_cast<size_t>(BN_num_bytes(bn)));
    BN_bn2bin(bn, raw.data());
    return bytes_to_bigint(raw);
}

const BIGNUM* order() { return EC_GROUP_get0_order(curve()); }

Bytes point_to_pubkey64(const EC_POINT* point, BN_CTX* ctx) {
    uint8_t buf[65];
    const size_t len = EC_POINT_point2oct(curve(), point, POINT_CONVERSION_UNCOMPRESSED, buf,
                                          sizeof(buf), ctx);
    if (len != 65) throw RecoveryError("secp256k1: point serialization failed");
    return Bytes(buf + 1, buf + 65);  // drop the 0x04 tag
}

}  // namespace

Bytes recover_pubkey(const Hash32& digest, const BigInt& r, const BigInt& s, int recid) {
    if (recid != 0 && recid != 1) throw RecoveryError("secp256k1: recid must be 0 or 1");

    BnCtxPtr ctx(BN_CTX_new());
    const BIGNUM* n = order();
    BnPtr r_bn = to_bn(r);
    BnPtr s_bn = to_bn(s);
    if (BN_is_zero(r_bn.get()) || BN_cmp(r_bn.get(), n) >= 0)
        throw RecoveryError("secp256k1: r out of range");
    if (BN_is_zero(s_bn.get()) || BN_cmp(s_bn.get(), n) >= 0)
        throw RecoveryError("secp256k1: s out of range");

    // Ephemeral point R from x = r and the parity bit. Fails if x is not a
    // curve residue. Cofactor is 1, so any curve point is in the group.
    PointPtr point_r(EC_POINT_new(curve()));
    if (EC_POINT_set_compressed_coordinates(curve(), point_r.get(), r_bn.get(), recid,
                                            ctx.get()) != 1)
        throw RecoveryError("secp256k1: r is not the x coordinate of a curve point");

    // Q = r^-1 * (s*R - z*G)
    BnPtr z = to_bn(digest.bytes);
    BnPtr r_inv(BN_new());
    if (!BN_mod_inverse(r_inv.get(), r_bn.get(), n, ctx.get()))
        throw RecoveryError("secp256k1: r not invertible");

    BnPtr u1(BN_new());  // -z * r^-1 mod n
    BnPtr u2(BN_new());  //  s * r^-1 mod n
    BN_mod(z.get(), z.get(), n, ctx.get());
    BN_mod_mul(u1.get(), z.get(), r_inv.get(), n, ctx.get());
    BN_sub(u1.get(), n, u1.get());
    BN_mod(u1.get(), u1.get(), n, ctx.get());
    BN_mod_mul(u2.get(), s_bn.get(), r_inv.get(), n, ctx.get());

    PointPtr q(EC_POINT_new(curve()));
    if (EC_POINT_mul(curve(), q.get(), u1.get(), point_r.get(), u2.get(), ctx.get()) != 1)
        throw RecoveryError("secp256k1: point multiplication failed");
    if (EC_POINT_is_at_infinity(curve(), q.get()))
        throw RecoveryError("secp256k1: recovered point at infinity");

    return point_to_pubkey64(q.get(), ctx.get());
}

Address pubkey_to_address(BytesView pubkey64) {
    const Hash32 digest = keccak256(pubkey64);
    return Address::from_bytes(BytesView(digest.bytes).subspan(12));
}

Address recover_sender(DecodedTransaction& tx) {
    Address from = recover_sender(static_cast<const DecodedTransaction&>(tx));
    tx.from = from;
    return from;
}

Address recover_sender(const DecodedTransaction& tx) {
    int recid;
    if (tx.v == 27 || tx.v == 28) {
        recid = static_cast<int>(tx.v - 27);
    } else if (tx.v >= 35) {
        recid = static_cast<int>((tx.v - 35) % 2);
    } else {
        throw RecoveryError("secp256k1: v encodes no recovery id");
    }
    const Bytes pubkey = recover_pubkey(signing_hash(tx), tx.r, tx.s, recid);
    return pubkey_to_address(pubkey);
}

PrivateKey PrivateKey::from_seed_bytes(BytesView seed32) {
    BnCtxPtr ctx(BN_CTX_new());
    BnPtr scalar = to_bn(seed32);
    BnPtr reduced(BN_new());
    // order - 1 keeps the scalar nonzero after the +1 below
    BnPtr n_minus_1(BN_dup(order()));
    BN_sub_word(n_minus_1.get(), 1);
    BN_mod(reduced.get(), scalar.get(), n_minus_1.get(), ctx.get());
    BN_add_word(reduced.get(), 1);

    PrivateKey key;
    BN_bn2binpad(reduced.get(), key.bytes.data(), 32);
    return key;
}

Address PrivateKey::address() const {
    BnCtxPtr ctx(BN_CTX_new());
    BnPtr priv = to_bn(BytesView(bytes));
    PointPtr pub(EC_POINT_new(curve()));
    if (EC_POINT_mul(curve(), pub.get(), priv.get(), nullptr, nullptr, ctx.get()) != 1)
        throw RecoveryError("secp256k1: derive failed");
    return pubkey_to_address(point_to_pubkey64(pub.get(), ctx.get()));
}

void sign_tx(DecodedTransaction& tx, const PrivateKey& key) {
    BnCtxPtr ctx(BN_CTX_new());
    const BIGNUM* n = order();
    const Hash32 digest = signing_hash(tx);

    BnPtr priv = to_bn(BytesView(key.bytes));
    BnPtr z = to_bn(digest.bytes);
    BN_mod(z.get(), z.get(), n, ctx.get());

    BnPtr half_n(BN_dup(n));
    BN_rshift1(half_n.get(), half_n.get());

    for (uint32_t attempt = 0;; ++attempt) {
        // Deterministic nonce: keccak(priv || digest || attempt), reduced.
        Bytes nonce_input(key.bytes.begin(), key.bytes.end());
        nonce_input.insert(nonce_input.end(), digest.bytes.begin(), digest.bytes.end());
        for (int i = 0; i < 4; ++i)
            nonce_input.push_back(static_cast<uint8_t>(attempt >> (8 * i)));
        const Hash32 nonce_seed = keccak256(nonce_input);

        BnPtr k = to_bn(BytesView(nonce_seed.bytes));
        BN_mod(k.get(), k.get(), n, ctx.get());
        if (BN_is_zero(k.get())) continue;

        PointPtr point_r(EC_POINT_new(curve()));
        if (EC_POINT_mul(curve(), point_r.get(), k.get(), nullptr, nullptr, ctx.get()) != 1)
            throw RecoveryError("secp256k1: nonce point failed");

        BnPtr rx(BN_new()), ry(BN_new());
        EC_POINT_get_affine_coordinates(curve(), point_r.get(), rx.get(), ry.get(), ctx.get());

        // recid needs x < n so that recovery reads r back as the x coordinate
        if (BN_cmp(rx.get(), n) >= 0) continue;
        BnPtr r_bn(BN_dup(rx.get()));
        if (BN_is_zero(r_bn.get())) continue;

        // s = k^-1 (z + r * priv) mod n
        BnPtr k_inv(BN_new());
        if (!BN_mod_inverse(k_inv.get(), k.get(), n, ctx.get())) continue;
        BnPtr s_bn(BN_new());
        BN_mod_mul(s_bn.get(), r_bn.get(), priv.get(), n, ctx.get());
        BN_mod_add(s_bn.get(), s_bn.get(), z.get(), n, ctx.get());
        BN_mod_mul(s_bn.get(), s_bn.get(), k_inv.get(), n, ctx.get());
        if (BN_is_zero(s_bn.get())) continue;

        int recid = BN_is_odd(ry.get()) ? 1 : 0;
        if (BN_cmp(s_bn.get(), half_n.get()) > 0) {  // low-s normalization
            BN_sub(s_bn.get(), n, s_bn.get());
            recid ^= 1;
        }

        tx.v = 27 + static_cast<uint64_t>(recid);
        tx.r = from_bn(r_bn.get());
        tx.s = from_bn(s_bn.get());
        tx.from = key.address();
        return;
    }
}

void csprng_fill(uint8_t* out, size_t len) {
    if (RAND_bytes(out, static_cast<int>(len)) != 1)
        throw std::runtime_error("csprng: RAND_bytes failed");
}

Hash32 csprng_hash32() {
    Hash32 h;
    csprng_fill(h.bytes.data(), h.bytes.size());
    return h;
}

}  // namespace rpclure
