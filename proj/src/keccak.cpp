// Copyright 2026 The rpclure Authors.
// Licensed under the Apache License, Version 2.0.

#include "rpclure/keccak.hpp"

#include <cstring>

namespace rpclure {

namespace {

constexpr uint64_t kRoundConstants[24] = {
    0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808aULL, 0x8000000080008000ULL,
    0x000000000000808bULL, 0x0000000080000001ULL, 0x8000000080008081ULL, 0x8000000000008009ULL,
    0x000000000000008aULL, 0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000aULL,
    0x000000008000808bULL, 0x800000000000008bULL, 0x8000000000008089ULL, 0x8000000000008003ULL,
    0x8000000000008002ULL, 0x8000000000000080ULL, 0x000000000000800aULL, 0x800000008000000aULL,
    0x8000000080008081ULL, 0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL,
};

// rho rotation offsets and pi lane permutation, indexed x + 5y.
constexpr int kRotation[25] = {0,  1,  62, 28, 27, 36, 44, 6,  55, 20, 3,  10, 43,
                               25, 39, 41, 45, 15, 21, 8,  18, 2,  61, 56, 14};

constexpr uint64_t rotl(uint64_t v, int n) { return n == 0 ? v : (v << n) | (v >> (64 - n)); }

void keccak_f1600(uint64_t state[25]) {
    for (int round = 0; round < 24; ++round) {
        // theta
        uint64_t c[5], d[5];
        for (int x = 0; x < 5; ++x)
            c[x] = state[x] ^ state[x + 5] ^ state[x + 10] ^ state[x + 15] ^ state[x + 20];
        for (int x = 0; x < 5; ++x) {
            d[x] = c[(x + 4) % 5] ^ rotl(c[(x + 1) % 5], 1);
            for (int y = 0; y < 25; y += 5) state[x + y] ^= d[x];
        }
        // rho + pi
        uint64_t b[25];
        for (int x = 0; x < 5; ++x)
            for (int y = 0; y < 5; ++y)
                b[y + 5 * ((2 * x + 3 * y) % 5)] = rotl(state[x + 5 * y], kRotation[x + 5 * y]);
        // chi
        for (int y = 0; y < 25; y += 5)
            for (int x = 0; x < 5; ++x)
                state[x + y] = b[x + y] ^ (~b[(x + 1) % 5 + y] & b[(x + 2) % 5 + y]);
        // iota
        state[0] ^= kRoundConstants[round];
    }
}

constexpr size_t kRate = 136;  // 1088-bit rate for 256-bit output

uint64_t load_le64(const uint8_t* p) {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(p[i]) << (8 * i);
    return v;
}

}  // namespace

Hash32 keccak256(BytesView input) {
    uint64_t state[25] = {};
    uint8_t block[kRate];

    size_t offset = 0;
    while (input.size() - offset >= kRate) {
        for (size_t i = 0; i < kRate / 8; ++i) state[i] ^= load_le64(input.data() + offset + 8 * i);
        keccak_f1600(state);
        offset += kRate;
    }

    const size_t tail = input.size() - offset;
    std::memset(block, 0, kRate);
    if (tail > 0) std::memcpy(block, input.data() + offset, tail);
    block[tail] ^= 0x01;
    block[kRate - 1] ^= 0x80;
    for (size_t i = 0; i < kRate / 8; ++i) state[i] ^= load_le64(block + 8 * i);
    keccak_f1600(state);

    Hash32 out;
    for (int i = 0; i < 4; ++i)
        for (int b = 0; b < 8; ++b)
            out.bytes[8 * i + b] = static_cast<uint8_t>(state[i] >> (8 * b));
    return out;
}

Hash32 keccak256(std::string_view input) {
    return keccak256(BytesView(reinterpret_cast<const uint8_t*>(input.data()), input.size()));
}

KeccakRng::KeccakRng(uint64_t seed) {
    uint8_t raw[8];
    for (int i = 0; i < 8; ++i) raw[i] = static_cast<uint8_t>(seed >> (8 * i));
    seed_ = keccak256(BytesView(raw, 8));
}

KeccakRng::KeccakRng(const Hash32& seed) : seed_(seed) {}

void KeccakRng::refill() {
    uint8_t buf[40];
    std::memcpy(buf, seed_.bytes.data(), 32);
    for (int i = 0; i < 8; ++i) buf[32 + i] = static_cast<uint8_t>(counter_ >> (8 * i));
    ++counter_;
    block_ = keccak256(BytesView(buf, 40));
    avail_ = 32;
}

void KeccakRng::fill(uint8_t* out, size_t len) {
    while (len > 0) {
        if (avail_ == 0) refill();
        const size_t take = std::min(len, avail_);
        std::memcpy(out, block_.bytes.data() + (32 - avail_), take);
        avail_ -= take;
        out += take;
        len -= take;
    }
}

Bytes KeccakRng::bytes(size_t len) {
    Bytes out(len);
    fill(out.data(), len);
    return out;
}

uint64_t KeccakRng::next_u64() {
    uint8_t raw[8];
    fill(raw, 8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(raw[i]) << (8 * i);
    return v;
}

uint64_t KeccakRng::next_below(uint64_t bound) {
    const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t v;
    do {
        v = next_u64();
    } while (v >= limit);
    return v % bound;
}

}  // namespace rpclure
