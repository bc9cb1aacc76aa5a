// Copyright 2026 The rpclure Authors.
// Licensed under the Apache License, Version 2.0.

#include "rpclure/bytes.hpp"

#include <algorithm>

namespace rpclure {

namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

std::string_view strip_0x(std::string_view hex) {
    if (hex.size() >= 2 && hex[0] == '0' && (hex[1] == 'x' || hex[1] == 'X'))
        hex.remove_prefix(2);
    return hex;
}

}  // namespace

std::string to_hex(BytesView data) {
    std::string out;
    out.reserve(data.size() * 2);
    for (uint8_t b : data) {
        out.push_back(kHexDigits[b >> 4]);
        out.push_back(kHexDigits[b & 0x0f]);
    }
    return out;
}

std::string to_hex_prefixed(BytesView data) { return "0x" + to_hex(data); }

std::optional<Bytes> from_hex(std::string_view hex) {
    hex = strip_0x(hex);
    if (hex.size() % 2 != 0) return std::nullopt;
    Bytes out;
    out.reserve(hex.size() / 2);
    for (size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_nibble(hex[i]);
        int lo = hex_nibble(hex[i + 1]);
        if (hi < 0 || lo < 0) return std::nullopt;
        out.push_back(static_cast<uint8_t>(hi << 4 | lo));
    }
    return out;
}

std::optional<Address> Address::from_hex(std::string_view hex) {
    auto raw = rpclure::from_hex(hex);
    if (!raw || raw->size() != 20) return std::nullopt;
    Address a;
    std::copy(raw->begin(), raw->end(), a.bytes.begin());
    return a;
}

Address Address::from_bytes(BytesView raw) {
    Address a;
    std::copy(raw.begin(), raw.end(), a.bytes.begin());
    return a;
}

std::string Address::to_hex() const { return to_hex_prefixed(bytes); }

std::optional<Hash32> Hash32::from_hex(std::string_view hex) {
    auto raw = rpclure::from_hex(hex);
    if (!raw || raw->size() != 32) return std::nullopt;
    Hash32 h;
    std::copy(raw->begin(), raw->end(), h.bytes.begin());
    return h;
}

std::string Hash32::to_hex() const { return to_hex_prefixed(bytes); }

Bytes bigint_to_bytes(const BigInt& value) {
    Bytes out;
    if (value == 0) return out;
    BigInt v = value;
    while (v > 0) {
        out.push_back(static_cast<uint8_t>(v & 0xff));
        v >>= 8;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

BigInt bytes_to_bigint(BytesView data) {
    BigInt v = 0;
    for (uint8_t b : data) {
        v <<= 8;
        v |= b;
    }
    return v;
}

std::string to_quantity(const BigInt& value) {
    if (value == 0) return "0x0";
    std::string digits;
    BigInt v = value;
    while (v > 0) {
        digits.push_back(kHexDigits[static_cast<int>(v & 0xf)]);
        v >>= 4;
    }
    std::reverse(digits.begin(), digits.end());
    return "0x" + digits;
}

std::optional<BigInt> parse_quantity(std::string_view text) {
    if (text.empty()) return std::nullopt;
    BigInt v = 0;
    if (text.size() >= 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
        text.remove_prefix(2);
        if (text.empty()) return std::nullopt;
        for (char c : text) {
            int nib = hex_nibble(c);
            if (nib < 0) return std::nullopt;
            v <<= 4;
            v |= nib;
        }
        return v;
    }
    for (char c : text) {
        if (c < '0' || c > '9') return std::nullopt;
        v *= 10;
        v += c - '0';
    }
    return v;
}

bool fits_u64(const BigInt& value) {
    return value >= 0 && value <= BigInt(std::numeric_limits<uint64_t>::max());
}

uint64_t to_u64(const BigInt& value) { return static_cast<uint64_t>(value); }

}  // namespace rpclure
