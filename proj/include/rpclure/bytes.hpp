// Copyright 2026 The rpclure Authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace rpclure {

using Bytes = std::vector<uint8_t>;
using BytesView = std::span<const uint8_t>;
using BigInt = boost::multiprecision::cpp_int;

/// 20-byte Ethereum account address, always rendered 0x-prefixed lowercase.
struct Address {
    std::array<uint8_t, 20> bytes{};

    static std::optional<Address> from_hex(std::string_view hex);
    static Address from_bytes(BytesView raw);  // raw.size() must be 20

    std::string to_hex() const;
    auto operator<=>(const Address&) const = default;
};

struct Hash32 {
    std::array<uint8_t, 32> bytes{};

    static std::optional<Hash32> from_hex(std::string_view hex);
    std::string to_hex() const;
    auto operator<=>(const Hash32&) const = default;
};

std::string to_hex(BytesView data);                       // no 0x prefix
std::string to_hex_prefixed(BytesView data);              // 0x-prefixed
std::optional<Bytes> from_hex(std::string_view hex);      // accepts optional 0x

// Big-endian integer <-> bytes, minimal encoding (no leading zero bytes).
Bytes bigint_to_bytes(const BigInt& value);
BigInt bytes_to_bigint(BytesView data);

// Ethereum JSON quantities: "0x0", "0x5208", ... (minimal hex, lowercase).
std::string to_quantity(const BigInt& value);
// Accepts 0x-hex or plain decimal; rejects empty/garbage/negative.
std::optional<BigInt> parse_quantity(std::string_view text);

bool fits_u64(const BigInt& value);
uint64_t to_u64(const BigInt& value);  // caller checked fits_u64

}  // namespace rpclure

template <>
struct std::hash<rpclure::Address> {
    size_t operator()(const rpclure::Address& a) const noexcept {
        size_t h = 1469598103934665603ull;
        for (uint8_t b : a.bytes) h = (h ^ b) * 1099511628211ull;
        return h;
    }
};

template <>
struct std::hash<rpclure::Hash32> {
    size_t operator()(const rpclure::Hash32& h32) const noexcept {
        size_t h = 1469598103934665603ull;
        for (uint8_t b : h32.bytes) h = (h ^ b) * 1099511628211ull;
        return h;
    }
};
