// Copyright 2026 The rpclure Authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <stdexcept>
#include <variant>
#include <vector>

#include "rpclure/bytes.hpp"

namespace rpclure::rlp {

struct Item;
using List = std::vector<Item>;

/// One RLP node: either a byte string or a list of items.
struct Item {
    std::variant<Bytes, List> value;

    Item() : value(Bytes{}) {}
    Item(Bytes b) : value(std::move(b)) {}
    Item(List l) : value(std::move(l)) {}

    bool is_bytes() const { return std::holds_alternative<Bytes>(value); }
    bool is_list() const { return std::holds_alternative<List>(value); }
    const Bytes& as_bytes() const { return std::get<Bytes>(value); }
    const List& as_list() const { return std::get<List>(value); }

    bool operator==(const Item& other) const = default;
};

enum class ErrorKind {
    Truncated,     // input ends before the announced payload does
    NonCanonical,  // a shorter encoding exists for the same content
    Trailing,      // bytes remain after the top-level item
    TooDeep,       // nesting beyond the sanity limit
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

/// Strict decode: consumes the whole input, rejects non-canonical length
/// prefixes (leading zeros, long form where short form fits).
Item decode(BytesView input);

Bytes encode(const Item& item);
Bytes encode_bytes(BytesView payload);
Bytes encode_list(const std::vector<Bytes>& encoded_children);

/// Minimal big-endian integer payload (empty string for zero).
Bytes encode_integer(const BigInt& value);

}  // namespace rpclure::rlp
