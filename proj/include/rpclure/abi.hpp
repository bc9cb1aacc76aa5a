// Copyright 2026 The rpclure Authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "rpclure/bytes.hpp"

namespace rpclure::abi {

using Selector = std::array<uint8_t, 4>;

/// First 4 bytes of keccak256 of the canonical signature "name(type,...)".
Selector selector_of(std::string_view signature);
std::string selector_hex(const Selector& sel);

/// Static-slot value: address, unsigned integer, bool, or fixed bytes.
using Value = std::variant<Address, BigInt, bool, Bytes>;

struct Arg {
    std::string name;
    std::string type;
    Value value;
};

struct DecodedCall {
    enum class Kind { PlainTransfer, Known, Unknown };

    Kind kind = Kind::PlainTransfer;
    std::string function;  // signature, or "plain-transfer" / "unknown"
    std::optional<Selector> selector;
    std::vector<Arg> args;
    Bytes raw;  // the call data exactly as captured

    bool is_erc20_transfer() const { return function == "transfer(address,uint256)"; }
};

class MalformedCall : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Known selectors to decode by. Ships with the ERC20 entries the pipeline
/// needs; extendable from a CSV of `selector_hex,signature` lines.
class SelectorRegistry {
  public:
    struct Entry {
        std::string signature;
        std::string name;
        std::vector<std::string> arg_types;
        std::vector<std::string> arg_names;
    };

    static SelectorRegistry with_defaults();

    /// Adds one signature; throws std::invalid_argument for signatures with
    /// types outside the static-slot subset.
    void add(const std::string& signature);

    /// Loads CSV lines; entries whose selector column disagrees with the
    /// signature hash are skipped. Returns the number of skipped lines.
    size_t load_csv(std::istream& in);

    const Entry* find(const Selector& sel) const;
    const std::map<Selector, Entry>& entries() const { return entries_; }

  private:
    std::map<Selector, Entry> entries_;
};

/// Decodes a transaction data field. Empty data is a plain value transfer;
/// unknown selectors are preserved, never dropped. Throws MalformedCall when
/// a known selector has fewer bytes than its argument slots need.
DecodedCall decode_call_data(BytesView data, const SelectorRegistry& registry);

}  // namespace rpclure::abi
