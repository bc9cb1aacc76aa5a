// Copyright 2026 The rpclure Authors.
// Licensed under the Apache License, Version 2.0.

#include "rpclure/abi.hpp"

#include <istream>

#include "rpclure/keccak.hpp"

namespace rpclure::abi {

namespace {

// Canonical ERC20 argument names, used when decoding well-known calls so
// reports read like the contract source.
const std::map<std::string, std::vector<std::string>> kWellKnownArgNames = {
    {"transfer(address,uint256)", {"_to", "_value"}},
    {"transferFrom(address,address,uint256)", {"_from", "_to", "_value"}},
    {"approve(address,uint256)", {"_spender", "_value"}},
    {"balanceOf(address)", {"_owner"}},
    {"allowance(address,address)", {"_owner", "_spender"}},
};

bool is_supported_static_type(const std::string& type) {
    if (type == "address" || type == "bool") return true;
    if (type.rfind("uint", 0) == 0) {
        const std::string width = type.substr(4);
        if (width.empty()) return false;  // canonical form spells uint256
        int bits = 0;
        for (char c : width) {
            if (c < '0' || c > '9') return false;
            bits = bits * 10 + (c - '0');
        }
        return bits >= 8 && bits <= 256 && bits % 8 == 0;
    }
    if (type.rfind("bytes", 0) == 0 && type.size() > 5) {
        int n = 0;
        for (char c : type.substr(5)) {
            if (c < '0' || c > '9') return false;
            n = n * 10 + (c - '0');
        }
        return n >= 1 && n <= 32;
    }
    return false;
}

Value decode_slot(const std::string& type, BytesView slot) {
    if (type == "address") return Address::from_bytes(slot.subspan(12));
    if (type == "bool") {
        for (uint8_t b : slot)
            if (b != 0) return true;
        return false;
    }
    if (type.rfind("bytes", 0) == 0) {
        const size_t n = std::stoul(type.substr(5));
        return Bytes(slot.begin(), slot.begin() + n);
    }
    return bytes_to_bigint(slot);  // uintN
}

}  // namespace

Selector selector_of(std::string_view signature) {
    const Hash32 digest = keccak256(signature);
    Selector sel;
    std::copy_n(digest.bytes.begin(), 4, sel.begin());
    return sel;
}

std::string selector_hex(const Selector& sel) { return to_hex(sel); }

void SelectorRegistry::add(const std::string& signature) {
    const size_t open = signature.find('(');
    if (open == std::string::npos || signature.back() != ')' ||
        signature.find(' ') != std::string::npos)
        throw std::invalid_argument("abi: signature not in canonical name(type,...) form");

    Entry entry;
    entry.signature = signature;
    entry.name = signature.substr(0, open);

    const std::string arg_list = signature.substr(open + 1, signature.size() - open - 2);
    if (!arg_list.empty()) {
        size_t start = 0;
        while (true) {
            const size_t comma = arg_list.find(',', start);
            const std::string type = arg_list.substr(
                start, comma == std::string::npos ? std::string::npos : comma - start);
            if (!is_supported_static_type(type))
                throw std::invalid_argument("abi: unsupported argument type " + type);
            entry.arg_types.push_back(type);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
    }

    if (auto it = kWellKnownArgNames.find(signature); it != kWellKnownArgNames.end()) {
        entry.arg_names = it->second;
    } else {
        for (size_t i = 0; i < entry.arg_types.size(); ++i)
            entry.arg_names.push_back("arg" + std::to_string(i));
    }

    entries_[selector_of(signature)] = std::move(entry);
}

SelectorRegistry SelectorRegistry::with_defaults() {
    SelectorRegistry reg;
    reg.add("transfer(address,uint256)");
    reg.add("balanceOf(address)");
    reg.add("transferFrom(address,address,uint256)");
    reg.add("approve(address,uint256)");
    return reg;
}

size_t SelectorRegistry::load_csv(std::istream& in) {
    size_t skipped = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const size_t comma = line.find(',');
        if (comma == std::string::npos) {
            ++skipped;
            continue;
        }
        const std::string sel_hex = line.substr(0, comma);
        const std::string signature = line.substr(comma + 1);
        if (sel_hex != selector_hex(selector_of(signature))) {
            ++skipped;
            continue;
        }
        try {
            add(signature);
        } catch (const std::invalid_argument&) {
            ++skipped;
        }
    }
    return skipped;
}

const SelectorRegistry::Entry* SelectorRegistry::find(const Selector& sel) const {
    auto it = entries_.find(sel);
    return it == entries_.end() ? nullptr : &it->second;
}

DecodedCall decode_call_data(BytesView data, const SelectorRegistry& registry) {
    DecodedCall call;
    call.raw.assign(data.begin(), data.end());

    if (data.empty()) {
        call.kind = DecodedCall::Kind::PlainTransfer;
        call.function = "plain-transfer";
        return call;
    }
    if (data.size() < 4) {
        call.kind = DecodedCall::Kind::Unknown;
        call.function = "unknown";
        return call;
    }

    Selector sel;
    std::copy_n(data.begin(), 4, sel.begin());
    call.selector = sel;

    const SelectorRegistry::Entry* entry = registry.find(sel);
    if (!entry) {
        call.kind = DecodedCall::Kind::Unknown;
        call.function = "unknown";
        return call;
    }

    const size_t needed = 4 + 32 * entry->arg_types.size();
    if (data.size() < needed)
        throw MalformedCall("abi: " + entry->signature + " needs " + std::to_string(needed) +
                            " bytes, got " + std::to_string(data.size()));

    call.kind = DecodedCall::Kind::Known;
    call.function = entry->signature;
    for (size_t i = 0; i < entry->arg_types.size(); ++i) {
        Arg arg;
        arg.name = entry->arg_names[i];
        arg.type = entry->arg_types[i];
        arg.value = decode_slot(entry->arg_types[i], data.subspan(4 + 32 * i, 32));
        call.args.push_back(std::move(arg));
    }
    return call;
}

}  // namespace rpclure::abi
