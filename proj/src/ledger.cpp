// Copyright 2026 The rpclure Authors.
// Licensed under the Apache License, Version 2.0.

#include "rpclure/ledger.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

namespace rpclure {

using nlohmann::json;

std::string LedgerTx::to_ndjson_line() const {
    json doc;
    doc["hash"] = hash.to_hex();
    doc["from"] = from.to_hex();
    doc["to"] = to ? json(to->to_hex()) : json(nullptr);
    doc["value"] = value.str();  // decimal Wei, exact
    doc["block"] = block;
    doc["ts"] = format_iso_ms(ts);
    return doc.dump();
}

std::optional<LedgerTx> LedgerTx::from_json_line(const std::string& line) {
    const json doc = json::parse(line, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) return std::nullopt;
    LedgerTx tx;
    try {
        auto hash = Hash32::from_hex(doc.at("hash").get<std::string>());
        auto from = Address::from_hex(doc.at("from").get<std::string>());
        if (!hash || !from) return std::nullopt;
        tx.hash = *hash;
        tx.from = *from;
        if (doc.contains("to") && !doc["to"].is_null()) {
            auto to = Address::from_hex(doc["to"].get<std::string>());
            if (!to) return std::nullopt;
            tx.to = *to;
        }
        const json& value = doc.at("value");
        auto wei = parse_quantity(value.is_string() ? value.get<std::string>() : value.dump());
        if (!wei) return std::nullopt;
        tx.value = *wei;
        tx.block = doc.at("block").get<uint64_t>();
        const json& ts = doc.at("ts");
        if (ts.is_string()) {
            auto parsed = parse_iso_ms(ts.get<std::string>());
            if (!parsed) return std::nullopt;
            tx.ts = *parsed;
        } else if (ts.is_number()) {
            tx.ts = ts.get<int64_t>();  // unix seconds or millis both appear in dumps
            if (tx.ts < 100'000'000'000) tx.ts *= 1000;
        } else {
            return std::nullopt;
        }
    } catch (const json::exception&) {
        return std::nullopt;
    }
    return tx;
}

std::vector<AddressLabel> load_labels_csv(std::istream& in, size_t* malformed) {
    std::vector<AddressLabel> labels;
    size_t bad = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const size_t c1 = line.find(',');
        if (c1 == std::string::npos) {
            ++bad;
            continue;
        }
        const size_t c2 = line.find(',', c1 + 1);
        const std::string addr_text = line.substr(0, c1);
        const std::string kind_text =
            line.substr(c1 + 1, c2 == std::string::npos ? std::string::npos : c2 - c1 - 1);
        auto addr = Address::from_hex(addr_text);
        if (!addr) {
            if (addr_text != "address") ++bad;  // tolerate a header row
            continue;
        }
        AddressLabel label;
        label.address = *addr;
        if (kind_text == "market") label.kind = LabelKind::Market;
        else if (kind_text == "tor_exit") label.kind = LabelKind::TorExit;
        else if (kind_text == "other") label.kind = LabelKind::Other;
        else {
            ++bad;
            continue;
        }
        if (c2 != std::string::npos) label.name = line.substr(c2 + 1);
        labels.push_back(std::move(label));
    }
    if (malformed) *malformed = bad;
    return labels;
}

std::vector<AddressLabel> load_labels_file(const std::string& path, size_t* malformed) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("labels: cannot open " + path);
    return load_labels_csv(in, malformed);
}

bool LedgerStore::insert(const LedgerTx& tx) {
    if (by_hash_.contains(tx.hash)) return false;
    const size_t index = txs_.size();
    txs_.push_back(tx);
    by_hash_.emplace(tx.hash, index);
    outgoing_[tx.from].push_back(index);
    if (tx.to) incoming_[*tx.to].push_back(index);
    return true;
}

ImportStats LedgerStore::import(std::istream& in) {
    ImportStats stats;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto tx = LedgerTx::from_json_line(line);
        if (!tx) {
            ++stats.malformed;
            continue;
        }
        if (insert(*tx)) ++stats.inserted;
        else ++stats.duplicates;
    }
    return stats;
}

ImportStats LedgerStore::import_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("ledger: cannot open " + path);
    return import(in);
}

namespace {

bool tx_order(const LedgerTx& a, const LedgerTx& b) {
    if (a.block != b.block) return a.block < b.block;
    return a.hash.bytes < b.hash.bytes;
}

}  // namespace

void LedgerStore::save(std::ostream& out) const {
    std::vector<const LedgerTx*> sorted;
    sorted.reserve(txs_.size());
    for (const auto& tx : txs_) sorted.push_back(&tx);
    std::sort(sorted.begin(), sorted.end(),
              [](const LedgerTx* a, const LedgerTx* b) { return tx_order(*a, *b); });
    for (const LedgerTx* tx : sorted) out << tx->to_ndjson_line() << '\n';
}

void LedgerStore::save_file(const std::string& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("ledger: cannot write " + path);
    save(out);
}

std::vector<const LedgerTx*> LedgerStore::outgoing(const Address& from) const {
    std::vector<const LedgerTx*> out;
    auto it = outgoing_.find(from);
    if (it == outgoing_.end()) return out;
    out.reserve(it->second.size());
    for (size_t index : it->second) out.push_back(&txs_[index]);
    std::sort(out.begin(), out.end(),
              [](const LedgerTx* a, const LedgerTx* b) { return tx_order(*a, *b); });
    return out;
}

BigInt LedgerStore::incoming_sum(const Address& to) const {
    BigInt sum = 0;
    auto it = incoming_.find(to);
    if (it == incoming_.end()) return sum;
    for (size_t index : it->second) sum += txs_[index].value;
    return sum;
}

BigInt LedgerStore::incoming_sum_nonself(const Address& to) const {
    BigInt sum = 0;
    auto it = incoming_.find(to);
    if (it == incoming_.end()) return sum;
    for (size_t index : it->second)
        if (!(txs_[index].from == to)) sum += txs_[index].value;
    return sum;
}

}  // namespace rpclure
