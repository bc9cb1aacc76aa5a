// Copyright 2026 The rpclure Authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <unordered_map>
#include <vector>

#include "rpclure/bytes.hpp"
#include "rpclure/timeutil.hpp"

namespace rpclure {

/// One on-chain value transfer.
struct LedgerTx {
    Hash32 hash;
    Address from;
    std::optional<Address> to;  // absent = contract creation
    BigInt value = 0;
    uint64_t block = 0;
    InstantMs ts = 0;

    std::string to_ndjson_line() const;
    static std::optional<LedgerTx> from_json_line(const std::string& line);
};

enum class LabelKind { Market, TorExit, Other };

struct AddressLabel {
    Address address;
    LabelKind kind = LabelKind::Other;
    std::string name;
};

/// CSV `address,label,name`; labels: market | tor_exit | other.
std::vector<AddressLabel> load_labels_csv(std::istream& in, size_t* malformed = nullptr);
std::vector<AddressLabel> load_labels_file(const std::string& path, size_t* malformed = nullptr);

struct ImportStats {
    size_t inserted = 0;
    size_t duplicates = 0;
    size_t malformed = 0;
};

/// In-memory transaction store, deduplicated on hash, with the NDJSON file
/// as the durable interchange format.
class LedgerStore {
  public:
    /// Idempotent: lines whose hash is already present change nothing.
    ImportStats import(std::istream& in);
    ImportStats import_file(const std::string& path);
    bool insert(const LedgerTx& tx);  // false on duplicate hash

    /// Canonical dump, ordered by (block, hash).
    void save(std::ostream& out) const;
    void save_file(const std::string& path) const;

    /// Outgoing transfers of an address, ordered by (block, hash).
    std::vector<const LedgerTx*> outgoing(const Address& from) const;
    /// Sum of values flowing into the address (self-transfers included here;
    /// taint accounting excludes them on its side).
    BigInt incoming_sum(const Address& to) const;
    /// Incoming sum that skips from == to.
    BigInt incoming_sum_nonself(const Address& to) const;

    size_t size() const { return txs_.size(); }
    const std::vector<LedgerTx>& all() const { return txs_; }

  private:
    std::vector<LedgerTx> txs_;
    std::unordered_map<Hash32, size_t> by_hash_;
    std::unordered_map<Address, std::vector<size_t>> outgoing_;
    std::unordered_map<Address, std::vector<size_t>> incoming_;
};

}  // namespace rpclure
