// Copyright 2026 The rpclure Authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "rpclure/ledger.hpp"

namespace rpclure::taint {

enum class NodeClass { Malicious, Suspicious, Unknown, Market };

std::string_view to_string(NodeClass cls);

struct TaintGraph {
    struct Node {
        NodeClass cls = NodeClass::Unknown;
        int depth = 0;  // min intermediate accounts from any seed (seeds: 0)
    };
    struct Edge {
        Address from;
        Address to;
        BigInt total_wei;
        size_t tx_count = 0;
    };

    std::map<Address, Node> nodes;
    std::vector<Edge> edges;  // ordered by (from, to)

    std::set<Address> of_class(NodeClass cls) const;
};

/// Forward propagation from the seed accounts toward market sinks.
/// An account is Suspicious iff it sits on a simple path seed -> ... ->
/// market whose non-seed, non-market account count is at most `threshold`;
/// accounts reached within the bound but on no such path are Unknown.
/// Markets absorb (no propagation through them); self-transfers and
/// zero-value transfers never propagate.
TaintGraph trace(const std::set<Address>& seeds, const std::vector<AddressLabel>& labels,
                 const LedgerStore& ledger, int threshold = 3);

/// Graphviz rendering: house = market, circle = malicious, box = suspicious,
/// gray box = unknown; edges labeled with Ether to 2 decimals.
std::string export_dot(const TaintGraph& graph);

// --- profit accounting -----------------------------------------------------

/// Wei -> "1234.56" (Ether, 2 decimals, round half up).
std::string format_ether_2dp(const BigInt& wei);
/// Wei at a decimal USD/ETH price -> whole cents, round half up.
BigInt usd_cents(const BigInt& wei, const std::string& price_usd_per_eth);
/// cents -> "1234.56"
std::string format_cents(const BigInt& cents);
/// "116.91" Ether -> Wei, exact (up to 18 decimals).
std::optional<BigInt> parse_ether(const std::string& text);

struct ProfitRow {
    int group_id = 0;
    Address address;
    BigInt wei_malicious;
    BigInt wei_plus;  // malicious + attributed suspicious income
};

struct ProfitReport {
    std::vector<ProfitRow> rows;  // (group_id, address) order, zero-profit rows omitted
    BigInt total_malicious_wei;
    BigInt total_plus_wei;
    std::string price_usd_per_eth;

    /// header `group,address,ether_malicious,usd_malicious,ether_plus,usd_plus`
    /// plus a trailing `total` row; amounts with 2 decimals.
    std::string to_csv() const;

    /// Totals from externally supplied rows (column sums, exact Wei).
    static ProfitReport from_rows(std::vector<ProfitRow> rows, std::string price);
};

/// Income of every seed (malicious column) and of the suspicious accounts
/// attributed to their nearest seed (ties: lowest group id, then smallest
/// seed address). Self-transfers never count as income.
ProfitReport estimate_profit(const TaintGraph& graph, const LedgerStore& ledger,
                             const std::string& price_usd_per_eth,
                             const std::map<Address, int>& seed_groups, int threshold = 3);

}  // namespace rpclure::taint
