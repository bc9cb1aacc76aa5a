// Copyright 2026 The rpclure Authors.
// Licensed under the Apache License, Version 2.0.

#include "rpclure/taint.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>

namespace rpclure::taint {

std::string_view to_string(NodeClass cls) {
    switch (cls) {
        case NodeClass::Malicious: return "malicious";
        case NodeClass::Suspicious: return "suspicious";
        case NodeClass::Unknown: return "unknown";
        case NodeClass::Market: return "market";
    }
    return "unknown";
}

std::set<Address> TaintGraph::of_class(NodeClass cls) const {
    std::set<Address> out;
    for (const auto& [addr, node] : nodes)
        if (node.cls == cls) out.insert(addr);
    return out;
}

namespace {

bool traversal_edge(const LedgerTx& tx) {
    return tx.to.has_value() && tx.value > 0 && !(*tx.to == tx.from);
}

struct Propagation {
    const LedgerStore& ledger;
    const std::set<Address>& seeds;
    std::set<Address> markets;  // labeled markets that are not seeds
    int threshold;

    std::map<Address, int> dist;        // min intermediates, seeds = 0
    std::set<Address> reached_markets;  // markets hit by the traversal
    std::map<Address, int> market_depth;

    bool is_seed(const Address& a) const { return seeds.contains(a); }
    bool is_market(const Address& a) const { return markets.contains(a); }

    /// Multi-source BFS assigning every account its minimum intermediate
    /// count. Markets absorb; a minimum-distance path is always simple, so
    /// walk-based distances equal simple-path distances here.
    void bfs() {
        std::deque<Address> queue;
        for (const Address& seed : seeds) {
            dist[seed] = 0;
            queue.push_back(seed);
        }
        while (!queue.empty()) {
            const Address u = queue.front();
            queue.pop_front();
            const int du = dist[u];
            for (const LedgerTx* tx : ledger.outgoing(u)) {
                if (!traversal_edge(*tx)) continue;
                const Address v = *tx->to;
                if (is_market(v)) {
                    reached_markets.insert(v);
                    auto [it, inserted] = market_depth.emplace(v, du + 1);
                    if (!inserted) it->second = std::min(it->second, du + 1);
                    continue;
                }
                const int dv = is_seed(v) ? 0 : du + 1;
                if (dv > threshold) continue;
                auto it = dist.find(v);
                if (it != dist.end() && it->second <= dv) continue;
                dist[v] = dv;
                queue.push_back(v);
            }
        }
    }

    /// Minimum intermediates strictly after a node on any walk to a market
    /// (0 when it pays a market directly). Lower bound for simple paths,
    /// used only to prune the exact search below. Stepping into a seed costs
    /// nothing, so this is a 0-1 shortest path over the reverse graph.
    std::map<Address, int> backward_bound() {
        std::map<Address, int> bound;
        std::map<Address, std::vector<Address>> reverse;  // reached accounts only
        std::deque<Address> queue;
        for (const auto& [u, du] : dist) {
            bool pays_market = false;
            for (const LedgerTx* tx : ledger.outgoing(u)) {
                if (!traversal_edge(*tx)) continue;
                const Address v = *tx->to;
                if (is_market(v)) pays_market = true;
                else if (dist.contains(v)) reverse[v].push_back(u);
            }
            if (pays_market) {
                bound[u] = 0;
                queue.push_back(u);
            }
        }
        while (!queue.empty()) {
            const Address v = queue.front();
            queue.pop_front();
            const int weight = is_seed(v) ? 0 : 1;
            const int step = bound[v] + weight;
            for (const Address& u : reverse[v]) {
                auto it = bound.find(u);
                if (it != bound.end() && it->second <= step) continue;
                bound[u] = step;
                if (weight == 0) queue.push_front(u);
                else queue.push_back(u);
            }
        }
        return bound;
    }

    /// Exact qualification: depth-first enumeration of simple paths with the
    /// walk bound as an admissible prune. Marks every non-seed account on a
    /// seed -> market path with at most `threshold` intermediates.
    std::set<Address> qualify() {
        std::set<Address> suspicious;
        const std::map<Address, int> bound = backward_bound();

        std::set<Address> on_path;
        std::vector<Address> path_intermediates;

        std::function<void(const Address&, int)> walk = [&](const Address& u,
                                                            int intermediates) {
            for (const LedgerTx* tx : ledger.outgoing(u)) {
                if (!traversal_edge(*tx)) continue;
                const Address v = *tx->to;
                if (is_market(v)) {
                    for (const Address& a : path_intermediates) suspicious.insert(a);
                    continue;
                }
                if (on_path.contains(v)) continue;
                const int next = is_seed(v) ? intermediates : intermediates + 1;
                if (next > threshold) continue;
                auto b = bound.find(v);
                if (b == bound.end() || next + b->second > threshold) continue;
                on_path.insert(v);
                if (!is_seed(v)) path_intermediates.push_back(v);
                walk(v, next);
                if (!is_seed(v)) path_intermediates.pop_back();
                on_path.erase(v);
            }
        };

        for (const Address& seed : seeds) {
            on_path.insert(seed);
            walk(seed, 0);
            on_path.erase(seed);
        }
        return suspicious;
    }
};

}  // namespace

TaintGraph trace(const std::set<Address>& seeds, const std::vector<AddressLabel>& labels,
                 const LedgerStore& ledger, int threshold) {
    Propagation prop{ledger, seeds, {}, threshold, {}, {}, {}};
    for (const AddressLabel& label : labels)
        if (label.kind == LabelKind::Market && !seeds.contains(label.address))
            prop.markets.insert(label.address);

    prop.bfs();
    const std::set<Address> suspicious = prop.qualify();

    TaintGraph graph;
    for (const Address& seed : seeds) graph.nodes[seed] = {NodeClass::Malicious, 0};
    for (const auto& [addr, depth] : prop.dist) {
        if (prop.is_seed(addr)) continue;
        graph.nodes[addr] = {suspicious.contains(addr) ? NodeClass::Suspicious
                                                       : NodeClass::Unknown,
                             depth};
    }
    for (const Address& market : prop.reached_markets)
        graph.nodes[market] = {NodeClass::Market, prop.market_depth[market]};

    // Aggregate the traversed edges between final nodes.
    std::map<std::pair<Address, Address>, TaintGraph::Edge> edges;
    for (const auto& [u, du] : prop.dist) {
        for (const LedgerTx* tx : ledger.outgoing(u)) {
            if (!traversal_edge(*tx)) continue;
            const Address v = *tx->to;
            if (!graph.nodes.contains(v)) continue;
            auto& edge = edges[{u, v}];
            edge.from = u;
            edge.to = v;
            edge.total_wei += tx->value;
            ++edge.tx_count;
        }
    }
    for (auto& [key, edge] : edges) graph.edges.push_back(std::move(edge));
    return graph;
}

std::string format_ether_2dp(const BigInt& wei) {
    static const BigInt kCentiEth = BigInt("10000000000000000");  // 1e16
    const BigInt centi = (wei * 2 + kCentiEth) / (2 * kCentiEth);
    std::ostringstream out;
    out << (centi / 100) << '.';
    const int frac = static_cast<int>(centi % 100);
    out << (frac < 10 ? "0" : "") << frac;
    return out.str();
}

std::optional<BigInt> parse_ether(const std::string& text) {
    if (text.empty()) return std::nullopt;
    const size_t dot = text.find('.');
    const std::string whole = dot == std::string::npos ? text : text.substr(0, dot);
    std::string frac = dot == std::string::npos ? "" : text.substr(dot + 1);
    if (frac.size() > 18) return std::nullopt;
    for (const std::string& part : {whole, frac})
        for (char c : part)
            if (c < '0' || c > '9') return std::nullopt;
    frac.resize(18, '0');
    const auto whole_int = whole.empty() ? BigInt(0) : BigInt(whole);
    return whole_int * BigInt("1000000000000000000") + (frac.empty() ? 0 : BigInt(frac));
}

namespace {

/// Decimal price -> integer micro-USD per ETH (price * 1e6), exact.
std::optional<BigInt> parse_price_micro(const std::string& text) {
    if (text.empty()) return std::nullopt;
    const size_t dot = text.find('.');
    const std::string whole = dot == std::string::npos ? text : text.substr(0, dot);
    std::string frac = dot == std::string::npos ? "" : text.substr(dot + 1);
    if (frac.size() > 6) return std::nullopt;
    for (const std::string& part : {whole, frac})
        for (char c : part)
            if (c < '0' || c > '9') return std::nullopt;
    frac.resize(6, '0');
    return (whole.empty() ? BigInt(0) : BigInt(whole)) * 1'000'000 +
           (frac.empty() ? 0 : BigInt(frac));
}

}  // namespace

BigInt usd_cents(const BigInt& wei, const std::string& price_usd_per_eth) {
    const auto micro = parse_price_micro(price_usd_per_eth);
    if (!micro) throw std::invalid_argument("price: not a decimal USD amount");
    // cents = wei * price / 1e18 * 100 = wei * micro / 1e22, rounded half up
    static const BigInt kScale = BigInt("10000000000000000000000");  // 1e22
    return (wei * *micro * 2 + kScale) / (2 * kScale);
}

std::string format_cents(const BigInt& cents) {
    std::ostringstream out;
    out << (cents / 100) << '.';
    const int frac = static_cast<int>(cents % 100);
    out << (frac < 10 ? "0" : "") << frac;
    return out.str();
}

std::string ProfitReport::to_csv() const {
    std::ostringstream out;
    out << "group,address,ether_malicious,usd_malicious,ether_plus,usd_plus\n";
    for (const ProfitRow& row : rows) {
        out << row.group_id << ',' << row.address.to_hex() << ','
            << format_ether_2dp(row.wei_malicious) << ','
            << format_cents(usd_cents(row.wei_malicious, price_usd_per_eth)) << ','
            << format_ether_2dp(row.wei_plus) << ','
            << format_cents(usd_cents(row.wei_plus, price_usd_per_eth)) << '\n';
    }
    out << "total,," << format_ether_2dp(total_malicious_wei) << ','
        << format_cents(usd_cents(total_malicious_wei, price_usd_per_eth)) << ','
        << format_ether_2dp(total_plus_wei) << ','
        << format_cents(usd_cents(total_plus_wei, price_usd_per_eth)) << '\n';
    return out.str();
}

ProfitReport ProfitReport::from_rows(std::vector<ProfitRow> rows, std::string price) {
    ProfitReport report;
    report.price_usd_per_eth = std::move(price);
    std::sort(rows.begin(), rows.end(), [](const ProfitRow& a, const ProfitRow& b) {
        if (a.group_id != b.group_id) return a.group_id < b.group_id;
        return a.address < b.address;
    });
    for (ProfitRow& row : rows) {
        if (row.wei_plus == 0) continue;  // zero-profit rows stay out of the table
        report.total_malicious_wei += row.wei_malicious;
        report.total_plus_wei += row.wei_plus;
        report.rows.push_back(std::move(row));
    }
    return report;
}

ProfitReport estimate_profit(const TaintGraph& graph, const LedgerStore& ledger,
                             const std::string& price_usd_per_eth,
                             const std::map<Address, int>& seed_groups, int threshold) {
    const std::set<Address> seeds = graph.of_class(NodeClass::Malicious);
    const std::set<Address> suspicious = graph.of_class(NodeClass::Suspicious);

    // Nearest-seed attribution needs per-seed distances; rerun the bounded
    // walk from each seed alone.
    struct Attribution {
        int dist = 0;
        int group_id = 0;
        Address seed;
        bool operator<(const Attribution& other) const {
            if (dist != other.dist) return dist < other.dist;
            if (group_id != other.group_id) return group_id < other.group_id;
            return seed < other.seed;
        }
    };
    std::map<Address, Attribution> nearest;

    for (const Address& seed : seeds) {
        // 0-1 BFS: hops into other seeds add no intermediates
        std::map<Address, int> dist{{seed, 0}};
        std::deque<Address> queue{seed};
        while (!queue.empty()) {
            const Address u = queue.front();
            queue.pop_front();
            for (const LedgerTx* tx : ledger.outgoing(u)) {
                if (!traversal_edge(*tx)) continue;
                const Address v = *tx->to;
                auto node = graph.nodes.find(v);
                if (node == graph.nodes.end() || node->second.cls == NodeClass::Market) continue;
                const bool free_hop = seeds.contains(v);
                const int dv = free_hop ? dist[u] : dist[u] + 1;
                if (dv > threshold) continue;
                auto it = dist.find(v);
                if (it != dist.end() && it->second <= dv) continue;
                dist[v] = dv;
                if (free_hop) queue.push_front(v);
                else queue.push_back(v);
            }
        }
        int group_id = 0;
        if (auto it = seed_groups.find(seed); it != seed_groups.end()) group_id = it->second;
        for (const Address& s : suspicious) {
            auto it = dist.find(s);
            if (it == dist.end()) continue;
            const Attribution candidate{it->second, group_id, seed};
            auto existing = nearest.find(s);
            if (existing == nearest.end() || candidate < existing->second)
                nearest[s] = candidate;
        }
    }

    std::map<Address, BigInt> suspicious_income_of_seed;
    for (const auto& [susp, attribution] : nearest)
        suspicious_income_of_seed[attribution.seed] += ledger.incoming_sum_nonself(susp);

    std::vector<ProfitRow> rows;
    for (const Address& seed : seeds) {
        ProfitRow row;
        row.address = seed;
        if (auto it = seed_groups.find(seed); it != seed_groups.end()) row.group_id = it->second;
        row.wei_malicious = ledger.incoming_sum_nonself(seed);
        row.wei_plus = row.wei_malicious + suspicious_income_of_seed[seed];
        rows.push_back(std::move(row));
    }
    return ProfitReport::from_rows(std::move(rows), price_usd_per_eth);
}

std::string export_dot(const TaintGraph& graph) {
    std::ostringstream out;
    out << "digraph taint {\n";
    out << "  rankdir=LR;\n";
    for (const auto& [addr, node] : graph.nodes) {
        out << "  \"" << addr.to_hex() << "\" [";
        switch (node.cls) {
            case NodeClass::Market: out << "shape=house"; break;
            case NodeClass::Malicious: out << "shape=circle"; break;
            case NodeClass::Suspicious: out << "shape=box"; break;
            case NodeClass::Unknown: out << "shape=box, style=filled, fillcolor=gray"; break;
        }
        out << "];\n";
    }
    for (const TaintGraph::Edge& edge : graph.edges) {
        out << "  \"" << edge.from.to_hex() << "\" -> \"" << edge.to.to_hex() << "\" [label=\""
            << format_ether_2dp(edge.total_wei) << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace rpclure::taint
