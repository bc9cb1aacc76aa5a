// Copyright 2026 The rpclure Authors.
// Licensed under the Apache License, Version 2.0.

#include "rpclure/miner.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "rpclure/secp256k1.hpp"
#include "rpclure/timeutil.hpp"
#include "rpclure/union_find.hpp"

namespace rpclure::miner {

using nlohmann::json;

std::string_view to_string(TargetKind kind) {
    switch (kind) {
        case TargetKind::DirectTo: return "direct_to";
        case TargetKind::EtherBase: return "etherbase";
        case TargetKind::TokenTransferTo: return "token_transfer_to";
    }
    return "direct_to";
}

std::string_view to_string(Phase phase) {
    switch (phase) {
        case Phase::Probe: return "probe";
        case Phase::Prepare: return "prepare";
        case Phase::Steal: return "steal";
    }
    return "probe";
}

namespace {

std::optional<Address> address_from_json(const json& value) {
    if (!value.is_string()) return std::nullopt;
    return Address::from_hex(value.get<std::string>());
}

/// params[0] when params is a non-empty array.
const json* first_param(const json& params) {
    if (!params.is_array() || params.empty()) return nullptr;
    return &params[0];
}

std::optional<BigInt> quantity_field(const json& obj, const char* key) {
    if (!obj.is_object() || !obj.contains(key)) return std::nullopt;
    const json& v = obj[key];
    if (v.is_string()) return parse_quantity(v.get<std::string>());
    if (v.is_number_unsigned()) return BigInt(v.get<uint64_t>());
    if (v.is_number_integer() && v.get<int64_t>() >= 0) return BigInt(v.get<int64_t>());
    return std::nullopt;
}

std::optional<DecodedTransaction> decode_raw_param(const LogRecord& rec) {
    const auto params = rec.params();
    if (!params) return std::nullopt;
    const json* raw_hex = first_param(*params);
    if (!raw_hex || !raw_hex->is_string()) return std::nullopt;
    const auto raw = from_hex(raw_hex->get<std::string>());
    if (!raw) return std::nullopt;
    try {
        return decode_legacy_tx(*raw);
    } catch (const TxError&) {
        return std::nullopt;
    }
}

}  // namespace

std::vector<TargetExtraction> extract_direct_targets(const std::vector<LogRecord>& records,
                                                     ExtractionStats* stats) {
    std::vector<TargetExtraction> out;
    ExtractionStats local;

    for (size_t i = 0; i < records.size(); ++i) {
        const LogRecord& rec = records[i];
        const bool to_bearing = rec.method == "eth_sendTransaction" ||
                                rec.method == "eth_signTransaction" ||
                                rec.method == "eth_estimateGas";
        const bool etherbase = rec.method == "miner_setEtherBase";
        if (!to_bearing && !etherbase) continue;

        const auto params = rec.params();
        if (!params) {
            ++local.unparseable_params;
            continue;
        }
        const json* first = first_param(*params);
        if (!first) {
            ++local.unparseable_params;
            continue;
        }

        if (etherbase) {
            if (auto addr = address_from_json(*first)) {
                out.push_back({*addr, TargetKind::EtherBase, i, rec.method, std::nullopt});
            } else {
                ++local.unparseable_params;
            }
            continue;
        }

        if (!first->is_object()) {
            ++local.unparseable_params;
            continue;
        }
        if (!first->contains("to")) continue;  // creation or estimate without target
        if (auto addr = address_from_json((*first)["to"])) {
            out.push_back({*addr, TargetKind::DirectTo, i, rec.method, std::nullopt});
        } else {
            ++local.unparseable_params;
        }
    }
    if (stats) *stats = local;
    return out;
}

std::vector<TargetExtraction> extract_indirect_targets(const std::vector<LogRecord>& records,
                                                       const abi::SelectorRegistry& registry,
                                                       ExtractionStats* stats) {
    std::vector<TargetExtraction> out;
    ExtractionStats local;

    for (size_t i = 0; i < records.size(); ++i) {
        const LogRecord& rec = records[i];
        if (rec.method != "eth_sendRawTransaction") continue;

        const auto tx = decode_raw_param(rec);
        if (!tx) {
            ++local.decode_failures;
            continue;
        }

        try {
            const abi::DecodedCall call = abi::decode_call_data(tx->data, registry);
            if (call.is_erc20_transfer()) {
                if (!tx->to) {
                    ++local.decode_failures;  // transfer() call with no contract address
                    continue;
                }
                out.push_back({std::get<Address>(call.args[0].value),
                               TargetKind::TokenTransferTo, i, rec.method, tx->to});
            } else if (call.kind == abi::DecodedCall::Kind::PlainTransfer && tx->to) {
                out.push_back({*tx->to, TargetKind::DirectTo, i, rec.method, std::nullopt});
            }
            // other calls name no beneficiary account; nothing to extract
        } catch (const abi::MalformedCall&) {
            ++local.decode_failures;
        }
    }
    if (stats) *stats = local;
    return out;
}

namespace {

bool trivial_id(const json& id) {
    return id.is_null() || (id.is_number_integer() && (id == 0 || id == 1)) ||
           (id.is_number_unsigned() && (id == 0 || id == 1));
}

}  // namespace

std::vector<AttackerGroup> group_attackers(const std::vector<TargetExtraction>& extractions,
                                           const std::vector<LogRecord>& records,
                                           const GroupingOptions& options) {
    // Deterministic address universe.
    std::vector<Address> universe;
    for (const auto& ex : extractions) universe.push_back(ex.address);
    std::sort(universe.begin(), universe.end());
    universe.erase(std::unique(universe.begin(), universe.end()), universe.end());
    if (universe.empty()) return {};

    std::map<Address, size_t> index_of;
    for (size_t i = 0; i < universe.size(); ++i) index_of[universe[i]] = i;

    // Merge evidence per IP and per qualifying constant id.
    std::map<std::string, std::set<size_t>> by_ip;       // non-Tor IPs only
    std::map<std::string, std::set<size_t>> by_id;       // id JSON text -> addresses
    std::map<std::string, size_t> id_occurrences;        // over all records
    std::map<std::string, json> id_values;

    for (const LogRecord& rec : records) {
        if (trivial_id(rec.request_id)) continue;
        const std::string key = rec.request_id.dump();
        ++id_occurrences[key];
        id_values.emplace(key, rec.request_id);
    }

    for (const auto& ex : extractions) {
        const LogRecord& rec = records[ex.record_index];
        const size_t addr = index_of[ex.address];
        if (!options.tor_exit_ips.contains(rec.ip)) by_ip[rec.ip].insert(addr);
        if (!trivial_id(rec.request_id)) by_id[rec.request_id.dump()].insert(addr);
    }

    UnionFind sets(universe.size());
    for (const auto& [ip, addrs] : by_ip)
        for (auto it = addrs.begin(); it != addrs.end(); ++it)
            sets.merge(*addrs.begin(), *it);
    for (const auto& [id_key, addrs] : by_id) {
        if (id_occurrences[id_key] < options.id_min_occurrences) continue;
        for (auto it = addrs.begin(); it != addrs.end(); ++it)
            sets.merge(*addrs.begin(), *it);
    }

    // Component -> attribution keys.
    std::map<size_t, AttackerGroup> components;
    for (size_t i = 0; i < universe.size(); ++i)
        components[sets.find(i)].addresses.insert(universe[i]);

    std::map<std::string, size_t> ip_component;  // non-Tor extraction IPs
    std::map<std::string, size_t> id_component;  // qualifying ids
    for (const auto& [ip, addrs] : by_ip) ip_component[ip] = sets.find(*addrs.begin());
    for (const auto& [id_key, addrs] : by_id)
        if (id_occurrences[id_key] >= options.id_min_occurrences)
            id_component[id_key] = sets.find(*addrs.begin());

    std::map<size_t, size_t> extraction_component;  // record index -> component
    for (const auto& ex : extractions)
        extraction_component[ex.record_index] = sets.find(index_of[ex.address]);

    // Attribute every record we can tie to a component.
    std::map<size_t, std::set<int64_t>> days;
    std::map<size_t, std::set<std::string>> group_ids_seen;
    for (size_t i = 0; i < records.size(); ++i) {
        const LogRecord& rec = records[i];
        const size_t* component = nullptr;
        if (auto it = extraction_component.find(i); it != extraction_component.end()) {
            component = &it->second;
        } else if (auto ip_it = ip_component.find(rec.ip);
                   ip_it != ip_component.end() && !options.tor_exit_ips.contains(rec.ip)) {
            component = &ip_it->second;
        } else if (!trivial_id(rec.request_id)) {
            if (auto id_it = id_component.find(rec.request_id.dump());
                id_it != id_component.end())
                component = &id_it->second;
        }
        if (!component) continue;

        AttackerGroup& group = components[*component];
        group.record_indices.push_back(i);
        group.ips.insert(rec.ip);
        if (group.rpc_count == 0) {
            group.first_seen = rec.ts;
            group.last_seen = rec.ts;
        } else {
            group.first_seen = std::min(group.first_seen, rec.ts);
            group.last_seen = std::max(group.last_seen, rec.ts);
        }
        ++group.rpc_count;
        days[*component].insert(utc_day_index(rec.ts));
        if (!trivial_id(rec.request_id)) {
            const std::string key = rec.request_id.dump();
            if (id_component.count(key)) group_ids_seen[*component].insert(key);
        }
    }

    std::vector<AttackerGroup> groups;
    for (auto& [component, group] : components) {
        group.days_active = static_cast<int>(days[component].size());
        for (const std::string& key : group_ids_seen[component])
            group.request_ids.push_back(id_values.at(key));
        groups.push_back(std::move(group));
    }

    std::sort(groups.begin(), groups.end(), [](const AttackerGroup& a, const AttackerGroup& b) {
        if (a.first_seen != b.first_seen) return a.first_seen < b.first_seen;
        return *a.addresses.begin() < *b.addresses.begin();
    });
    for (size_t i = 0; i < groups.size(); ++i) groups[i].group_id = static_cast<int>(i + 1);
    return groups;
}

json groups_to_json(const std::vector<AttackerGroup>& groups) {
    json out = json::array();
    for (const AttackerGroup& group : groups) {
        json g;
        g["group_id"] = group.group_id;
        g["addresses"] = json::array();
        for (const Address& addr : group.addresses) g["addresses"].push_back(addr.to_hex());
        g["ips"] = json::array();
        for (const std::string& ip : group.ips) g["ips"].push_back(ip);
        g["request_ids"] = group.request_ids;
        g["first_seen"] = format_iso_ms(group.first_seen);
        g["last_seen"] = format_iso_ms(group.last_seen);
        g["rpc_count"] = group.rpc_count;
        g["days_active"] = group.days_active;
        out.push_back(std::move(g));
    }
    return out;
}

Phase classify_phase(const std::string& method) {
    static const std::map<std::string, Phase> table = {
        {"net_version", Phase::Probe},
        {"rpc_modules", Phase::Probe},
        {"web3_clientVersion", Phase::Probe},
        {"eth_getBlockByNumber", Phase::Probe},
        {"eth_blockNumber", Phase::Probe},
        {"eth_getBlockByHash", Phase::Probe},
        {"eth_accounts", Phase::Prepare},
        {"eth_coinbase", Phase::Prepare},
        {"personal_listAccounts", Phase::Prepare},
        {"personal_listWallets", Phase::Prepare},
        {"eth_gasPrice", Phase::Prepare},
        {"eth_getBalance", Phase::Prepare},
        {"eth_getTransactionCount", Phase::Prepare},
        {"eth_sendTransaction", Phase::Steal},
        {"eth_signTransaction", Phase::Steal},
        {"eth_sendRawTransaction", Phase::Steal},
        {"personal_unlockAccount", Phase::Steal},
        {"miner_setEtherBase", Phase::Steal},
        {"eth_estimateGas", Phase::Steal},
    };
    auto it = table.find(method);
    return it == table.end() ? Phase::Probe : it->second;
}

std::vector<PhaseEvent> classify_phases(const std::vector<LogRecord>& group_records) {
    std::vector<PhaseEvent> events;
    events.reserve(group_records.size());
    for (const LogRecord& rec : group_records)
        events.push_back({classify_phase(rec.method), rec.method, rec.ts});
    std::sort(events.begin(), events.end(), [](const PhaseEvent& a, const PhaseEvent& b) {
        if (a.ts != b.ts) return a.ts < b.ts;
        return a.method < b.method;
    });
    return events;
}

PollingFlag detect_polling(const std::vector<LogRecord>& group_records, double threshold_rps) {
    std::vector<InstantMs> steal_ts;
    for (const LogRecord& rec : group_records)
        if (classify_phase(rec.method) == Phase::Steal) steal_ts.push_back(rec.ts);
    std::sort(steal_ts.begin(), steal_ts.end());

    PollingFlag flag;
    constexpr InstantMs kWindowMs = 10'000;
    size_t right = 0;
    for (size_t left = 0; left < steal_ts.size(); ++left) {
        if (right < left) right = left;
        while (right < steal_ts.size() && steal_ts[right] < steal_ts[left] + kWindowMs) ++right;
        flag.peak_rate = std::max(flag.peak_rate, static_cast<double>(right - left) / 10.0);
    }
    flag.detected = flag.peak_rate >= threshold_rps;
    return flag;
}

BruteforceFlag detect_bruteforce(const std::vector<LogRecord>& group_records,
                                 size_t distinct_threshold) {
    struct Attempt {
        InstantMs ts;
        std::string account;
        std::string password;
    };
    std::vector<Attempt> attempts;
    for (const LogRecord& rec : group_records) {
        if (rec.method != "personal_unlockAccount") continue;
        const auto params = rec.params();
        if (!params || !params->is_array() || params->size() < 2 || !(*params)[1].is_string())
            continue;
        std::string account =
            (*params)[0].is_string() ? (*params)[0].get<std::string>() : std::string();
        for (char& c : account) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        attempts.push_back({rec.ts, std::move(account), (*params)[1].get<std::string>()});
    }
    std::sort(attempts.begin(), attempts.end(), [](const Attempt& a, const Attempt& b) {
        if (a.ts != b.ts) return a.ts < b.ts;
        if (a.account != b.account) return a.account < b.account;
        return a.password < b.password;
    });

    BruteforceFlag flag;
    std::map<std::string, std::set<std::string>> per_account;
    std::set<std::string> seen;
    for (const Attempt& attempt : attempts) {
        per_account[attempt.account].insert(attempt.password);
        if (seen.insert(attempt.password).second) flag.passwords.push_back(attempt.password);
    }
    for (const auto& [account, passwords] : per_account)
        if (passwords.size() >= distinct_threshold) flag.detected = true;
    return flag;
}

std::vector<ZeroGasEntry> detect_zero_gas(const std::vector<LogRecord>& records,
                                          ExtractionStats* stats) {
    std::vector<ZeroGasEntry> out;
    ExtractionStats local;

    for (const LogRecord& rec : records) {
        if (rec.method == "eth_sendRawTransaction") {
            const auto tx = decode_raw_param(rec);
            if (!tx) {
                ++local.decode_failures;
                continue;
            }
            if (tx->gas_price == 0) out.push_back({*tx, true, rec.ts});
        } else if (rec.method == "eth_sendTransaction") {
            const auto params = rec.params();
            if (!params) continue;
            const json* first = first_param(*params);
            if (!first || !first->is_object()) continue;
            const auto gas_price = quantity_field(*first, "gasPrice");
            if (!gas_price || *gas_price != 0) continue;

            DecodedTransaction tx;  // best-effort view of the rpc parameters
            tx.gas_price = 0;
            if (first->contains("to"))
                if (auto to = address_from_json((*first)["to"])) tx.to = *to;
            if (auto value = quantity_field(*first, "value")) tx.value = *value;
            if (auto gas = quantity_field(*first, "gas"); gas && fits_u64(*gas))
                tx.gas_limit = to_u64(*gas);
            if (auto nonce = quantity_field(*first, "nonce"); nonce && fits_u64(*nonce))
                tx.nonce = to_u64(*nonce);
            out.push_back({std::move(tx), false, rec.ts});
        }
    }
    if (stats) *stats = local;
    return out;
}

AirdropFlag detect_airdrop_fanin(const std::vector<LogRecord>& records,
                                 const abi::SelectorRegistry& registry, size_t sender_threshold,
                                 ExtractionStats* stats) {
    AirdropFlag flag;
    ExtractionStats local;

    std::map<Address, std::set<Address>> senders_by_destination;
    for (const LogRecord& rec : records) {
        if (rec.method != "eth_sendRawTransaction") continue;
        const auto tx = decode_raw_param(rec);
        if (!tx) {
            ++local.decode_failures;
            continue;
        }
        if (tx->gas_price != 0) continue;
        try {
            const abi::DecodedCall call = abi::decode_call_data(tx->data, registry);
            if (!call.is_erc20_transfer()) continue;  // fan-in is a token-transfer pattern
            const Address destination = std::get<Address>(call.args[0].value);
            DecodedTransaction mutable_tx = *tx;
            const Address sender = recover_sender(mutable_tx);
            senders_by_destination[destination].insert(sender);
        } catch (const abi::MalformedCall&) {
            ++local.decode_failures;
        } catch (const RecoveryError&) {
            ++flag.recover_failures;
        }
    }

    for (const auto& [destination, senders] : senders_by_destination) {
        if (senders.size() > flag.distinct_senders) {
            flag.distinct_senders = senders.size();
            flag.destination = destination;
        }
    }
    flag.detected = flag.distinct_senders >= sender_threshold;
    if (stats) *stats = local;
    return flag;
}

GasPriceStats gas_price_stats(const std::vector<LogRecord>& records, double baseline_gwei) {
    GasPriceStats stats;
    stats.baseline_gwei = baseline_gwei;

    struct DayAccumulator {
        double sum_gwei = 0.0;
        size_t count = 0;
    };
    std::map<std::string, DayAccumulator> days;

    for (const LogRecord& rec : records) {
        std::optional<BigInt> price_wei;
        if (rec.method == "eth_sendTransaction" || rec.method == "eth_signTransaction" ||
            rec.method == "eth_estimateGas") {
            const auto params = rec.params();
            if (!params) continue;
            const json* first = first_param(*params);
            if (!first) continue;
            price_wei = quantity_field(*first, "gasPrice");
        } else if (rec.method == "eth_sendRawTransaction") {
            if (const auto tx = decode_raw_param(rec)) price_wei = tx->gas_price;
        }
        if (!price_wei) continue;
        auto& day = days[format_utc_date(rec.ts)];
        day.sum_gwei += static_cast<double>(*price_wei) / 1e9;
        ++day.count;
    }

    for (const auto& [date, acc] : days) {
        GasPriceDay day;
        day.date = date;
        day.tx_count = acc.count;
        day.mean_gwei = acc.sum_gwei / static_cast<double>(acc.count);
        day.ratio = baseline_gwei > 0 ? day.mean_gwei / baseline_gwei : 0.0;
        stats.per_day.push_back(std::move(day));
    }
    if (!stats.per_day.empty()) {
        stats.min_ratio = stats.per_day[0].ratio;
        stats.max_ratio = stats.per_day[0].ratio;
        for (const GasPriceDay& day : stats.per_day) {
            stats.min_ratio = std::min(stats.min_ratio, day.ratio);
            stats.max_ratio = std::max(stats.max_ratio, day.ratio);
        }
    }
    return stats;
}

std::vector<LogRecord> records_of(const std::vector<LogRecord>& records,
                                  const AttackerGroup& group) {
    std::vector<LogRecord> out;
    out.reserve(group.record_indices.size());
    for (size_t index : group.record_indices) out.push_back(records[index]);
    return out;
}

json behaviors_to_json(const std::vector<AttackerGroup>& groups,
                       const std::vector<LogRecord>& records,
                       const abi::SelectorRegistry& registry, double baseline_gwei) {
    json out = json::array();
    for (const AttackerGroup& group : groups) {
        const std::vector<LogRecord> mine = records_of(records, group);
        const PollingFlag polling = detect_polling(mine);
        const BruteforceFlag bruteforce = detect_bruteforce(mine);
        ExtractionStats zero_gas_stats;
        const auto zero_gas = detect_zero_gas(mine, &zero_gas_stats);
        const AirdropFlag airdrop = detect_airdrop_fanin(mine, registry);
        const GasPriceStats gas = gas_price_stats(mine, baseline_gwei);

        json g;
        g["group_id"] = group.group_id;
        g["polling"] = {{"detected", polling.detected}, {"peak_rate", polling.peak_rate}};
        g["bruteforce"] = {{"detected", bruteforce.detected},
                           {"passwords", bruteforce.passwords}};
        json zg = json::array();
        for (const ZeroGasEntry& entry : zero_gas) {
            json e;
            e["from_raw"] = entry.from_raw;
            e["to"] = entry.tx.to ? json(entry.tx.to->to_hex()) : json(nullptr);
            e["value"] = entry.tx.value.str();
            e["ts"] = format_iso_ms(entry.ts);
            zg.push_back(std::move(e));
        }
        g["zero_gas"] = {{"count", zero_gas.size()}, {"transactions", std::move(zg)}};
        g["airdrop_fanin"] = {
            {"detected", airdrop.detected},
            {"distinct_senders", airdrop.distinct_senders},
            {"destination",
             airdrop.destination ? json(airdrop.destination->to_hex()) : json(nullptr)},
            {"recover_failures", airdrop.recover_failures}};
        json days = json::array();
        for (const GasPriceDay& day : gas.per_day)
            days.push_back({{"date", day.date},
                            {"mean_gwei", day.mean_gwei},
                            {"ratio", day.ratio},
                            {"tx_count", day.tx_count}});
        g["gas_price"] = {{"baseline_gwei", gas.baseline_gwei},
                          {"per_day", std::move(days)},
                          {"min_ratio", gas.min_ratio},
                          {"max_ratio", gas.max_ratio}};
        out.push_back(std::move(g));
    }
    return out;
}

std::unordered_set<std::string> load_ip_list(std::istream& in) {
    std::unordered_set<std::string> ips;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        const size_t end = line.find_last_not_of(" \t");
        line = line.substr(start, end - start + 1);
        if (line.empty() || line[0] == '#') continue;
        ips.insert(line);
    }
    return ips;
}

std::unordered_set<std::string> load_ip_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("ip list: cannot open " + path);
    return load_ip_list(in);
}

}  // namespace rpclure::miner
