// Copyright 2026 The rpclure Authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "rpclure/abi.hpp"
#include "rpclure/logrec.hpp"
#include "rpclure/tx.hpp"

namespace rpclure::miner {

enum class TargetKind { DirectTo, EtherBase, TokenTransferTo };

std::string_view to_string(TargetKind kind);

/// An attacker-controlled account pulled out of one captured request.
struct TargetExtraction {
    Address address;
    TargetKind kind = TargetKind::DirectTo;
    size_t record_index = 0;  // evidence: position in the input record list
    std::string method;       // of the evidencing record
    std::optional<Address> token_contract;  // set iff kind == TokenTransferTo
};

struct ExtractionStats {
    size_t unparseable_params = 0;
    size_t decode_failures = 0;
};

/// Destination accounts named directly in request parameters: the `to` of
/// eth_sendTransaction / eth_signTransaction / eth_estimateGas and the
/// address argument of miner_setEtherBase.
std::vector<TargetExtraction> extract_direct_targets(const std::vector<LogRecord>& records,
                                                     ExtractionStats* stats = nullptr);

/// Accounts recovered from eth_sendRawTransaction payloads: the `_to` of an
/// ERC20 transfer call (token thefts) or the plain `to` of a value transfer.
std::vector<TargetExtraction> extract_indirect_targets(const std::vector<LogRecord>& records,
                                                       const abi::SelectorRegistry& registry,
                                                       ExtractionStats* stats = nullptr);

struct GroupingOptions {
    /// Exit-node IPs never create merge edges: a shared exit is not a shared
    /// actor.
    std::unordered_set<std::string> tor_exit_ips;
    /// A constant request id merges addresses only when it occurs this often
    /// and is not a library default (0, 1, null).
    size_t id_min_occurrences = 100;
};

/// One id-value worth of evidence, keyed by the JSON text of the id.
struct AttackerGroup {
    int group_id = 0;
    std::set<Address> addresses;
    std::set<std::string> ips;
    std::vector<nlohmann::json> request_ids;  // qualifying constant ids
    InstantMs first_seen = 0;
    InstantMs last_seen = 0;
    size_t rpc_count = 0;
    int days_active = 0;
    std::vector<size_t> record_indices;  // attributed records, ascending
};

/// Connected components of the merge relation (shared non-Tor IP, shared
/// qualifying id), ordered by earliest first_seen then smallest address,
/// ids assigned from 1. Deterministic and input-order invariant.
std::vector<AttackerGroup> group_attackers(const std::vector<TargetExtraction>& extractions,
                                           const std::vector<LogRecord>& records,
                                           const GroupingOptions& options = {});

nlohmann::json groups_to_json(const std::vector<AttackerGroup>& groups);

enum class Phase { Probe, Prepare, Steal };

std::string_view to_string(Phase phase);

/// Total: every method maps to exactly one phase (unknown methods probe).
Phase classify_phase(const std::string& method);

struct PhaseEvent {
    Phase phase;
    std::string method;
    InstantMs ts;
};

/// Chronological phase timeline of one group's records.
std::vector<PhaseEvent> classify_phases(const std::vector<LogRecord>& group_records);

struct PollingFlag {
    bool detected = false;
    double peak_rate = 0.0;  // Steal-phase requests per second
};

/// Peak Steal-phase rate over sliding 10-second windows.
PollingFlag detect_polling(const std::vector<LogRecord>& group_records,
                           double threshold_rps = 10.0);

struct BruteforceFlag {
    bool detected = false;
    std::vector<std::string> passwords;  // first-seen order, deduplicated
};

/// Dictionary attack against personal_unlockAccount: detected at >= 5
/// distinct passwords thrown at one account.
BruteforceFlag detect_bruteforce(const std::vector<LogRecord>& group_records,
                                 size_t distinct_threshold = 5);

struct ZeroGasEntry {
    DecodedTransaction tx;  // partial for the rpc form (no signature bytes)
    bool from_raw = false;  // true when decoded from eth_sendRawTransaction
    InstantMs ts = 0;
};

/// Transactions priced at zero: decoded raw sends plus eth_sendTransaction
/// calls whose gasPrice parameter is zero.
std::vector<ZeroGasEntry> detect_zero_gas(const std::vector<LogRecord>& records,
                                          ExtractionStats* stats = nullptr);

struct AirdropFlag {
    bool detected = false;
    size_t distinct_senders = 0;
    std::optional<Address> destination;
    size_t recover_failures = 0;
};

/// Mass self-dealing into one collector account: zero-gas ERC20 transfers
/// sharing a single `_to`, counted by distinct recovered senders.
AirdropFlag detect_airdrop_fanin(const std::vector<LogRecord>& records,
                                 const abi::SelectorRegistry& registry,
                                 size_t sender_threshold = 100,
                                 ExtractionStats* stats = nullptr);

struct GasPriceDay {
    std::string date;  // UTC, YYYY-MM-DD
    double mean_gwei = 0.0;
    double ratio = 0.0;  // mean / baseline
    size_t tx_count = 0;
};

struct GasPriceStats {
    double baseline_gwei = 0.0;
    std::vector<GasPriceDay> per_day;  // days without priced transactions omitted
    double min_ratio = 0.0;
    double max_ratio = 0.0;
};

GasPriceStats gas_price_stats(const std::vector<LogRecord>& records, double baseline_gwei);

/// Copies the records attributed to one group, preserving log order.
std::vector<LogRecord> records_of(const std::vector<LogRecord>& records,
                                  const AttackerGroup& group);

/// Per-group behavior summary, rendered into behaviors.json by the CLI.
nlohmann::json behaviors_to_json(const std::vector<AttackerGroup>& groups,
                                 const std::vector<LogRecord>& records,
                                 const abi::SelectorRegistry& registry,
                                 double baseline_gwei = 21.0);

/// One IP per line; '#' comments tolerated.
std::unordered_set<std::string> load_ip_list(std::istream& in);
std::unordered_set<std::string> load_ip_list_file(const std::string& path);

}  // namespace rpclure::miner
