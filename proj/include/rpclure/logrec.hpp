// Copyright 2026 The rpclure Authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rpclure/policy.hpp"
#include "rpclure/timeutil.hpp"

namespace rpclure {

/// One captured JSON-RPC request with network metadata and the action taken.
struct LogRecord {
    InstantMs ts = 0;
    std::string ip;
    int port = 0;
    std::string method;
    std::string params_raw;   // JSON text; "" when the request carried none
    nlohmann::json request_id;  // the id value exactly as received
    PolicyAction action = PolicyAction::Deny;
    std::string response_summary;

    std::string to_ndjson_line() const;  // one physical line, no trailing \n
    static std::optional<LogRecord> from_json_line(const std::string& line);

    /// Parsed params, or nullopt when absent/unparseable.
    std::optional<nlohmann::json> params() const;
};

/// Append-only NDJSON sink, one serialized writer, flush per record.
/// Construction fails (throws) when the file cannot be opened for append.
class LogSink {
  public:
    explicit LogSink(const std::string& path);

    /// Stamps record.ts (monotone non-decreasing within the file) and writes
    /// one line. Throws on write failure rather than dropping the record.
    void append(LogRecord& record);

    const std::string& path() const { return path_; }

  private:
    std::string path_;
    std::ofstream out_;
    std::mutex mutex_;
    InstantMs last_ts_ = 0;
};

struct LogReadStats {
    size_t parsed = 0;
    size_t malformed = 0;
};

/// Reads every well-formed record; bad lines are counted, never fatal.
std::vector<LogRecord> read_log_file(const std::string& path, LogReadStats* stats = nullptr);
std::vector<LogRecord> read_log_stream(std::istream& in, LogReadStats* stats = nullptr);

}  // namespace rpclure
