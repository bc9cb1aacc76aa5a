// Copyright 2026 The rpclure Authors.
// Licensed under the Apache License, Version 2.0.

#include "rpclure/logrec.hpp"

namespace rpclure {

using nlohmann::json;

std::string LogRecord::to_ndjson_line() const {
    json doc;
    doc["ts"] = format_iso_ms(ts);
    doc["ip"] = ip;
    doc["port"] = port;
    doc["method"] = method;
    doc["params"] = params_raw;
    doc["id"] = request_id;
    doc["action"] = std::string(to_string(action));
    doc["response"] = response_summary;
    return doc.dump();
}

std::optional<LogRecord> LogRecord::from_json_line(const std::string& line) {
    const json doc = json::parse(line, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) return std::nullopt;

    LogRecord rec;
    try {
        auto ts = parse_iso_ms(doc.at("ts").get<std::string>());
        if (!ts) return std::nullopt;
        rec.ts = *ts;
        rec.ip = doc.at("ip").get<std::string>();
        rec.port = doc.at("port").get<int>();
        rec.method = doc.at("method").get<std::string>();
        rec.params_raw = doc.at("params").get<std::string>();
        rec.request_id = doc.at("id");
        const std::string action = doc.at("action").get<std::string>();
        if (action == "forward") rec.action = PolicyAction::Forward;
        else if (action == "emulate") rec.action = PolicyAction::Emulate;
        else if (action == "deny") rec.action = PolicyAction::Deny;
        else return std::nullopt;
        rec.response_summary = doc.at("response").get<std::string>();
    } catch (const json::exception&) {
        return std::nullopt;
    }
    return rec;
}

std::optional<json> LogRecord::params() const {
    if (params_raw.empty()) return std::nullopt;
    json parsed = json::parse(params_raw, nullptr, false);
    if (parsed.is_discarded()) return std::nullopt;
    return parsed;
}

LogSink::LogSink(const std::string& path) : path_(path) {
    out_.open(path, std::ios::app);
    if (!out_) throw std::runtime_error("log: cannot open " + path + " for append");
}

void LogSink::append(LogRecord& record) {
    std::lock_guard lock(mutex_);
    record.ts = std::max(now_ms(), last_ts_);
    last_ts_ = record.ts;
    out_ << record.to_ndjson_line() << '\n';
    out_.flush();
    if (!out_) throw std::runtime_error("log: write to " + path_ + " failed");
}

std::vector<LogRecord> read_log_stream(std::istream& in, LogReadStats* stats) {
    std::vector<LogRecord> records;
    LogReadStats local;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (auto rec = LogRecord::from_json_line(line)) {
            records.push_back(std::move(*rec));
            ++local.parsed;
        } else {
            ++local.malformed;
        }
    }
    if (stats) *stats = local;
    return records;
}

std::vector<LogRecord> read_log_file(const std::string& path, LogReadStats* stats) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("log: cannot open " + path);
    return read_log_stream(in, stats);
}

}  // namespace rpclure
