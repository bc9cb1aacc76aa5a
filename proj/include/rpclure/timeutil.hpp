// Copyright 2026 The rpclure Authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace rpclure {

/// Milliseconds since the Unix epoch, UTC.
using InstantMs = int64_t;

InstantMs now_ms();

// "2018-07-01T12:44:09.123Z"
std::string format_iso_ms(InstantMs ms);
std::optional<InstantMs> parse_iso_ms(std::string_view text);

/// Day index since epoch (floor division, handles pre-1970 instants).
int64_t utc_day_index(InstantMs ms);

// "2018-07-01"
std::string format_utc_date(InstantMs ms);

}  // namespace rpclure
