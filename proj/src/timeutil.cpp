// Copyright 2026 The rpclure Authors.
// Licensed under the Apache License, Version 2.0.

#include "rpclure/timeutil.hpp"

#include <chrono>
#include <cstdio>

namespace rpclure {

namespace {

constexpr int64_t kMsPerDay = 86'400'000;

// Days since epoch -> (y, m, d). Civil-from-days, Gregorian proleptic.
void civil_from_days(int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int64_t yy = static_cast<int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
    y = static_cast<int>(yy + (m <= 2));
}

int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m > 2 ? m - 3 : m + 9) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<int64_t>(doe) - 719468;
}

}  // namespace

InstantMs now_ms() {
    using namespace std::chrono;
    return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

int64_t utc_day_index(InstantMs ms) {
    return ms >= 0 ? ms / kMsPerDay : (ms - kMsPerDay + 1) / kMsPerDay;
}

std::string format_iso_ms(InstantMs ms) {
    const int64_t day = utc_day_index(ms);
    int64_t rem = ms - day * kMsPerDay;
    int y, mo, d;
    civil_from_days(day, y, mo, d);
    const int msec = static_cast<int>(rem % 1000);
    rem /= 1000;
    const int sec = static_cast<int>(rem % 60);
    rem /= 60;
    const int min = static_cast<int>(rem % 60);
    const int hour = static_cast<int>(rem / 60);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", y, mo, d, hour, min,
                  sec, msec);
    return buf;
}

std::string format_utc_date(InstantMs ms) {
    int y, mo, d;
    civil_from_days(utc_day_index(ms), y, mo, d);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, mo, d);
    return buf;
}

std::optional<InstantMs> parse_iso_ms(std::string_view text) {
    // Fixed layouts: YYYY-MM-DDTHH:MM:SS[.mmm]Z
    auto digit = [&](size_t i) -> int {
        if (i >= text.size() || text[i] < '0' || text[i] > '9') return -1;
        return text[i] - '0';
    };
    auto num = [&](size_t i, int n) -> int {
        int v = 0;
        for (int k = 0; k < n; ++k) {
            int d = digit(i + k);
            if (d < 0) return -1;
            v = v * 10 + d;
        }
        return v;
    };
    if (text.size() < 20) return std::nullopt;
    const int y = num(0, 4), mo = num(5, 2), d = num(8, 2);
    const int h = num(11, 2), mi = num(14, 2), s = num(17, 2);
    if (y < 0 || mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi < 0 || mi > 59 ||
        s < 0 || s > 60)
        return std::nullopt;
    if (text[4] != '-' || text[7] != '-' || text[10] != 'T' || text[13] != ':' || text[16] != ':')
        return std::nullopt;
    int msec = 0;
    size_t pos = 19;
    if (text[pos] == '.') {
        msec = num(pos + 1, 3);
        if (msec < 0) return std::nullopt;
        pos += 4;
    }
    if (pos >= text.size() || text[pos] != 'Z' || pos + 1 != text.size()) return std::nullopt;
    const int64_t day = days_from_civil(y, mo, d);
    return ((day * 24 + h) * 60 + mi) * 60'000 + s * 1000 + msec;
}

}  // namespace rpclure
