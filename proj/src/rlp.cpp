// Copyright 2026 The rpclure Authors.
// Licensed under the Apache License, Version 2.0.

#include "rpclure/rlp.hpp"

namespace rpclure::rlp {

namespace {

constexpr int kMaxDepth = 64;

struct Cursor {
    BytesView data;
    size_t pos = 0;

    size_t remaining() const { return data.size() - pos; }
    uint8_t peek() const { return data[pos]; }
    uint8_t take() { return data[pos++]; }

    BytesView take_span(size_t n) {
        BytesView out = data.subspan(pos, n);
        pos += n;
        return out;
    }
};

size_t read_long_length(Cursor& cur, size_t len_of_len) {
    if (cur.remaining() < len_of_len)
        throw Error(ErrorKind::Truncated, "rlp: truncated length prefix");
    if (cur.peek() == 0x00)
        throw Error(ErrorKind::NonCanonical, "rlp: length has leading zero byte");
    if (len_of_len > sizeof(size_t))
        throw Error(ErrorKind::Truncated, "rlp: length wider than addressable memory");
    size_t len = 0;
    for (size_t i = 0; i < len_of_len; ++i) len = (len << 8) | cur.take();
    if (len <= 55) throw Error(ErrorKind::NonCanonical, "rlp: long form used for short payload");
    return len;
}

Item decode_item(Cursor& cur, int depth) {
    if (depth > kMaxDepth) throw Error(ErrorKind::TooDeep, "rlp: nesting too deep");
    if (cur.remaining() == 0) throw Error(ErrorKind::Truncated, "rlp: empty input");

    const uint8_t tag = cur.take();
    if (tag <= 0x7f) return Item(Bytes{tag});

    if (tag <= 0xb7) {  // short string
        const size_t len = tag - 0x80;
        if (cur.remaining() < len) throw Error(ErrorKind::Truncated, "rlp: truncated string");
        BytesView payload = cur.take_span(len);
        if (len == 1 && payload[0] <= 0x7f)
            throw Error(ErrorKind::NonCanonical, "rlp: single byte below 0x80 must be itself");
        return Item(Bytes(payload.begin(), payload.end()));
    }

    if (tag <= 0xbf) {  // long string
        const size_t len = read_long_length(cur, tag - 0xb7);
        if (cur.remaining() < len) throw Error(ErrorKind::Truncated, "rlp: truncated string");
        BytesView payload = cur.take_span(len);
        return Item(Bytes(payload.begin(), payload.end()));
    }

    // list
    size_t len;
    if (tag <= 0xf7) {
        len = tag - 0xc0;
    } else {
        len = read_long_length(cur, tag - 0xf7);
    }
    if (cur.remaining() < len) throw Error(ErrorKind::Truncated, "rlp: truncated list");
    const size_t end = cur.pos + len;
    List children;
    while (cur.pos < end) {
        children.push_back(decode_item(cur, depth + 1));
        if (cur.pos > end) throw Error(ErrorKind::Truncated, "rlp: child overruns list payload");
    }
    return Item(std::move(children));
}

void append_length(Bytes& out, size_t len, uint8_t short_base, uint8_t long_base) {
    if (len <= 55) {
        out.push_back(static_cast<uint8_t>(short_base + len));
        return;
    }
    Bytes len_bytes;
    for (size_t v = len; v > 0; v >>= 8) len_bytes.insert(len_bytes.begin(), v & 0xff);
    out.push_back(static_cast<uint8_t>(long_base + len_bytes.size()));
    out.insert(out.end(), len_bytes.begin(), len_bytes.end());
}

}  // namespace

Item decode(BytesView input) {
    Cursor cur{input};
    Item item = decode_item(cur, 0);
    if (cur.pos != input.size())
        throw Error(ErrorKind::Trailing, "rlp: trailing bytes after top-level item");
    return item;
}

Bytes encode_bytes(BytesView payload) {
    if (payload.size() == 1 && payload[0] <= 0x7f) return Bytes{payload[0]};
    Bytes out;
    append_length(out, payload.size(), 0x80, 0xb7);
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

Bytes encode_list(const std::vector<Bytes>& encoded_children) {
    size_t payload_len = 0;
    for (const auto& child : encoded_children) payload_len += child.size();
    Bytes out;
    append_length(out, payload_len, 0xc0, 0xf7);
    for (const auto& child : encoded_children) out.insert(out.end(), child.begin(), child.end());
    return out;
}

Bytes encode(const Item& item) {
    if (item.is_bytes()) return encode_bytes(item.as_bytes());
    std::vector<Bytes> children;
    children.reserve(item.as_list().size());
    for (const auto& child : item.as_list()) children.push_back(encode(child));
    return encode_list(children);
}

Bytes encode_integer(const BigInt& value) { return encode_bytes(bigint_to_bytes(value)); }

}  // namespace rpclure::rlp
