// Copyright 2026 The Fischlin-QROM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fischlin/bytes.h"

#include <algorithm>

namespace fischlin {

void append_u16_be(Bytes &out, uint16_t v) {
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v));
}

void append_u32_be(Bytes &out, uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) {
        out.push_back(static_cast<uint8_t>(v >> shift));
    }
}

void append_tag(Bytes &out, std::string_view ascii) {
    out.insert(out.end(), ascii.begin(), ascii.end());
}

void append_len_prefixed(Bytes &out, std::span<const uint8_t> payload) {
    if (payload.size() > 0xFFFF) {
        throw std::invalid_argument("payload too long for a 2-byte length prefix");
    }
    append_u16_be(out, static_cast<uint16_t>(payload.size()));
    out.insert(out.end(), payload.begin(), payload.end());
}

std::string to_hex(std::span<const uint8_t> data) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string s;
    s.reserve(data.size() * 2);
    for (uint8_t b : data) {
        s.push_back(kDigits[b >> 4]);
        s.push_back(kDigits[b & 0xF]);
    }
    return s;
}

namespace {
int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}
}  // namespace

Bytes from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) {
        throw DecodeError("hex string has odd length");
    }
    Bytes out;
    out.reserve(hex.size() / 2);
    for (size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_value(hex[i]);
        int lo = hex_value(hex[i + 1]);
        if (hi < 0 || lo < 0) {
            throw DecodeError("invalid hex digit");
        }
        out.push_back(static_cast<uint8_t>((hi << 4) | lo));
    }
    return out;
}

uint16_t ByteReader::read_u16_be() {
    auto b = read_raw(2);
    return static_cast<uint16_t>((b[0] << 8) | b[1]);
}

uint32_t ByteReader::read_u32_be() {
    auto b = read_raw(4);
    return (uint32_t{b[0]} << 24) | (uint32_t{b[1]} << 16) | (uint32_t{b[2]} << 8) | uint32_t{b[3]};
}

Bytes ByteReader::read_len_prefixed() {
    uint16_t n = read_u16_be();
    return read_raw(n);
}

Bytes ByteReader::read_raw(size_t n) {
    if (remaining() < n) {
        throw DecodeError("truncated buffer");
    }
    Bytes out(data_.begin() + pos_, data_.begin() + pos_ + n);
    pos_ += n;
    return out;
}

void ByteReader::expect_tag(std::string_view ascii) {
    auto b = read_raw(ascii.size());
    if (!std::equal(b.begin(), b.end(), ascii.begin())) {
        throw DecodeError("bad magic: expected '" + std::string(ascii) + "'");
    }
}

}  // namespace fischlin
