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

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fischlin {

using Bytes = std::vector<uint8_t>;

/// Raised by every decoder in the library on malformed input.
struct DecodeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void append_u16_be(Bytes &out, uint16_t v);
void append_u32_be(Bytes &out, uint32_t v);
void append_tag(Bytes &out, std::string_view ascii);
/// u16-BE length followed by the payload. Payloads longer than 65535 bytes are rejected.
void append_len_prefixed(Bytes &out, std::span<const uint8_t> payload);

std::string to_hex(std::span<const uint8_t> data);
Bytes from_hex(std::string_view hex);

/// Forward-only cursor over an encoded buffer. All reads throw DecodeError on truncation.
class ByteReader {
   public:
    explicit ByteReader(std::span<const uint8_t> data) : data_(data) {}

    uint16_t read_u16_be();
    uint32_t read_u32_be();
    Bytes read_len_prefixed();
    Bytes read_raw(size_t n);
    void expect_tag(std::string_view ascii);

    size_t remaining() const { return data_.size() - pos_; }
    bool done() const { return pos_ == data_.size(); }

   private:
    std::span<const uint8_t> data_;
    size_t pos_ = 0;
};

}  // namespace fischlin
