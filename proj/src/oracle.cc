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

#include "fischlin/oracle.h"

#include <openssl/sha.h>

#include "json.hpp"
#include <sstream>

namespace fischlin {

using nlohmann::json;

Bytes encode_input(const FischlinParams &params, const OracleInput &input) {
    if (input.a_vec.size() != params.k) {
        throw std::invalid_argument("commitment vector length does not match k");
    }
    if (input.i < 1 || input.i > params.k) {
        throw std::invalid_argument("repetition index out of range");
    }
    if (input.c >= params.N) {
        throw std::invalid_argument("challenge out of range");
    }
    Bytes out;
    append_tag(out, "FIS1");
    append_u32_be(out, params.k);
    append_u32_be(out, params.l);
    for (const auto &a : input.a_vec) {
        append_len_prefixed(out, a);
    }
    append_u32_be(out, input.i);
    append_u32_be(out, static_cast<uint32_t>(input.c));
    append_len_prefixed(out, input.z);
    return out;
}

OracleInput decode_input(const FischlinParams &params, std::span<const uint8_t> encoded) {
    ByteReader reader(encoded);
    reader.expect_tag("FIS1");
    if (reader.read_u32_be() != params.k || reader.read_u32_be() != params.l) {
        throw DecodeError("hash input was encoded for different (k, l)");
    }
    OracleInput out;
    for (uint32_t j = 0; j < params.k; j++) {
        out.a_vec.push_back(reader.read_len_prefixed());
    }
    out.i = reader.read_u32_be();
    out.c = reader.read_u32_be();
    out.z = reader.read_len_prefixed();
    if (!reader.done()) {
        throw DecodeError("trailing bytes after hash input");
    }
    if (out.i < 1 || out.i > params.k || out.c >= params.N) {
        throw DecodeError("hash input field out of range");
    }
    return out;
}

Bytes sha256(std::span<const uint8_t> data) {
    Bytes out(SHA256_DIGEST_LENGTH);
    SHA256(data.data(), data.size(), out.data());
    return out;
}

uint64_t truncate_bits(std::span<const uint8_t> digest, uint32_t l) {
    if (l < 1 || l > 64) {
        throw std::invalid_argument("l must lie in [1, 64]");
    }
    uint64_t head = 0;
    for (size_t j = 0; j < 8; j++) {
        head = (head << 8) | digest[j];
    }
    return l == 64 ? head : head >> (64 - l);
}

OracleOutput ro_eval(std::span<const uint8_t> seed, const FischlinParams &params, const OracleInput &input) {
    if (params.l < 1 || params.l > 64) {
        throw std::invalid_argument("l must lie in [1, 64]");
    }
    Bytes msg(seed.begin(), seed.end());
    Bytes enc = encode_input(params, input);
    msg.insert(msg.end(), enc.begin(), enc.end());
    return OracleOutput{truncate_bits(sha256(msg), params.l)};
}

const OracleTranscript::Entry *OracleTranscript::find(const Bytes &encoded) const {
    auto it = index_.find(std::string(encoded.begin(), encoded.end()));
    return it == index_.end() ? nullptr : &entries_[it->second];
}

void OracleTranscript::append(Entry entry) {
    std::string key(entry.encoded.begin(), entry.encoded.end());
    if (index_.contains(key)) {
        return;
    }
    index_.emplace(std::move(key), entries_.size());
    entries_.push_back(std::move(entry));
}

std::string OracleTranscript::to_jsonl() const {
    std::ostringstream ss;
    for (const auto &e : entries_) {
        json a = json::array();
        for (const auto &aj : e.input.a_vec) {
            a.push_back(to_hex(aj));
        }
        json rec = {{"a", a}, {"i", e.input.i}, {"c", e.input.c}, {"z", to_hex(e.input.z)}, {"y", e.output.bits}};
        ss << rec.dump() << "\n";
    }
    return ss.str();
}

OracleTranscript OracleTranscript::from_jsonl(const FischlinParams &params, const std::string &text) {
    OracleTranscript out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        try {
            json rec = json::parse(line);
            OracleInput input;
            for (const auto &aj : rec.at("a")) {
                input.a_vec.push_back(from_hex(aj.get<std::string>()));
            }
            input.i = rec.at("i").get<uint32_t>();
            input.c = rec.at("c").get<uint64_t>();
            input.z = from_hex(rec.at("z").get<std::string>());
            OracleOutput output{rec.at("y").get<uint64_t>()};
            Bytes encoded = encode_input(params, input);
            out.append(Entry{std::move(input), output, std::move(encoded)});
        } catch (const json::exception &ex) {
            throw DecodeError(std::string("bad transcript line: ") + ex.what());
        } catch (const std::invalid_argument &ex) {
            throw DecodeError(std::string("bad transcript record: ") + ex.what());
        }
    }
    return out;
}

const OracleOutput *ReprogramTable::lookup(const Bytes &encoded) const {
    auto it = overrides.find(encoded);
    return it == overrides.end() ? nullptr : &it->second.second;
}

std::string ReprogramTable::to_json() const {
    json arr = json::array();
    for (const auto &[enc, entry] : overrides) {
        const auto &[input, output] = entry;
        json a = json::array();
        for (const auto &aj : input.a_vec) {
            a.push_back(to_hex(aj));
        }
        arr.push_back({{"a", a}, {"i", input.i}, {"c", input.c}, {"z", to_hex(input.z)}, {"y", output.bits}});
    }
    return arr.dump();
}

void reprogram(
    ReprogramTable &table,
    const OracleTranscript &transcript,
    const FischlinParams &params,
    const OracleInput &input,
    OracleOutput value) {
    if (params.l < 64 && value.bits >> params.l != 0) {
        throw std::invalid_argument("programmed value exceeds l bits");
    }
    Bytes enc = encode_input(params, input);
    if (transcript.find(enc) != nullptr) {
        throw ReprogramConflict("point was already queried; H is defined there");
    }
    table.overrides[enc] = {input, value};
}

OracleOutput recorded_query(
    OracleTranscript &transcript,
    std::span<const uint8_t> seed,
    const FischlinParams &params,
    const ReprogramTable *table,
    const OracleInput &input) {
    Bytes enc = encode_input(params, input);
    if (const auto *hit = transcript.find(enc)) {
        return hit->output;
    }
    OracleOutput out;
    if (const OracleOutput *over = table ? table->lookup(enc) : nullptr) {
        out = *over;
    } else {
        out = ro_eval(seed, params, input);
    }
    transcript.append(OracleTranscript::Entry{input, out, std::move(enc)});
    return out;
}

RecordingOracle::RecordingOracle(Bytes seed, FischlinParams params) : seed_(std::move(seed)), params_(params) {}

OracleOutput RecordingOracle::query(const OracleInput &input) {
    if (rule_) {
        Bytes enc = encode_input(params_, input);
        if (transcript_.find(enc) == nullptr && table_.lookup(enc) == nullptr) {
            if (auto programmed = rule_(input)) {
                fischlin::reprogram(table_, transcript_, params_, input, *programmed);
            }
        }
    }
    return recorded_query(transcript_, seed_, params_, &table_, input);
}

void RecordingOracle::reprogram(const OracleInput &input, OracleOutput value) {
    fischlin::reprogram(table_, transcript_, params_, input, value);
}

}  // namespace fischlin
