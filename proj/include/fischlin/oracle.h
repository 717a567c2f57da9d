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

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "fischlin/bytes.h"
#include "fischlin/params.h"

namespace fischlin {

/// Structured hash input (a_vec, i, c, z). Repetition index i is 1-based.
struct OracleInput {
    std::vector<Bytes> a_vec;
    uint32_t i = 0;
    uint64_t c = 0;
    Bytes z;

    bool operator==(const OracleInput &) const = default;
};

/// An l-bit oracle answer kept in the low bits.
struct OracleOutput {
    uint64_t bits = 0;

    bool is_zero() const { return bits == 0; }
    bool operator==(const OracleOutput &) const = default;
};

/// "FIS1" || u32 k || u32 l || k x (u16-len || a_j) || u32 i || u32 c || u16-len || z.
/// Throws std::invalid_argument when the input does not fit the parameters.
Bytes encode_input(const FischlinParams &params, const OracleInput &input);
OracleInput decode_input(const FischlinParams &params, std::span<const uint8_t> encoded);

/// Leading l bits (big-endian) of SHA-256(seed || encode_input(params, input)).
OracleOutput ro_eval(std::span<const uint8_t> seed, const FischlinParams &params, const OracleInput &input);

/// Leading l bits of a digest, big-endian bit order.
uint64_t truncate_bits(std::span<const uint8_t> digest, uint32_t l);

Bytes sha256(std::span<const uint8_t> data);

struct ReprogramConflict : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Ordered query log with first-answer-wins lookup.
class OracleTranscript {
   public:
    struct Entry {
        OracleInput input;
        OracleOutput output;
        Bytes encoded;
    };

    const Entry *find(const Bytes &encoded) const;
    void append(Entry entry);

    const std::vector<Entry> &entries() const { return entries_; }
    size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    /// One JSON object per line: {"a": [hex...], "i": n, "c": n, "z": hex, "y": n}.
    std::string to_jsonl() const;
    static OracleTranscript from_jsonl(const FischlinParams &params, const std::string &text);

   private:
    std::vector<Entry> entries_;
    std::unordered_map<std::string, size_t> index_;
};

/// Point overrides installed by the simulator, keyed by encoded input.
struct ReprogramTable {
    std::map<Bytes, std::pair<OracleInput, OracleOutput>> overrides;

    const OracleOutput *lookup(const Bytes &encoded) const;
    std::string to_json() const;
};

/// Installs an override. Refuses points already answered in the transcript.
void reprogram(
    ReprogramTable &table,
    const OracleTranscript &transcript,
    const FischlinParams &params,
    const OracleInput &input,
    OracleOutput value);

/// Overrides first, then the seeded hash; the answer is logged on first occurrence only.
OracleOutput recorded_query(
    OracleTranscript &transcript,
    std::span<const uint8_t> seed,
    const FischlinParams &params,
    const ReprogramTable *table,
    const OracleInput &input);

/// The handle through which provers and verifiers reach H.
class Oracle {
   public:
    virtual ~Oracle() = default;
    virtual OracleOutput query(const OracleInput &input) = 0;
};

/// Stateless hashing; no log.
class PlainOracle : public Oracle {
   public:
    PlainOracle(Bytes seed, FischlinParams params) : seed_(std::move(seed)), params_(params) {}
    OracleOutput query(const OracleInput &input) override { return ro_eval(seed_, params_, input); }

   private:
    Bytes seed_;
    FischlinParams params_;
};

/// Recording oracle with optional reprogramming. Single writer.
class RecordingOracle : public Oracle {
   public:
    /// Consulted on the first query of a point not in the override table; a value
    /// returned here is installed as an override.
    using ProgrammingRule = std::function<std::optional<OracleOutput>(const OracleInput &)>;

    RecordingOracle(Bytes seed, FischlinParams params);

    OracleOutput query(const OracleInput &input) override;

    void reprogram(const OracleInput &input, OracleOutput value);
    void set_programming_rule(ProgrammingRule rule) { rule_ = std::move(rule); }

    const OracleTranscript &transcript() const { return transcript_; }
    const ReprogramTable &table() const { return table_; }
    const FischlinParams &params() const { return params_; }
    const Bytes &seed() const { return seed_; }

   private:
    Bytes seed_;
    FischlinParams params_;
    OracleTranscript transcript_;
    ReprogramTable table_;
    ProgrammingRule rule_;
};

}  // namespace fischlin
