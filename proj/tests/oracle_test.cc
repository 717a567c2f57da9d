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

#include <gtest/gtest.h>

#include <cmath>

#include "fischlin/bigint.h"
#include "fischlin/oracle.h"

using namespace fischlin;

namespace {

FischlinParams small_params(uint32_t k, uint32_t l, uint64_t n) { return FischlinParams{k * l, k, l, n, n, 1.0, 0}; }

OracleInput random_input(const FischlinParams &p, Rng &rng) {
    OracleInput in;
    for (uint32_t j = 0; j < p.k; j++) {
        in.a_vec.push_back(to_bytes_be(uniform_below(1019, rng)));
    }
    in.i = 1 + static_cast<uint32_t>(uniform_u64_below(p.k, rng));
    in.c = uniform_u64_below(p.N, rng);
    in.z = to_bytes_be(uniform_below(509, rng));
    return in;
}

}  // namespace

TEST(oracle, fixed_encoding_vector) {
    auto p = small_params(1, 4, 16);
    OracleInput in{{to_bytes_be(1)}, 1, 0, to_bytes_be(0)};
    EXPECT_EQ(to_hex(encode_input(p, in)), "46495331" "00000001" "00000004" "000101" "00000001" "00000000" "0000");
}

TEST(oracle, encoding_rejects_bad_shape) {
    auto p = small_params(2, 4, 16);
    OracleInput in{{to_bytes_be(1)}, 1, 0, {}};
    EXPECT_THROW(encode_input(p, in), std::invalid_argument);
    in.a_vec.push_back(to_bytes_be(2));
    in.i = 3;
    EXPECT_THROW(encode_input(p, in), std::invalid_argument);
    in.i = 0;
    EXPECT_THROW(encode_input(p, in), std::invalid_argument);
    in.i = 1;
    in.c = 16;
    EXPECT_THROW(encode_input(p, in), std::invalid_argument);
}

TEST(oracle, index_changes_encoding) {
    auto p = small_params(3, 4, 16);
    OracleInput a{{{1}, {2}, {3}}, 1, 5, {9}};
    OracleInput b = a;
    b.i = 2;
    EXPECT_NE(encode_input(p, a), encode_input(p, b));
}

TEST(oracle, round_trip_and_injectivity) {
    auto p = small_params(3, 6, 200);
    Rng rng(77);
    std::map<Bytes, OracleInput> seen;
    for (int t = 0; t < 1000; t++) {
        OracleInput in = random_input(p, rng);
        Bytes enc = encode_input(p, in);
        EXPECT_EQ(decode_input(p, enc), in);
        auto [it, fresh] = seen.emplace(enc, in);
        if (!fresh) {
            EXPECT_EQ(it->second, in);
        }
    }
}

TEST(oracle, decode_rejects_garbage) {
    auto p = small_params(1, 4, 16);
    OracleInput in{{{1}}, 1, 0, {}};
    Bytes enc = encode_input(p, in);
    Bytes extra = enc;
    extra.push_back(0);
    EXPECT_THROW(decode_input(p, extra), DecodeError);
    Bytes bad = enc;
    bad[0] = 'X';
    EXPECT_THROW(decode_input(p, bad), DecodeError);
    EXPECT_THROW(decode_input(small_params(2, 4, 16), enc), DecodeError);
}

TEST(oracle, truncation_is_big_endian) {
    Bytes digest = from_hex("a5" "ff" "000000000000" "00");
    EXPECT_EQ(truncate_bits(digest, 1), 1u);
    EXPECT_EQ(truncate_bits(digest, 4), 0xAu);
    EXPECT_EQ(truncate_bits(digest, 12), 0xA5Fu);
    EXPECT_THROW(truncate_bits(digest, 0), std::invalid_argument);
    EXPECT_THROW(truncate_bits(digest, 65), std::invalid_argument);
}

TEST(oracle, sha256_known_answer) {
    Bytes abc{'a', 'b', 'c'};
    EXPECT_EQ(to_hex(sha256(abc)), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(oracle, deterministic_and_bounded) {
    auto p = small_params(2, 5, 40);
    Bytes seed(32, 7);
    Rng rng(1);
    for (int t = 0; t < 200; t++) {
        auto in = random_input(p, rng);
        auto y = ro_eval(seed, p, in);
        EXPECT_EQ(y, ro_eval(seed, p, in));
        EXPECT_LT(y.bits, 32u);
        EXPECT_EQ(y.is_zero(), y.bits == 0);
    }
}

TEST(oracle, zero_rate_at_l8) {
    auto p = small_params(2, 8, 1000);
    Bytes seed(32, 1);
    Rng rng(8);
    const int n = 100000;
    int zeros = 0;
    for (int t = 0; t < n; t++) {
        zeros += ro_eval(seed, p, random_input(p, rng)).is_zero();
    }
    double pr = 1.0 / 256;
    double sd = std::sqrt(n * pr * (1 - pr));
    EXPECT_LT(std::abs(zeros - n * pr), 3 * sd);
}

TEST(oracle, one_bit_balance) {
    auto p = small_params(2, 1, 1000);
    Bytes seed(32, 2);
    Rng rng(9);
    const int n = 100000;
    int ones = 0;
    for (int t = 0; t < n; t++) {
        ones += static_cast<int>(ro_eval(seed, p, random_input(p, rng)).bits);
    }
    EXPECT_LT(std::abs(ones - n / 2.0), 3 * std::sqrt(n / 4.0));
}

TEST(oracle, recorded_query_logs_once) {
    auto p = small_params(1, 4, 16);
    Bytes seed(32, 3);
    OracleTranscript tr;
    OracleInput in{{{5}}, 1, 3, {7}};
    auto y1 = recorded_query(tr, seed, p, nullptr, in);
    auto y2 = recorded_query(tr, seed, p, nullptr, in);
    EXPECT_EQ(y1, y2);
    EXPECT_EQ(tr.size(), 1u);
    EXPECT_EQ(y1, ro_eval(seed, p, in));
}

TEST(oracle, reprogram_precedence_and_conflict) {
    auto p = small_params(1, 4, 16);
    RecordingOracle o(Bytes(32, 4), p);
    OracleInput in{{{5}}, 1, 3, {7}};
    o.reprogram(in, OracleOutput{0});
    EXPECT_EQ(o.query(in).bits, 0u);
    EXPECT_THROW(o.reprogram(in, OracleOutput{1}), ReprogramConflict);
    OracleInput other{{{5}}, 1, 4, {7}};
    EXPECT_THROW(o.reprogram(other, OracleOutput{16}), std::invalid_argument);
}

TEST(oracle, causal_order_in_log) {
    auto p = small_params(1, 4, 16);
    RecordingOracle o(Bytes(32, 5), p);
    std::vector<OracleInput> order;
    for (uint64_t c = 0; c < 6; c++) {
        OracleInput in{{{9}}, 1, (c * 5) % 16, {static_cast<uint8_t>(c + 1)}};
        order.push_back(in);
        o.query(in);
        o.query(order.front());
    }
    ASSERT_EQ(o.transcript().size(), order.size());
    for (size_t j = 0; j < order.size(); j++) {
        EXPECT_EQ(o.transcript().entries()[j].input, order[j]);
    }
}

TEST(oracle, programming_rule_hook) {
    auto p = small_params(1, 4, 16);
    RecordingOracle o(Bytes(32, 6), p);
    o.set_programming_rule([](const OracleInput &in) -> std::optional<OracleOutput> {
        if (in.c == 2) {
            return OracleOutput{0};
        }
        return std::nullopt;
    });
    OracleInput in{{{3}}, 1, 2, {1}};
    EXPECT_EQ(o.query(in).bits, 0u);
    EXPECT_EQ(o.table().overrides.size(), 1u);
}

TEST(oracle, jsonl_round_trip) {
    auto p = small_params(2, 6, 64);
    RecordingOracle o(Bytes(32, 8), p);
    Rng rng(12);
    for (int t = 0; t < 20; t++) {
        o.query(random_input(p, rng));
    }
    std::string text = o.transcript().to_jsonl();
    auto back = OracleTranscript::from_jsonl(p, text);
    ASSERT_EQ(back.size(), o.transcript().size());
    for (size_t j = 0; j < back.size(); j++) {
        EXPECT_EQ(back.entries()[j].input, o.transcript().entries()[j].input);
        EXPECT_EQ(back.entries()[j].output, o.transcript().entries()[j].output);
    }
    EXPECT_EQ(back.to_jsonl(), text);
    EXPECT_THROW(OracleTranscript::from_jsonl(p, "{not json"), DecodeError);
}
