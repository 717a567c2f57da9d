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

#include "fischlin/extractor.h"

using namespace fischlin;

namespace {

FischlinParams toy_params(uint32_t k, uint32_t l, uint64_t n) { return FischlinParams{k * l, k, l, n, n, 0, 0}; }

const GroupParams kToy = GroupParams::toy();

}  // namespace

TEST(extractor, empty_transcript) {
    auto p = toy_params(1, 2, 16);
    SchnorrProtocol sigma(kToy);
    auto inst = make_instance(kToy, SigmaWitness{7});
    Proof proof{{{64}}, {2}, {{17}}};
    auto out = extract(p, sigma, inst, proof, OracleTranscript{});
    EXPECT_EQ(out.status, ExtractionStatus::NoPairFound);
    EXPECT_FALSE(out.witness);
}

TEST(extractor, hand_built_pair) {
    auto p = toy_params(1, 2, 16);
    SchnorrProtocol sigma(kToy);
    auto inst = make_instance(kToy, SigmaWitness{7});
    RecordingOracle oracle(Bytes(32, 1), p);
    oracle.query(OracleInput{{{64}}, 1, 2, {17}});
    oracle.query(OracleInput{{{64}}, 1, 5, {38}});
    // invalid transcript is ignored
    oracle.query(OracleInput{{{64}}, 1, 6, {1}});
    Proof proof{{{64}}, {5}, {{38}}};
    auto out = extract(p, sigma, inst, proof, oracle.transcript());
    ASSERT_EQ(out.status, ExtractionStatus::Extracted);
    EXPECT_EQ(out.witness->w, BigInt(7));
    EXPECT_FALSE(out.global_scan);
    EXPECT_EQ(out.pair->first.c, 2u);
    EXPECT_EQ(out.pair->second.c, 5u);
}

TEST(extractor, lexicographic_tie_break) {
    auto p = toy_params(2, 2, 16);
    SchnorrProtocol sigma(kToy);
    auto inst = make_instance(kToy, SigmaWitness{7});
    std::vector<Bytes> a{{64}, {64}};
    auto z = [](uint64_t c) { return to_bytes_be(BigInt(3 + 7 * static_cast<long>(c))); };
    std::vector<OracleInput> qs = {
        {a, 2, 1, z(1)}, {a, 2, 4, z(4)}, {a, 1, 9, z(9)}, {a, 1, 3, z(3)}, {a, 1, 6, z(6)},
    };
    OracleTranscript forward, backward;
    Bytes seed(32, 2);
    for (const auto &q : qs) {
        recorded_query(forward, seed, p, nullptr, q);
    }
    for (auto it = qs.rbegin(); it != qs.rend(); ++it) {
        recorded_query(backward, seed, p, nullptr, *it);
    }
    Proof proof{a, {3, 1}, {z(3), z(1)}};
    auto x = extract(p, sigma, inst, proof, forward);
    auto y = extract(p, sigma, inst, proof, backward);
    ASSERT_EQ(x.status, ExtractionStatus::Extracted);
    EXPECT_EQ(x.to_json(), y.to_json());
    // i=1 encodes before i=2; within i=1 the smallest c are 3 and 6.
    EXPECT_EQ(x.pair->first.i, 1u);
    EXPECT_EQ(x.pair->first.c, 3u);
    EXPECT_EQ(x.pair->second.c, 6u);
}

// A Σ-protocol without unique responses: any z verifies.
class SloppyProtocol : public SchnorrProtocol {
   public:
    using SchnorrProtocol::SchnorrProtocol;
    bool verify(const SigmaInstance &, std::span<const uint8_t>, uint64_t, std::span<const uint8_t>) const override {
        return true;
    }
};

TEST(extractor, unique_response_violation_surfaced) {
    auto p = toy_params(1, 2, 16);
    SloppyProtocol sigma(kToy);
    auto inst = make_instance(kToy, SigmaWitness{7});
    RecordingOracle oracle(Bytes(32, 3), p);
    oracle.query(OracleInput{{{64}}, 1, 2, {17}});
    oracle.query(OracleInput{{{64}}, 1, 2, {18}});
    Proof proof{{{64}}, {2}, {{17}}};
    auto out = extract(p, sigma, inst, proof, oracle.transcript());
    EXPECT_EQ(out.status, ExtractionStatus::UniqueResponseViolation);
    EXPECT_FALSE(out.details.empty());
}

TEST(extractor, global_fallback) {
    auto p = toy_params(1, 2, 16);
    SchnorrProtocol sigma(kToy);
    auto inst = make_instance(kToy, SigmaWitness{7});
    RecordingOracle oracle(Bytes(32, 4), p);
    oracle.query(OracleInput{{{64}}, 1, 2, {17}});
    oracle.query(OracleInput{{{64}}, 1, 5, {38}});
    // proof under another commitment: a = 4^10
    Proof proof{{to_bytes_be(pow_mod(4, 10, 1019))}, {0}, {to_bytes_be(10)}};
    auto out = extract(p, sigma, inst, proof, oracle.transcript());
    ASSERT_EQ(out.status, ExtractionStatus::Extracted);
    EXPECT_TRUE(out.global_scan);
    EXPECT_EQ(out.witness->w, BigInt(7));
}

TEST(extractor, honest_online_experiment) {
    auto p = toy_params(4, 2, 32);
    SchnorrProtocol sigma(kToy);
    Rng key_rng(10);
    auto [inst, wit] = keygen(kToy, key_rng);
    int extracted = 0, multi = 0;
    for (int t = 0; t < 100; t++) {
        Rng rng(t);
        auto res = run_online_experiment(honest_prover(p, sigma, inst, wit, rng), p, sigma, sha256(Bytes{9, static_cast<uint8_t>(t)}));
        ASSERT_TRUE(res.verdict);
        ASSERT_TRUE(res.outcome);
        EXPECT_NE(res.outcome->status, ExtractionStatus::UniqueResponseViolation);
        bool needed_retry = false;
        for (uint64_t c : res.proof->c_vec) {
            needed_retry |= c > 0;
        }
        multi += needed_retry;
        if (needed_retry) {
            ASSERT_EQ(res.outcome->status, ExtractionStatus::Extracted);
            EXPECT_EQ(res.outcome->witness->w, wit.w);
        } else {
            EXPECT_EQ(res.outcome->status, ExtractionStatus::NoPairFound);
        }
        extracted += res.outcome->status == ExtractionStatus::Extracted;
    }
    EXPECT_EQ(extracted, multi);
    EXPECT_GT(extracted, 90);
}

TEST(extractor, replayed_proof_yields_no_pair) {
    auto p = toy_params(3, 2, 32);
    SchnorrProtocol sigma(kToy);
    auto inst = make_instance(kToy, SigmaWitness{7});
    Bytes seed(32, 5);
    Rng rng(3);
    PlainOracle offline(seed, p);
    auto res = prove(p, sigma, inst, SigmaWitness{7}, offline, rng);
    ASSERT_TRUE(std::holds_alternative<Proof>(res));
    Proof cached = std::get<Proof>(res);
    ProverFn replay = [&](Oracle &) { return ProverOutput{inst, cached}; };
    auto out = run_online_experiment(replay, p, sigma, seed);
    EXPECT_TRUE(out.verdict);
    EXPECT_EQ(out.transcript.size(), 3u);
    EXPECT_EQ(out.outcome->status, ExtractionStatus::NoPairFound);
}

TEST(extractor, garbage_prover_rejected) {
    auto p = toy_params(2, 2, 32);
    SchnorrProtocol sigma(kToy);
    auto inst = make_instance(kToy, SigmaWitness{7});
    ProverFn garbage = [&](Oracle &) { return ProverOutput{inst, Proof{{{1}, {2}}, {0, 0}, {{}, {}}}}; };
    auto out = run_online_experiment(garbage, p, sigma, Bytes(32, 6));
    EXPECT_FALSE(out.verdict);
    EXPECT_FALSE(out.outcome);
}
