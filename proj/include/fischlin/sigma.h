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

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fischlin/bigint.h"
#include "fischlin/bytes.h"

namespace fischlin {

/// Prime-order subgroup of (Z/pZ)^*, generated by g of order q.
struct GroupParams {
    BigInt p;
    BigInt q;
    BigInt g;

    /// Throws std::invalid_argument naming the first violated group axiom.
    void validate() const;
    bool in_subgroup(const BigInt &element) const;

    /// p=1019, q=509, g=4.
    static GroupParams toy();
    /// p=23, q=11, g=4. Small enough for exhaustive enumeration.
    static GroupParams tiny();

    bool operator==(const GroupParams &) const = default;
};

/// Discrete-log statement: x = g^w.
struct SigmaInstance {
    GroupParams group;
    BigInt x;
};

struct SigmaWitness {
    BigInt w;
};

struct SigmaTranscript {
    BigInt a;
    uint64_t c = 0;
    BigInt z;
};

struct CommitState {
    BigInt r;
    BigInt a;
};

SigmaInstance make_instance(const GroupParams &group, const SigmaWitness &witness);
bool in_relation(const SigmaInstance &instance, const SigmaWitness &witness);
/// Samples w uniformly from [1, q); w = 0 is excluded.
std::pair<SigmaInstance, SigmaWitness> keygen(const GroupParams &group, Rng &rng);

// Typed Schnorr operations. Challenges live in [0, q).
namespace schnorr {

CommitState commit_with_nonce(const SigmaInstance &instance, const BigInt &r);
CommitState commit(const SigmaInstance &instance, Rng &rng);
BigInt respond(const GroupParams &group, const CommitState &state, const SigmaWitness &witness, uint64_t c);
bool verify(const SigmaInstance &instance, const BigInt &a, uint64_t c, const BigInt &z);
/// Special-soundness extractor. Requires c1 != c2 and both transcripts valid.
SigmaWitness extract(
    const SigmaInstance &instance, const BigInt &a, uint64_t c1, const BigInt &z1, uint64_t c2, const BigInt &z2);
/// a = g^z * x^{-c}; the deterministic half of the simulator.
BigInt simulated_commitment(const SigmaInstance &instance, uint64_t c, const BigInt &z);
std::pair<BigInt, BigInt> simulate(const SigmaInstance &instance, uint64_t c, Rng &rng);

}  // namespace schnorr

/// Prover-side secret carried from commit to respond. One nonce per Schnorr coordinate.
struct ProverState {
    std::vector<BigInt> nonces;
};

struct EncodedCommitment {
    Bytes a;
    ProverState state;
};

/// Byte-level Σ-protocol boundary used by the transform, extractor and simulator.
///
/// Commitments and responses are opaque canonical encodings; the oracle binds them
/// into hash inputs without interpreting them. Implementations must be special-sound,
/// have unique responses, and be special honest-verifier zero-knowledge.
class SigmaProtocol {
   public:
    virtual ~SigmaProtocol() = default;

    /// Challenges are integers in [0, challenge_space()).
    virtual BigInt challenge_space() const = 0;
    virtual size_t nonce_count() const = 0;
    virtual std::string name() const = 0;

    virtual EncodedCommitment commit(const SigmaInstance &instance, Rng &rng) const = 0;
    virtual Bytes respond(
        const SigmaInstance &instance, const ProverState &state, const SigmaWitness &witness, uint64_t c) const = 0;
    /// Malformed encodings are rejected, never thrown.
    virtual bool verify(
        const SigmaInstance &instance, std::span<const uint8_t> a, uint64_t c, std::span<const uint8_t> z) const = 0;
    virtual SigmaWitness extract(
        const SigmaInstance &instance,
        std::span<const uint8_t> a,
        uint64_t c1,
        std::span<const uint8_t> z1,
        uint64_t c2,
        std::span<const uint8_t> z2) const = 0;
    virtual std::pair<Bytes, Bytes> simulate(const SigmaInstance &instance, uint64_t c, Rng &rng) const = 0;
    /// Subgroup-membership style check applied when decoding proofs from untrusted bytes.
    virtual bool is_well_formed_commitment(const SigmaInstance &instance, std::span<const uint8_t> a) const = 0;

   protected:
    void check_challenge(uint64_t c) const;
};

/// Schnorr over a prime-order subgroup, optionally with the challenge space cut down to [0, bound).
class SchnorrProtocol : public SigmaProtocol {
   public:
    explicit SchnorrProtocol(GroupParams group, std::optional<BigInt> challenge_bound = std::nullopt);

    BigInt challenge_space() const override;
    size_t nonce_count() const override { return 1; }
    std::string name() const override;

    EncodedCommitment commit(const SigmaInstance &instance, Rng &rng) const override;
    Bytes respond(const SigmaInstance &instance, const ProverState &state, const SigmaWitness &witness, uint64_t c)
        const override;
    bool verify(const SigmaInstance &instance, std::span<const uint8_t> a, uint64_t c, std::span<const uint8_t> z)
        const override;
    SigmaWitness extract(
        const SigmaInstance &instance,
        std::span<const uint8_t> a,
        uint64_t c1,
        std::span<const uint8_t> z1,
        uint64_t c2,
        std::span<const uint8_t> z2) const override;
    std::pair<Bytes, Bytes> simulate(const SigmaInstance &instance, uint64_t c, Rng &rng) const override;
    bool is_well_formed_commitment(const SigmaInstance &instance, std::span<const uint8_t> a) const override;

    const GroupParams &group() const { return group_; }

   private:
    GroupParams group_;
    BigInt bound_;
};

/// r-fold parallel repetition of a base protocol with challenge space N̂, restricted to [0, N).
///
/// A challenge c is written as r base-N̂ digits, most significant first; coordinate j runs
/// the base protocol on digit j. Commitments and responses are the concatenation of the
/// length-prefixed coordinate encodings.
class RepeatedProtocol : public SigmaProtocol {
   public:
    RepeatedProtocol(std::shared_ptr<const SigmaProtocol> base, uint32_t repetitions, uint64_t challenge_bound);

    BigInt challenge_space() const override { return from_u64(bound_); }
    size_t nonce_count() const override { return base_->nonce_count() * repetitions_; }
    std::string name() const override;

    std::vector<uint64_t> digits(uint64_t c) const;

    EncodedCommitment commit(const SigmaInstance &instance, Rng &rng) const override;
    Bytes respond(const SigmaInstance &instance, const ProverState &state, const SigmaWitness &witness, uint64_t c)
        const override;
    bool verify(const SigmaInstance &instance, std::span<const uint8_t> a, uint64_t c, std::span<const uint8_t> z)
        const override;
    SigmaWitness extract(
        const SigmaInstance &instance,
        std::span<const uint8_t> a,
        uint64_t c1,
        std::span<const uint8_t> z1,
        uint64_t c2,
        std::span<const uint8_t> z2) const override;
    std::pair<Bytes, Bytes> simulate(const SigmaInstance &instance, uint64_t c, Rng &rng) const override;
    bool is_well_formed_commitment(const SigmaInstance &instance, std::span<const uint8_t> a) const override;

   private:
    std::optional<std::vector<Bytes>> split(std::span<const uint8_t> encoded) const;

    std::shared_ptr<const SigmaProtocol> base_;
    uint32_t repetitions_;
    uint64_t base_size_;
    uint64_t bound_;
};

/// Schnorr restricted to base_size challenges, repeated r times, restricted to [0, target).
/// Throws std::invalid_argument when target > base_size^r or base_size > q.
std::shared_ptr<const SigmaProtocol> restrict_and_repeat(
    const GroupParams &group, uint64_t base_size, uint32_t repetitions, uint64_t target);

/// Schnorr with exactly n challenges: plain when n <= q, else the fewest repetitions of
/// the full q-challenge protocol that cover n.
std::shared_ptr<const SigmaProtocol> protocol_for(const GroupParams &group, uint64_t n);

}  // namespace fischlin
