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

#include "fischlin/sigma.h"

#include <stdexcept>

namespace fischlin {

void GroupParams::validate() const {
    if (p <= 2 || !is_probable_prime(p)) {
        throw std::invalid_argument("group modulus p is not prime");
    }
    if (q <= 1 || !is_probable_prime(q)) {
        throw std::invalid_argument("subgroup order q is not prime");
    }
    if (reduce_mod(p - 1, q) != 0) {
        throw std::invalid_argument("q does not divide p-1");
    }
    if (g <= 1 || g >= p) {
        throw std::invalid_argument("generator g must lie in (1, p)");
    }
    if (pow_mod(g, q, p) != 1) {
        throw std::invalid_argument("generator g does not have order q");
    }
}

bool GroupParams::in_subgroup(const BigInt &element) const {
    return element > 0 && element < p && pow_mod(element, q, p) == 1;
}

GroupParams GroupParams::toy() { return GroupParams{1019, 509, 4}; }

GroupParams GroupParams::tiny() { return GroupParams{23, 11, 4}; }

SigmaInstance make_instance(const GroupParams &group, const SigmaWitness &witness) {
    return SigmaInstance{group, pow_mod(group.g, witness.w, group.p)};
}

bool in_relation(const SigmaInstance &instance, const SigmaWitness &witness) {
    const auto &G = instance.group;
    return witness.w >= 0 && witness.w < G.q && pow_mod(G.g, witness.w, G.p) == instance.x;
}

std::pair<SigmaInstance, SigmaWitness> keygen(const GroupParams &group, Rng &rng) {
    SigmaWitness witness{uniform_below(group.q - 1, rng) + 1};
    return {make_instance(group, witness), witness};
}

namespace schnorr {

CommitState commit_with_nonce(const SigmaInstance &instance, const BigInt &r) {
    const auto &G = instance.group;
    return CommitState{r, pow_mod(G.g, r, G.p)};
}

CommitState commit(const SigmaInstance &instance, Rng &rng) {
    return commit_with_nonce(instance, uniform_below(instance.group.q, rng));
}

BigInt respond(const GroupParams &group, const CommitState &state, const SigmaWitness &witness, uint64_t c) {
    BigInt cc = from_u64(c);
    if (cc >= group.q) {
        throw std::out_of_range("challenge out of range");
    }
    return reduce_mod(state.r + cc * witness.w, group.q);
}

bool verify(const SigmaInstance &instance, const BigInt &a, uint64_t c, const BigInt &z) {
    const auto &G = instance.group;
    if (a <= 0 || a >= G.p || z < 0 || z >= G.q) {
        return false;
    }
    BigInt lhs = pow_mod(G.g, z, G.p);
    BigInt rhs = reduce_mod(a * pow_mod(instance.x, from_u64(c), G.p), G.p);
    return lhs == rhs;
}

SigmaWitness extract(
    const SigmaInstance &instance, const BigInt &a, uint64_t c1, const BigInt &z1, uint64_t c2, const BigInt &z2) {
    if (c1 == c2) {
        throw std::invalid_argument("special soundness needs two distinct challenges");
    }
    if (!verify(instance, a, c1, z1) || !verify(instance, a, c2, z2)) {
        throw std::invalid_argument("special soundness needs two accepting transcripts");
    }
    const auto &q = instance.group.q;
    BigInt dc = reduce_mod(from_u64(c1) - from_u64(c2), q);
    BigInt dz = reduce_mod(z1 - z2, q);
    return SigmaWitness{reduce_mod(dz * inv_mod(dc, q), q)};
}

BigInt simulated_commitment(const SigmaInstance &instance, uint64_t c, const BigInt &z) {
    const auto &G = instance.group;
    BigInt xc = pow_mod(instance.x, from_u64(c), G.p);
    return reduce_mod(pow_mod(G.g, z, G.p) * inv_mod(xc, G.p), G.p);
}

std::pair<BigInt, BigInt> simulate(const SigmaInstance &instance, uint64_t c, Rng &rng) {
    BigInt z = uniform_below(instance.group.q, rng);
    return {simulated_commitment(instance, c, z), z};
}

}  // namespace schnorr

void SigmaProtocol::check_challenge(uint64_t c) const {
    if (from_u64(c) >= challenge_space()) {
        throw std::out_of_range("challenge out of range");
    }
}

SchnorrProtocol::SchnorrProtocol(GroupParams group, std::optional<BigInt> challenge_bound)
    : group_(std::move(group)), bound_(challenge_bound.value_or(group_.q)) {
    if (bound_ < 2 || bound_ > group_.q) {
        throw std::invalid_argument("Schnorr challenge bound must lie in [2, q]");
    }
}

BigInt SchnorrProtocol::challenge_space() const { return bound_; }

std::string SchnorrProtocol::name() const { return "schnorr[N=" + to_decimal(bound_) + "]"; }

EncodedCommitment SchnorrProtocol::commit(const SigmaInstance &instance, Rng &rng) const {
    auto st = schnorr::commit(instance, rng);
    return EncodedCommitment{to_bytes_be(st.a), ProverState{{st.r}}};
}

Bytes SchnorrProtocol::respond(
    const SigmaInstance &instance, const ProverState &state, const SigmaWitness &witness, uint64_t c) const {
    check_challenge(c);
    if (state.nonces.size() != 1) {
        throw std::invalid_argument("Schnorr prover state must hold exactly one nonce");
    }
    CommitState st = schnorr::commit_with_nonce(instance, state.nonces[0]);
    return to_bytes_be(schnorr::respond(instance.group, st, witness, c));
}

bool SchnorrProtocol::verify(
    const SigmaInstance &instance, std::span<const uint8_t> a, uint64_t c, std::span<const uint8_t> z) const {
    if (from_u64(c) >= bound_) {
        return false;
    }
    // Non-minimal encodings would give one response two byte representations.
    if ((!a.empty() && a[0] == 0) || (!z.empty() && z[0] == 0)) {
        return false;
    }
    return schnorr::verify(instance, from_bytes_be(a), c, from_bytes_be(z));
}

SigmaWitness SchnorrProtocol::extract(
    const SigmaInstance &instance,
    std::span<const uint8_t> a,
    uint64_t c1,
    std::span<const uint8_t> z1,
    uint64_t c2,
    std::span<const uint8_t> z2) const {
    return schnorr::extract(instance, from_bytes_be(a), c1, from_bytes_be(z1), c2, from_bytes_be(z2));
}

std::pair<Bytes, Bytes> SchnorrProtocol::simulate(const SigmaInstance &instance, uint64_t c, Rng &rng) const {
    check_challenge(c);
    auto [a, z] = schnorr::simulate(instance, c, rng);
    return {to_bytes_be(a), to_bytes_be(z)};
}

bool SchnorrProtocol::is_well_formed_commitment(const SigmaInstance &instance, std::span<const uint8_t> a) const {
    if (!a.empty() && a[0] == 0) {
        return false;  // not minimal
    }
    return instance.group.in_subgroup(from_bytes_be(a));
}

RepeatedProtocol::RepeatedProtocol(
    std::shared_ptr<const SigmaProtocol> base, uint32_t repetitions, uint64_t challenge_bound)
    : base_(std::move(base)), repetitions_(repetitions), bound_(challenge_bound) {
    if (!base_ || repetitions_ == 0) {
        throw std::invalid_argument("repetition needs a base protocol and r >= 1");
    }
    base_size_ = to_u64(base_->challenge_space());
    BigInt capacity;
    mpz_pow_ui(capacity.get_mpz_t(), from_u64(base_size_).get_mpz_t(), repetitions_);
    if (bound_ < 2 || from_u64(bound_) > capacity) {
        throw std::invalid_argument("target challenge space exceeds base^r");
    }
}

std::string RepeatedProtocol::name() const {
    return base_->name() + "^" + std::to_string(repetitions_) + "[N=" + std::to_string(bound_) + "]";
}

std::vector<uint64_t> RepeatedProtocol::digits(uint64_t c) const {
    std::vector<uint64_t> out(repetitions_);
    for (size_t j = repetitions_; j-- > 0;) {
        out[j] = c % base_size_;
        c /= base_size_;
    }
    return out;
}

std::optional<std::vector<Bytes>> RepeatedProtocol::split(std::span<const uint8_t> encoded) const {
    try {
        ByteReader reader(encoded);
        std::vector<Bytes> parts;
        for (uint32_t j = 0; j < repetitions_; j++) {
            parts.push_back(reader.read_len_prefixed());
        }
        if (!reader.done()) {
            return std::nullopt;
        }
        return parts;
    } catch (const DecodeError &) {
        return std::nullopt;
    }
}

EncodedCommitment RepeatedProtocol::commit(const SigmaInstance &instance, Rng &rng) const {
    EncodedCommitment out;
    for (uint32_t j = 0; j < repetitions_; j++) {
        auto part = base_->commit(instance, rng);
        append_len_prefixed(out.a, part.a);
        out.state.nonces.insert(out.state.nonces.end(), part.state.nonces.begin(), part.state.nonces.end());
    }
    return out;
}

Bytes RepeatedProtocol::respond(
    const SigmaInstance &instance, const ProverState &state, const SigmaWitness &witness, uint64_t c) const {
    check_challenge(c);
    if (state.nonces.size() != nonce_count()) {
        throw std::invalid_argument("prover state has the wrong number of nonces");
    }
    auto ds = digits(c);
    size_t per = base_->nonce_count();
    Bytes out;
    for (uint32_t j = 0; j < repetitions_; j++) {
        ProverState part{{state.nonces.begin() + j * per, state.nonces.begin() + (j + 1) * per}};
        append_len_prefixed(out, base_->respond(instance, part, witness, ds[j]));
    }
    return out;
}

bool RepeatedProtocol::verify(
    const SigmaInstance &instance, std::span<const uint8_t> a, uint64_t c, std::span<const uint8_t> z) const {
    if (c >= bound_) {
        return false;
    }
    auto as = split(a);
    auto zs = split(z);
    if (!as || !zs) {
        return false;
    }
    auto ds = digits(c);
    for (uint32_t j = 0; j < repetitions_; j++) {
        if (!base_->verify(instance, (*as)[j], ds[j], (*zs)[j])) {
            return false;
        }
    }
    return true;
}

SigmaWitness RepeatedProtocol::extract(
    const SigmaInstance &instance,
    std::span<const uint8_t> a,
    uint64_t c1,
    std::span<const uint8_t> z1,
    uint64_t c2,
    std::span<const uint8_t> z2) const {
    if (c1 == c2) {
        throw std::invalid_argument("special soundness needs two distinct challenges");
    }
    if (!verify(instance, a, c1, z1) || !verify(instance, a, c2, z2)) {
        throw std::invalid_argument("special soundness needs two accepting transcripts");
    }
    auto as = *split(a);
    auto z1s = *split(z1);
    auto z2s = *split(z2);
    auto d1 = digits(c1);
    auto d2 = digits(c2);
    for (uint32_t j = 0; j < repetitions_; j++) {
        if (d1[j] != d2[j]) {
            return base_->extract(instance, as[j], d1[j], z1s[j], d2[j], z2s[j]);
        }
    }
    throw std::logic_error("distinct challenges produced identical digit vectors");
}

std::pair<Bytes, Bytes> RepeatedProtocol::simulate(const SigmaInstance &instance, uint64_t c, Rng &rng) const {
    check_challenge(c);
    Bytes a;
    Bytes z;
    for (uint64_t d : digits(c)) {
        auto [aj, zj] = base_->simulate(instance, d, rng);
        append_len_prefixed(a, aj);
        append_len_prefixed(z, zj);
    }
    return {a, z};
}

bool RepeatedProtocol::is_well_formed_commitment(const SigmaInstance &instance, std::span<const uint8_t> a) const {
    auto as = split(a);
    if (!as) {
        return false;
    }
    for (const auto &part : *as) {
        if (!base_->is_well_formed_commitment(instance, part)) {
            return false;
        }
    }
    return true;
}

std::shared_ptr<const SigmaProtocol> restrict_and_repeat(
    const GroupParams &group, uint64_t base_size, uint32_t repetitions, uint64_t target) {
    auto base = std::make_shared<SchnorrProtocol>(group, from_u64(base_size));
    if (repetitions == 1) {
        if (target > base_size) {
            throw std::invalid_argument("target challenge space exceeds base^r");
        }
        return std::make_shared<SchnorrProtocol>(group, from_u64(target));
    }
    return std::make_shared<RepeatedProtocol>(std::move(base), repetitions, target);
}

std::shared_ptr<const SigmaProtocol> protocol_for(const GroupParams &group, uint64_t n) {
    uint64_t q = to_u64(group.q);
    uint32_t r = 1;
    BigInt cover = group.q;
    while (cover < from_u64(n)) {
        cover *= group.q;
        r++;
    }
    return restrict_and_repeat(group, q, r, n);
}

}  // namespace fischlin
