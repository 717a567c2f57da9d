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

#include "fischlin/zk_sim.h"

#include <cmath>
#include <stdexcept>

namespace fischlin {

uint64_t TildeFunction::eval(uint32_t i, uint64_t c) {
    auto key = std::make_pair(i, c);
    auto it = cells_.find(key);
    if (it != cells_.end()) {
        return it->second;
    }
    Bytes msg;
    append_tag(msg, "FISH");
    msg.insert(msg.end(), seed_.begin(), seed_.end());
    append_u32_be(msg, i);
    append_u32_be(msg, static_cast<uint32_t>(c));
    uint64_t v = truncate_bits(sha256(msg), l_);
    cells_.emplace(key, v);
    return v;
}

std::optional<uint64_t> sample_zero_cell(TildeFunction &tilde, uint32_t i, uint64_t n, uint32_t l, Rng &rng) {
    // about 64 expected hits' worth of tries before giving up on sampling
    uint64_t cap = l >= 40 ? n : std::min<uint64_t>(n, uint64_t{64} << l);
    for (uint64_t t = 0; t < cap; t++) {
        uint64_t c = uniform_u64_below(n, rng);
        if (tilde.eval(i, c) == 0) {
            return c;
        }
    }
    std::vector<uint64_t> zeros;
    for (uint64_t c = 0; c < n; c++) {
        if (tilde.eval(i, c) == 0) {
            zeros.push_back(c);
        }
    }
    if (zeros.empty()) {
        return std::nullopt;
    }
    return zeros[uniform_u64_below(zeros.size(), rng)];
}

namespace {

Bytes random_seed(Rng &rng) {
    Bytes seed(32);
    for (auto &b : seed) {
        b = static_cast<uint8_t>(rng() & 0xFF);
    }
    return seed;
}

// Lazy H' for valid transcripts under the fixed commitment vector.
void install_rule(
    RecordingOracle &oracle,
    const SigmaProtocol &sigma,
    const SigmaInstance &instance,
    const std::vector<Bytes> &a_vec,
    std::shared_ptr<TildeFunction> tilde) {
    auto programmed = std::make_shared<std::map<std::pair<uint32_t, uint64_t>, Bytes>>();
    oracle.set_programming_rule([&sigma, instance, a_vec, tilde, programmed](const OracleInput &in) -> std::optional<OracleOutput> {
        if (in.a_vec != a_vec || !sigma.verify(instance, a_vec[in.i - 1], in.c, in.z)) {
            return std::nullopt;
        }
        auto [it, fresh] = programmed->emplace(std::make_pair(in.i, in.c), in.z);
        if (!fresh && it->second != in.z) {
            throw std::logic_error("two valid responses for one (i, c); H' is not a function");
        }
        return OracleOutput{tilde->eval(in.i, in.c)};
    });
}

}  // namespace

std::string to_string(Hybrid h) {
    switch (h) {
        case Hybrid::H0:
            return "H0";
        case Hybrid::H1:
            return "H1";
        case Hybrid::H1Prime:
            return "H1'";
        case Hybrid::H2:
            return "H2";
    }
    return "?";
}

HybridSample hybrid_experiment(
    const FischlinParams &params,
    const SigmaProtocol &sigma,
    const SigmaInstance &instance,
    const SigmaWitness &witness,
    Hybrid mode,
    RecordingOracle &oracle,
    Rng &rng) {
    params.validate();
    HybridSample out;
    out.mode = mode;
    if (mode == Hybrid::H0) {
        auto res = prove(params, sigma, instance, witness, oracle, rng);
        if (auto *p = std::get_if<Proof>(&res)) {
            out.proof = std::move(*p);
            out.verdict = verify(params, sigma, instance, *out.proof, oracle);
        } else {
            out.aborted = true;
        }
        return out;
    }

    auto tilde = std::make_shared<TildeFunction>(random_seed(rng), params.l);
    std::vector<uint64_t> challenges;
    for (uint32_t i = 1; i <= params.k; i++) {
        if (mode == Hybrid::H1) {
            challenges.push_back(uniform_u64_below(params.N, rng));
            continue;
        }
        auto c = sample_zero_cell(*tilde, i, params.N, params.l, rng);
        if (!c) {
            out.aborted = true;
            return out;
        }
        challenges.push_back(*c);
    }

    Proof proof;
    proof.c_vec = challenges;
    if (mode == Hybrid::H2) {
        for (uint32_t i = 0; i < params.k; i++) {
            auto [a, z] = sigma.simulate(instance, challenges[i], rng);
            proof.a_vec.push_back(std::move(a));
            proof.z_vec.push_back(std::move(z));
        }
    } else {
        if (!in_relation(instance, witness)) {
            throw std::invalid_argument("witness does not satisfy the relation");
        }
        for (uint32_t i = 0; i < params.k; i++) {
            auto com = sigma.commit(instance, rng);
            proof.a_vec.push_back(std::move(com.a));
            proof.z_vec.push_back(sigma.respond(instance, com.state, witness, challenges[i]));
        }
    }

    for (uint32_t i = 1; i <= params.k; i++) {
        OracleInput point{proof.a_vec, i, proof.c_vec[i - 1], proof.z_vec[i - 1]};
        oracle.reprogram(point, OracleOutput{tilde->eval(i, proof.c_vec[i - 1])});
    }
    install_rule(oracle, sigma, instance, proof.a_vec, tilde);

    out.verdict = verify(params, sigma, instance, proof, oracle);
    out.proof = std::move(proof);
    return out;
}

SimResult simulate(
    const FischlinParams &params,
    const SigmaProtocol &sigma,
    const SigmaInstance &instance,
    RecordingOracle &oracle,
    Rng &rng) {
    params.validate();
    auto tilde = std::make_shared<TildeFunction>(random_seed(rng), params.l);
    Proof proof;
    for (uint32_t i = 1; i <= params.k; i++) {
        auto c = sample_zero_cell(*tilde, i, params.N, params.l, rng);
        if (!c) {
            return Abort{i};
        }
        proof.c_vec.push_back(*c);
    }
    for (uint32_t i = 0; i < params.k; i++) {
        auto [a, z] = sigma.simulate(instance, proof.c_vec[i], rng);
        proof.a_vec.push_back(std::move(a));
        proof.z_vec.push_back(std::move(z));
    }
    for (uint32_t i = 1; i <= params.k; i++) {
        oracle.reprogram(OracleInput{proof.a_vec, i, proof.c_vec[i - 1], proof.z_vec[i - 1]}, OracleOutput{0});
    }
    install_rule(oracle, sigma, instance, proof.a_vec, tilde);
    return SimOutput{std::move(proof), std::move(tilde)};
}

double reprogramming_advantage(double q, const std::vector<double> &p_max) {
    if (q < 0) {
        throw std::invalid_argument("query count must be non-negative");
    }
    double total = 0;
    for (double p : p_max) {
        if (p < 0) {
            throw std::invalid_argument("p_max must be non-negative");
        }
        total += std::sqrt(q * p) + q * p / 2;
    }
    return total;
}

TranscriptLaw exact_repetition_law(const SigmaInstance &instance, const SigmaWitness &witness, Hybrid mode, uint64_t n, uint32_t l) {
    if (mode != Hybrid::H1Prime && mode != Hybrid::H2) {
        throw std::invalid_argument("exact law is defined for H1' and H2 only");
    }
    const GroupParams &g = instance.group;
    uint64_t q = to_u64(g.q);
    uint64_t values = uint64_t{1} << l;
    double cells = static_cast<double>(n) * l;
    if (cells > 20) {
        throw std::invalid_argument("row space too large to enumerate");
    }
    // A row is a tuple of n l-bit values; only its zero pattern matters. A pattern Z
    // stands for (2^l - 1)^(n - |Z|) rows, and each row picks a zero cell uniformly.
    std::vector<mpq_class> cell_weight(n, 0);
    mpq_class row_count = 0;
    BigInt nonzero = from_u64(values - 1);
    for (uint64_t pattern = 1; pattern < (uint64_t{1} << n); pattern++) {
        unsigned size = __builtin_popcountll(pattern);
        BigInt mult;
        mpz_pow_ui(mult.get_mpz_t(), nonzero.get_mpz_t(), n - size);
        row_count += mult;
        mpq_class share(mult, size);
        share.canonicalize();
        for (uint64_t c = 0; c < n; c++) {
            if (pattern >> c & 1) {
                cell_weight[c] += share;
            }
        }
    }

    TranscriptLaw law;
    for (uint64_t c = 0; c < n; c++) {
        mpq_class w = cell_weight[c] / q;
        for (uint64_t s = 0; s < q; s++) {
            BigInt a, z;
            if (mode == Hybrid::H1Prime) {
                auto st = schnorr::commit_with_nonce(instance, from_u64(s));
                a = st.a;
                z = schnorr::respond(g, st, witness, c);
            } else {
                z = from_u64(s);
                a = schnorr::simulated_commitment(instance, c, z);
            }
            law[{a, c, z}] += w;
        }
    }
    for (auto &[key, p] : law) {
        p /= row_count;
        p.canonicalize();
    }
    return law;
}

}  // namespace fischlin
