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

#include "fischlin/fischlin.h"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace fischlin {

ProveResult prove(
    const FischlinParams &params,
    const SigmaProtocol &sigma,
    const SigmaInstance &instance,
    const SigmaWitness &witness,
    Oracle &oracle,
    Rng &rng) {
    params.validate();
    if (!in_relation(instance, witness)) {
        throw std::invalid_argument("witness does not satisfy the relation");
    }
    std::vector<ProverState> states;
    Proof proof;
    for (uint32_t j = 0; j < params.k; j++) {
        auto com = sigma.commit(instance, rng);
        proof.a_vec.push_back(std::move(com.a));
        states.push_back(std::move(com.state));
    }
    OracleInput query;
    query.a_vec = proof.a_vec;
    for (uint32_t i = 1; i <= params.k; i++) {
        bool found = false;
        for (uint64_t c = 0; c < params.T; c++) {
            query.i = i;
            query.c = c;
            query.z = sigma.respond(instance, states[i - 1], witness, c);
            if (oracle.query(query).is_zero()) {
                proof.c_vec.push_back(c);
                proof.z_vec.push_back(query.z);
                found = true;
                break;
            }
        }
        if (!found) {
            return Abort{i};
        }
    }
    return proof;
}

bool proof_shape_ok(const FischlinParams &params, const Proof &proof) {
    if (proof.a_vec.size() != params.k || proof.c_vec.size() != params.k || proof.z_vec.size() != params.k) {
        return false;
    }
    for (uint32_t j = 0; j < params.k; j++) {
        if (proof.c_vec[j] >= params.N || proof.a_vec[j].size() > 0xFFFF || proof.z_vec[j].size() > 0xFFFF) {
            return false;
        }
    }
    return true;
}

bool verify(const FischlinParams &params, const SigmaProtocol &sigma, const SigmaInstance &instance, const Proof &proof, Oracle &oracle) {
    if (!proof_shape_ok(params, proof)) {
        return false;
    }
    OracleInput query;
    query.a_vec = proof.a_vec;
    for (uint32_t i = 1; i <= params.k; i++) {
        query.i = i;
        query.c = proof.c_vec[i - 1];
        query.z = proof.z_vec[i - 1];
        if (!oracle.query(query).is_zero()) {
            return false;
        }
        if (!sigma.verify(instance, proof.a_vec[i - 1], query.c, query.z)) {
            return false;
        }
    }
    return true;
}

Bytes serialize_proof(const FischlinParams &params, const Proof &proof) {
    if (!proof_shape_ok(params, proof)) {
        throw std::invalid_argument("proof does not match parameters");
    }
    Bytes out;
    append_tag(out, "FISP");
    append_u32_be(out, params.k);
    append_u32_be(out, params.l);
    append_u32_be(out, static_cast<uint32_t>(params.N));
    for (uint32_t j = 0; j < params.k; j++) {
        append_len_prefixed(out, proof.a_vec[j]);
        append_u32_be(out, static_cast<uint32_t>(proof.c_vec[j]));
        append_len_prefixed(out, proof.z_vec[j]);
    }
    return out;
}

Proof deserialize_proof(
    const FischlinParams &params,
    std::span<const uint8_t> data,
    const SigmaProtocol *sigma,
    const SigmaInstance *instance) {
    ByteReader reader(data);
    reader.expect_tag("FISP");
    uint32_t k = reader.read_u32_be();
    uint32_t l = reader.read_u32_be();
    uint32_t n = reader.read_u32_be();
    if (k != params.k || l != params.l || n != params.N) {
        throw DecodeError("proof header does not match parameters");
    }
    Proof proof;
    for (uint32_t j = 0; j < k; j++) {
        proof.a_vec.push_back(reader.read_len_prefixed());
        uint32_t c = reader.read_u32_be();
        if (c >= params.N) {
            throw DecodeError("challenge out of range");
        }
        proof.c_vec.push_back(c);
        proof.z_vec.push_back(reader.read_len_prefixed());
    }
    if (!reader.done()) {
        throw DecodeError("trailing bytes after proof");
    }
    if (sigma != nullptr && instance != nullptr) {
        for (const auto &a : proof.a_vec) {
            if (!sigma->is_well_formed_commitment(*instance, a)) {
                throw DecodeError("commitment is not a well-formed group element");
            }
        }
    }
    return proof;
}

std::string proof_to_json(const Proof &proof) {
    nlohmann::json a = nlohmann::json::array(), c = nlohmann::json::array(), z = nlohmann::json::array();
    for (size_t j = 0; j < proof.a_vec.size(); j++) {
        a.push_back(to_hex(proof.a_vec[j]));
        c.push_back(proof.c_vec[j]);
        z.push_back(to_hex(proof.z_vec[j]));
    }
    return nlohmann::json{{"a", a}, {"c", c}, {"z", z}}.dump();
}

CompletenessError completeness_error(uint64_t k, uint32_t l, uint64_t T) {
    CompletenessError out;
    double miss = std::log1p(-std::ldexp(1.0, -static_cast<int>(l)));
    out.per_repetition = std::exp(static_cast<double>(T) * miss);
    out.exact = out.per_repetition >= 1 ? 1.0 : -std::expm1(static_cast<double>(k) * std::log1p(-out.per_repetition));
    out.union_bound = std::min(1.0, static_cast<double>(k) * out.per_repetition);
    return out;
}

CompletenessError completeness_error(const FischlinParams &params) {
    return completeness_error(params.k, params.l, params.T);
}

}  // namespace fischlin
