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

#include "fischlin/extractor.h"

#include <algorithm>
#include <map>

#include "json.hpp"

namespace fischlin {

namespace {

using Entry = OracleTranscript::Entry;

// Runs the pair search over already-filtered valid entries.
ExtractionOutcome search(
    const SigmaProtocol &sigma, const SigmaInstance &instance, std::vector<const Entry *> valid) {
    ExtractionOutcome out;
    std::sort(valid.begin(), valid.end(), [](const Entry *x, const Entry *y) { return x->encoded < y->encoded; });

    // (a_vec, i) -> members in encoded order
    std::map<std::pair<std::vector<Bytes>, uint32_t>, std::vector<const Entry *>> groups;
    for (const Entry *e : valid) {
        groups[{e->input.a_vec, e->input.i}].push_back(e);
    }

    for (const auto &[key, members] : groups) {
        std::map<uint64_t, const Entry *> by_c;
        for (const Entry *e : members) {
            auto [it, fresh] = by_c.emplace(e->input.c, e);
            if (!fresh && it->second->input.z != e->input.z) {
                out.status = ExtractionStatus::UniqueResponseViolation;
                out.pair = {it->second->input, e->input};
                out.details = "two valid responses for repetition " + std::to_string(key.second) + " challenge " +
                              std::to_string(e->input.c);
                return out;
            }
        }
    }

    const Entry *first = nullptr;
    const Entry *second = nullptr;
    for (const auto &[key, members] : groups) {
        const Entry *head = members.front();
        if (first != nullptr && !(head->encoded < first->encoded)) {
            continue;
        }
        for (const Entry *e : members) {
            if (e->input.c != head->input.c) {
                first = head;
                second = e;
                break;
            }
        }
    }
    if (first == nullptr) {
        return out;
    }

    uint32_t i = first->input.i;
    const Bytes &a = first->input.a_vec[i - 1];
    SigmaWitness w = sigma.extract(instance, a, first->input.c, first->input.z, second->input.c, second->input.z);
    if (!in_relation(instance, w)) {
        throw std::logic_error("special-soundness extractor returned a non-witness");
    }
    out.status = ExtractionStatus::Extracted;
    out.witness = w;
    out.pair = {first->input, second->input};
    return out;
}

bool valid_entry(const FischlinParams &params, const SigmaProtocol &sigma, const SigmaInstance &instance, const Entry &e) {
    const auto &in = e.input;
    if (in.a_vec.size() != params.k || in.i < 1 || in.i > params.k) {
        return false;
    }
    return sigma.verify(instance, in.a_vec[in.i - 1], in.c, in.z);
}

nlohmann::json input_json(const OracleInput &in) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto &aj : in.a_vec) {
        a.push_back(to_hex(aj));
    }
    return {{"a", a}, {"i", in.i}, {"c", in.c}, {"z", to_hex(in.z)}};
}

}  // namespace

std::string to_string(ExtractionStatus status) {
    switch (status) {
        case ExtractionStatus::Extracted:
            return "Extracted";
        case ExtractionStatus::NoPairFound:
            return "NoPairFound";
        case ExtractionStatus::UniqueResponseViolation:
            return "UniqueResponseViolation";
    }
    return "?";
}

std::string ExtractionOutcome::to_json() const {
    nlohmann::json j = {{"status", to_string(status)}};
    if (witness) {
        j["w"] = to_decimal(witness->w);
    }
    if (pair) {
        j["pair"] = {input_json(pair->first), input_json(pair->second)};
    }
    if (!details.empty()) {
        j["details"] = details;
    }
    j["global_scan"] = global_scan;
    return j.dump();
}

ExtractionOutcome extract(
    const FischlinParams &params,
    const SigmaProtocol &sigma,
    const SigmaInstance &instance,
    const Proof &proof,
    const OracleTranscript &transcript) {
    std::vector<const Entry *> filtered, all;
    for (const auto &e : transcript.entries()) {
        if (!valid_entry(params, sigma, instance, e)) {
            continue;
        }
        all.push_back(&e);
        if (e.input.a_vec == proof.a_vec) {
            filtered.push_back(&e);
        }
    }
    ExtractionOutcome out = search(sigma, instance, filtered);
    if (out.status != ExtractionStatus::NoPairFound || all.size() == filtered.size()) {
        return out;
    }
    out = search(sigma, instance, all);
    out.global_scan = out.status != ExtractionStatus::NoPairFound;
    return out;
}

OnlineResult run_online_experiment(
    const ProverFn &prover, const FischlinParams &params, const SigmaProtocol &sigma, const Bytes &seed) {
    RecordingOracle oracle(seed, params);
    OnlineResult result;
    ProverOutput produced = prover(oracle);
    result.proof = produced.proof;
    if (produced.proof) {
        result.verdict = verify(params, sigma, produced.instance, *produced.proof, oracle);
    }
    if (result.verdict) {
        result.outcome = extract(params, sigma, produced.instance, *produced.proof, oracle.transcript());
    }
    result.transcript = oracle.transcript();
    return result;
}

ProverFn honest_prover(
    const FischlinParams &params,
    const SigmaProtocol &sigma,
    const SigmaInstance &instance,
    const SigmaWitness &witness,
    Rng &rng) {
    return [&params, &sigma, instance, witness, &rng](Oracle &oracle) {
        ProverOutput out{instance, std::nullopt};
        auto res = prove(params, sigma, instance, witness, oracle, rng);
        if (auto *p = std::get_if<Proof>(&res)) {
            out.proof = std::move(*p);
        }
        return out;
    };
}

}  // namespace fischlin
