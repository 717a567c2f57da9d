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

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fischlin/bytes.h"
#include "fischlin/oracle.h"
#include "fischlin/params.h"
#include "fischlin/sigma.h"

namespace fischlin {

struct Proof {
    std::vector<Bytes> a_vec;
    std::vector<uint64_t> c_vec;
    std::vector<Bytes> z_vec;

    bool operator==(const Proof &) const = default;
};

/// Some repetition exhausted all T challenges without a zero hash. 1-based.
struct Abort {
    uint32_t repetition = 0;
};

using ProveResult = std::variant<Proof, Abort>;

/// Grinds challenges 0, 1, ... T-1 per repetition. Every attempted (c, z) goes through `oracle`.
/// Throws std::invalid_argument when (x, w) is not in the relation.
ProveResult prove(
    const FischlinParams &params,
    const SigmaProtocol &sigma,
    const SigmaInstance &instance,
    const SigmaWitness &witness,
    Oracle &oracle,
    Rng &rng);

/// Hash check then Σ check per repetition; exactly k oracle queries when accepting.
bool verify(const FischlinParams &params, const SigmaProtocol &sigma, const SigmaInstance &instance, const Proof &proof, Oracle &oracle);

/// Shape and range checks only (lengths k, c < N, encodable sizes).
bool proof_shape_ok(const FischlinParams &params, const Proof &proof);

Bytes serialize_proof(const FischlinParams &params, const Proof &proof);

/// Throws DecodeError on bad magic, truncation, trailing bytes, header mismatch or c >= N.
/// When sigma and instance are given, commitments must also be well formed (subgroup check).
Proof deserialize_proof(
    const FischlinParams &params,
    std::span<const uint8_t> data,
    const SigmaProtocol *sigma = nullptr,
    const SigmaInstance *instance = nullptr);

std::string proof_to_json(const Proof &proof);

struct CompletenessError {
    double per_repetition = 0;  // (1 - 2^-l)^T
    double exact = 0;           // 1 - (1 - per_repetition)^k
    double union_bound = 0;     // min(1, k * per_repetition)
};

CompletenessError completeness_error(const FischlinParams &params);
CompletenessError completeness_error(uint64_t k, uint32_t l, uint64_t T);

}  // namespace fischlin
