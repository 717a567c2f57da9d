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

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "fischlin/bigint.h"

namespace fischlin {

/// Parameters of the proof-of-work transform.
///
/// k repetitions, each grinding over challenges 0, 1, ... < T until an l-bit hash is zero.
/// N is the size of the (restricted) Σ challenge space. t_legacy = ceil(log2 lambda) * l is
/// the historical attempt bound and is only recorded.
struct FischlinParams {
    uint32_t lambda = 0;
    uint32_t k = 0;
    uint32_t l = 0;
    uint64_t N = 0;
    uint64_t T = 0;
    double c_rate = 0;
    uint64_t t_legacy = 0;

    /// Throws std::invalid_argument on the first violated range constraint.
    void validate() const;

    bool operator==(const FischlinParams &) const = default;
};

/// lambda = k * l; N = T = t_legacy + 1.
struct FromLambda {
    uint32_t lambda;
    uint32_t l;
};

/// N = round(c_rate * 2^l * log2 k), T = N.
struct ExplicitRate {
    uint32_t k;
    uint32_t l;
    double c_rate;
};

using ParamMode = std::variant<FromLambda, ExplicitRate>;

/// Throws std::invalid_argument for non-divisible lambda, degenerate sizes, or when N
/// exceeds the Σ-protocol's challenge space.
FischlinParams derive_params(const ParamMode &mode, const std::optional<BigInt> &sigma_challenge_space = std::nullopt);

uint64_t ceil_log2(uint64_t v);

std::string describe(const FischlinParams &params);

}  // namespace fischlin
