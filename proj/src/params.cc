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

#include "fischlin/params.h"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fischlin {

uint64_t ceil_log2(uint64_t v) {
    if (v == 0) {
        throw std::invalid_argument("log of zero");
    }
    uint64_t bits = 0;
    while ((uint64_t{1} << bits) < v && bits < 64) {
        bits++;
    }
    return bits;
}

void FischlinParams::validate() const {
    if (k < 1) {
        throw std::invalid_argument("k must be at least 1");
    }
    if (l < 1 || l > 64) {
        throw std::invalid_argument("l must lie in [1, 64]");
    }
    if (N < 2 || N > 0xFFFFFFFFull) {
        throw std::invalid_argument("N must lie in [2, 2^32)");
    }
    if (T < 1 || T > N) {
        throw std::invalid_argument("attempt cap T must lie in [1, N]");
    }
}

FischlinParams derive_params(const ParamMode &mode, const std::optional<BigInt> &sigma_challenge_space) {
    FischlinParams out;
    if (const auto *m = std::get_if<FromLambda>(&mode)) {
        if (m->lambda == 0 || m->l == 0) {
            throw std::invalid_argument("lambda and l must be positive");
        }
        if (m->lambda % m->l != 0) {
            throw std::invalid_argument("l must divide lambda");
        }
        out.lambda = m->lambda;
        out.l = m->l;
        out.k = m->lambda / m->l;
        out.t_legacy = ceil_log2(m->lambda) * m->l;
        out.N = out.t_legacy + 1;
        out.T = out.N;
        out.c_rate = out.k >= 2 ? static_cast<double>(out.N) / (std::ldexp(1.0, static_cast<int>(out.l)) * std::log2(out.k)) : 0.0;
    } else {
        const auto &e = std::get<ExplicitRate>(mode);
        if (e.k == 0 || e.l == 0 || !(e.c_rate > 0)) {
            throw std::invalid_argument("k, l and c_rate must be positive");
        }
        if (e.l > 64) {
            throw std::invalid_argument("l must lie in [1, 64]");
        }
        out.k = e.k;
        out.l = e.l;
        out.lambda = e.k * e.l;
        out.c_rate = e.c_rate;
        out.t_legacy = ceil_log2(out.lambda) * out.l;
        double n = std::round(e.c_rate * std::ldexp(1.0, static_cast<int>(e.l)) * std::log2(static_cast<double>(e.k)));
        if (!(n >= 2) || n > 4294967295.0) {
            throw std::invalid_argument("derived challenge space size N is out of range");
        }
        out.N = static_cast<uint64_t>(n);
        out.T = out.N;
    }
    if (sigma_challenge_space && from_u64(out.N) > *sigma_challenge_space) {
        throw std::invalid_argument("N exceeds the Sigma-protocol challenge space");
    }
    out.validate();
    return out;
}

std::string describe(const FischlinParams &params) {
    std::ostringstream ss;
    ss << "k=" << params.k << " l=" << params.l << " N=" << params.N << " T=" << params.T
       << " c=" << params.c_rate << " lambda=" << params.lambda << " t_legacy=" << params.t_legacy;
    return ss.str();
}

}  // namespace fischlin
