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

#include <gmpxx.h>

#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "fischlin/fischlin.h"

namespace fischlin {

/// Lazily evaluated uniform function [k] x [0, N) -> l bits, keyed by a private seed.
class TildeFunction {
   public:
    TildeFunction(Bytes seed, uint32_t l) : seed_(std::move(seed)), l_(l) {}

    uint64_t eval(uint32_t i, uint64_t c);
    /// Cells evaluated so far.
    const std::map<std::pair<uint32_t, uint64_t>, uint64_t> &cells() const { return cells_; }

   private:
    Bytes seed_;
    uint32_t l_;
    std::map<std::pair<uint32_t, uint64_t>, uint64_t> cells_;
};

struct SimOutput {
    Proof proof;
    std::shared_ptr<TildeFunction> tilde;
};

using SimResult = std::variant<SimOutput, Abort>;

/// Uniform c in [0, N) with tilde(i, c) = 0: rejection sampling, then a full scan.
/// Returns nullopt when the row has no zero.
std::optional<uint64_t> sample_zero_cell(TildeFunction &tilde, uint32_t i, uint64_t n, uint32_t l, Rng &rng);

/// Never sees a witness. Programs `oracle` eagerly at the k proof points and installs a lazy
/// rule for every other valid transcript under the simulated commitments. Throws
/// ReprogramConflict if a proof point was queried beforehand.
SimResult simulate(
    const FischlinParams &params,
    const SigmaProtocol &sigma,
    const SigmaInstance &instance,
    RecordingOracle &oracle,
    Rng &rng);

/// sum over rounds of sqrt(q p) + q p / 2.
double reprogramming_advantage(double q, const std::vector<double> &p_max);

enum class Hybrid { H0, H1, H1Prime, H2 };

std::string to_string(Hybrid h);

struct HybridSample {
    Hybrid mode = Hybrid::H0;
    bool aborted = false;
    std::optional<Proof> proof;
    bool verdict = false;
};

/// H0: honest prover, unmodified oracle. H1: honest commitments and responses, uniform c_i,
/// reprogrammed oracle. H1': c_i conditioned on a zero cell. H2: simulated transcripts.
/// The verdict is computed through the same oracle.
HybridSample hybrid_experiment(
    const FischlinParams &params,
    const SigmaProtocol &sigma,
    const SigmaInstance &instance,
    const SigmaWitness &witness,
    Hybrid mode,
    RecordingOracle &oracle,
    Rng &rng);

/// Exact law of one repetition's (a, c, z) for the Schnorr protocol, averaged over every
/// function row [0, N) -> l bits that has a zero. Only H1' and H2 are supported.
using TranscriptLaw = std::map<std::tuple<BigInt, uint64_t, BigInt>, mpq_class>;

TranscriptLaw exact_repetition_law(const SigmaInstance &instance, const SigmaWitness &witness, Hybrid mode, uint64_t n, uint32_t l);

}  // namespace fischlin
