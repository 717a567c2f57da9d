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

#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "fischlin/fischlin.h"

namespace fischlin {

enum class ExtractionStatus { Extracted, NoPairFound, UniqueResponseViolation };

std::string to_string(ExtractionStatus status);

struct ExtractionOutcome {
    ExtractionStatus status = ExtractionStatus::NoPairFound;
    std::optional<SigmaWitness> witness;
    std::optional<std::pair<OracleInput, OracleInput>> pair;
    std::string details;
    // Set when the pair came from outside the proof's commitment vector.
    bool global_scan = false;

    std::string to_json() const;
};

/// Looks for two valid transcripts under the proof's commitments that share i and differ in c,
/// taking the first such pair in encoded-input order. Falls back to all commitment vectors.
ExtractionOutcome extract(
    const FischlinParams &params,
    const SigmaProtocol &sigma,
    const SigmaInstance &instance,
    const Proof &proof,
    const OracleTranscript &transcript);

struct ProverOutput {
    SigmaInstance instance;
    std::optional<Proof> proof;
};

using ProverFn = std::function<ProverOutput(Oracle &)>;

struct OnlineResult {
    std::optional<Proof> proof;
    bool verdict = false;
    std::optional<ExtractionOutcome> outcome;
    OracleTranscript transcript;
};

/// Prover, verifier and extractor share one fresh recording oracle.
/// Extraction is skipped when the verdict is reject.
OnlineResult run_online_experiment(
    const ProverFn &prover, const FischlinParams &params, const SigmaProtocol &sigma, const Bytes &seed);

/// Runs `prove`; returns no proof on Abort.
ProverFn honest_prover(
    const FischlinParams &params,
    const SigmaProtocol &sigma,
    const SigmaInstance &instance,
    const SigmaWitness &witness,
    Rng &rng);

}  // namespace fischlin
