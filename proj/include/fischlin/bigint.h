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

#include <cstdint>
#include <random>
#include <span>
#include <string>

#include "fischlin/bytes.h"

namespace fischlin {

using BigInt = mpz_class;

/// Randomness source threaded explicitly through every probabilistic operation.
using Rng = std::mt19937_64;

BigInt pow_mod(const BigInt &base, const BigInt &exp, const BigInt &mod);
/// Throws std::domain_error when no inverse exists.
BigInt inv_mod(const BigInt &a, const BigInt &mod);
/// Reduces into [0, mod) for any sign of a.
BigInt reduce_mod(const BigInt &a, const BigInt &mod);

/// Minimal big-endian magnitude; zero encodes as the empty string.
Bytes to_bytes_be(const BigInt &v);
BigInt from_bytes_be(std::span<const uint8_t> data);

/// Strict decimal parse (no sign, no whitespace).
BigInt parse_decimal(const std::string &s);
std::string to_decimal(const BigInt &v);

uint64_t to_u64(const BigInt &v);
BigInt from_u64(uint64_t v);

/// Uniform on [0, bound) by rejection; bound must be positive.
BigInt uniform_below(const BigInt &bound, Rng &rng);
uint64_t uniform_u64_below(uint64_t bound, Rng &rng);
/// Uniform double in [0, 1) with 53 random bits.
double uniform_unit(Rng &rng);

bool is_probable_prime(const BigInt &v);

}  // namespace fischlin
