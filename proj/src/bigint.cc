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

#include "fischlin/bigint.h"

#include <stdexcept>

namespace fischlin {

BigInt pow_mod(const BigInt &base, const BigInt &exp, const BigInt &mod) {
    if (exp < 0) {
        return pow_mod(inv_mod(base, mod), -exp, mod);
    }
    BigInt out;
    BigInt b = reduce_mod(base, mod);
    mpz_powm(out.get_mpz_t(), b.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
    return out;
}

BigInt inv_mod(const BigInt &a, const BigInt &mod) {
    BigInt out;
    BigInt r = reduce_mod(a, mod);
    if (mpz_invert(out.get_mpz_t(), r.get_mpz_t(), mod.get_mpz_t()) == 0) {
        throw std::domain_error("value is not invertible modulo the given modulus");
    }
    return out;
}

BigInt reduce_mod(const BigInt &a, const BigInt &mod) {
    BigInt out;
    mpz_mod(out.get_mpz_t(), a.get_mpz_t(), mod.get_mpz_t());
    return out;
}

Bytes to_bytes_be(const BigInt &v) {
    if (v < 0) {
        throw std::invalid_argument("cannot encode a negative integer");
    }
    if (v == 0) {
        return {};
    }
    size_t n = (mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8;
    Bytes out(n);
    size_t written = 0;
    mpz_export(out.data(), &written, 1, 1, 1, 0, v.get_mpz_t());
    out.resize(written);
    return out;
}

BigInt from_bytes_be(std::span<const uint8_t> data) {
    BigInt out;
    if (!data.empty()) {
        mpz_import(out.get_mpz_t(), data.size(), 1, 1, 1, 0, data.data());
    }
    return out;
}

BigInt parse_decimal(const std::string &s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
        throw DecodeError("not a decimal integer: '" + s + "'");
    }
    return BigInt(s, 10);
}

std::string to_decimal(const BigInt &v) { return v.get_str(10); }

uint64_t to_u64(const BigInt &v) {
    if (v < 0 || mpz_sizeinbase(v.get_mpz_t(), 2) > 64) {
        throw std::out_of_range("integer does not fit in 64 bits");
    }
    uint64_t out = 0;
    auto bytes = to_bytes_be(v);
    for (uint8_t b : bytes) {
        out = (out << 8) | b;
    }
    return out;
}

BigInt from_u64(uint64_t v) {
    BigInt out;
    mpz_import(out.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
    return out;
}

BigInt uniform_below(const BigInt &bound, Rng &rng) {
    if (bound <= 0) {
        throw std::invalid_argument("uniform_below requires a positive bound");
    }
    size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
    size_t words = (bits + 63) / 64;
    uint64_t top_mask = (bits % 64 == 0) ? ~uint64_t{0} : ((uint64_t{1} << (bits % 64)) - 1);
    while (true) {
        BigInt candidate = 0;
        for (size_t w = 0; w < words; w++) {
            uint64_t word = rng();
            if (w == 0) {
                word &= top_mask;
            }
            candidate <<= 64;
            candidate += from_u64(word);
        }
        if (candidate < bound) {
            return candidate;
        }
    }
}

uint64_t uniform_u64_below(uint64_t bound, Rng &rng) {
    if (bound == 0) {
        throw std::invalid_argument("uniform_u64_below requires a positive bound");
    }
    // Reject the top partial block so every residue is equally likely.
    uint64_t limit = ~uint64_t{0} - (~uint64_t{0} % bound);
    while (true) {
        uint64_t v = rng();
        if (v < limit) {
            return v % bound;
        }
    }
}

double uniform_unit(Rng &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

bool is_probable_prime(const BigInt &v) { return mpz_probab_prime_p(v.get_mpz_t(), 40) != 0; }

}  // namespace fischlin
