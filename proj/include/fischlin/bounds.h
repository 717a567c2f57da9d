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
#include <string>
#include <vector>

namespace fischlin {

// Shared tail formulas. Natural-log forms avoid underflow for large exponents.
double ln_chernoff_upper(double mu, double delta);  // -delta^2 mu / 3
double ln_chernoff_lower(double mu, double delta);  // -delta^2 mu / 2
double ln_azuma(double eps, double m);              // -eps^2 / (2m)
double chernoff_upper(double mu, double delta);
double chernoff_lower(double mu, double delta);
double azuma(double eps, double m);

/// ln(e^x + e^y + ...), stable for very negative arguments.
double log_sum_exp(const std::vector<double> &terms);

/// exp(-delta^2 2^-l k N / 3). Requires 0 < delta <= 1.
double eval_eps_dprime(double k, uint32_t l, double n, double delta);
double ln_eps_dprime(double k, uint32_t l, double n, double delta);

/// exp(-(gamma - 2 2^-l) k_eff / 2). Exceeds 1 when gamma < 2 2^-l.
double eval_eps_gamma(double gamma, uint32_t l, double k_eff);
double ln_eps_gamma(double gamma, uint32_t l, double k_eff);

struct MuLower {
    double value = 0;
    // magnitude taken of log2(log2 k / (4 gamma)), so the term always shrinks the mean
    double log_term = 0;
    bool positive = false;
};

/// 2^-l k [N - 1 - gamma (1 + 4 2^l + |log2(log2 k / (4 gamma))|) - 4 sqrt(2^l gamma N)].
MuLower eval_mu_lower(double k, uint32_t l, double n, double gamma);

struct Constraints {
    bool l_ok = false;        // l >= 14
    bool k_lower_ok = false;  // 2^(1/c) <= k
    bool k_upper_ok = false;  // log2 k <= 2^l / (256 c)
    bool all() const { return l_ok && k_lower_ok && k_upper_ok; }
};

Constraints check_constraints(double k, uint32_t l, double c_rate);

struct ClosedForm {
    double value = 0;
    double ln_value = 0;
    bool applicable = false;
};

/// 3 exp(-k / (128 c 2^l log2 k)) + 7 exp(-k / (8 2^l)).
ClosedForm eval_closed_form(double k, uint32_t l, double c_rate);

/// 4 (q + k)^2 eps_det, unclamped.
double lift_to_general(double eps_det, double q, double k);

struct BoundReport {
    double k = 0, c_rate = 0, q = 0;
    uint32_t l = 0;
    double N = 0, gamma = 0, mu = 0, m = 0, mu_lower = 0, log_term = 0;
    double delta = 0, delta_prime = 0;
    double n = 0, n_prime = 0;

    // raw values; may underflow to 0, the ln_ fields carry the exponent
    double eps_dprime = 0, eps_gamma_k = 0, eps_gamma_1mgk = 0, eps_prime = 0, eps_prime_alt = 0;
    double eps = 0, eps_det = 0, eps_ex = 0, closed_form = 0;
    double ln_eps_dprime = 0, ln_eps_gamma_k = 0, ln_eps_gamma_1mgk = 0, ln_eps_prime = 0, ln_eps_prime_alt = 0;
    double ln_eps = 0, ln_eps_det = 0, ln_eps_ex = 0, ln_closed_form = 0;

    Constraints constraints;
    bool applicable = false;     // delta in (0, 1] and mu_lower > 0
    bool eps_below_one = false;  // eps_det defined
    bool delta_prime_ok = false; // delta' in (0, 1]
    bool mu_lower_le_mu = false;
    bool exponent_order_ok = false;   // delta'^2 mu_lower >= delta^2 mu
    bool n_prime_nonneg = false;
    bool eps_prime_le_alt = false;    // eps' <= eps_prime_alt
    bool chain_le_closed_form = false;
    std::vector<std::string> warnings;

    std::string to_json() const;
};

/// Full chain at gamma = 4 2^-l and N = round(c 2^l log2 k).
BoundReport eval_chain(double k, uint32_t l, double c_rate, double q);

struct Plan {
    double k = 0, c_rate = 0, c_effective = 0;
    uint32_t l = 0;
    uint64_t N = 0;
    uint64_t base = 0;
    uint32_t r = 0;
    Constraints constraints;
    std::vector<std::string> warnings;

    std::string to_json() const;
};

/// l = max(14, ceil(log2 log2 k + log2 c + 8)), N = round(c 2^l log2 k), smallest r with base^r >= N.
Plan plan_parameters(double k, double c_rate, uint64_t base);

std::string grid_csv_header();
std::string grid_csv_row(const BoundReport &r);

}  // namespace fischlin
