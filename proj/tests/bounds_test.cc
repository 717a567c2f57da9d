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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fischlin/bigint.h"
#include "fischlin/bounds.h"

using namespace fischlin;

TEST(bounds, eps_dprime) {
    EXPECT_NEAR(eval_eps_dprime(1024, 4, 64, 1e-9), 1.0, 1e-12);
    double k = std::ldexp(1.0, 30);
    EXPECT_NEAR(ln_eps_dprime(k, 14, 491520, 1.0 / 240), -186413.51111111111111, 1e-6);
    EXPECT_EQ(eval_eps_dprime(k, 14, 491520, 1.0 / 240), 0.0);
    EXPECT_THROW(eval_eps_dprime(4, 2, 4, 0), std::invalid_argument);
    EXPECT_THROW(eval_eps_dprime(4, 2, 4, 1.5), std::invalid_argument);
}

TEST(bounds, eps_dprime_monte_carlo) {
    // k N = 4096 Bernoulli(2^-4) cells
    const double mu = 256, delta = 0.2;
    const int trials = 10000;
    Rng rng(77);
    std::binomial_distribution<int> bin(4096, 1.0 / 16);
    int hits = 0;
    for (int t = 0; t < trials; t++) {
        hits += bin(rng) >= (1 + delta) * mu;
    }
    double bound = eval_eps_dprime(64, 4, 64, delta);
    EXPECT_DOUBLE_EQ(bound, chernoff_upper(mu, delta));
    double emp = static_cast<double>(hits) / trials;
    EXPECT_LE(emp, bound + 3 * std::sqrt(bound * (1 - bound) / trials));
}

TEST(bounds, eps_gamma) {
    EXPECT_EQ(eval_eps_gamma(2.0 / 1024, 10, 1e6), 1.0);
    EXPECT_EQ(ln_eps_gamma(4 * std::ldexp(1.0, -14), 14, std::ldexp(1.0, 30)), -65536.0);
    EXPECT_THROW(eval_eps_gamma(0, 10, 5), std::invalid_argument);
    // l=1, k=2, gamma=1/2: bound exp(+0.5) is vacuous yet above the exact 9/16
    EXPECT_NEAR(eval_eps_gamma(0.5, 1, 2), std::exp(0.5), 1e-15);
    EXPECT_GE(eval_eps_gamma(0.5, 1, 2), 9.0 / 16);
}

TEST(bounds, mu_lower_properties) {
    Rng rng(3);
    for (int t = 0; t < 2000; t++) {
        uint32_t l = 2 + static_cast<uint32_t>(uniform_u64_below(20, rng));
        double k = std::exp2(1 + 40 * uniform_unit(rng));
        double n = 2 + std::floor(1e7 * uniform_unit(rng));
        double gamma = 4 * std::exp2(-static_cast<double>(l));
        auto ml = eval_mu_lower(k, l, n, gamma);
        EXPECT_LE(ml.value, std::exp2(-static_cast<double>(l)) * k * n);
        EXPECT_GE(ml.log_term, 0);
    }
    double k = std::ldexp(1.0, 30);
    double mu = std::ldexp(1.0, -14) * k * 491520;
    auto ml = eval_mu_lower(k, 14, 491520, 4 * std::ldexp(1.0, -14));
    EXPECT_NEAR(ml.value, 31843569967.27628675, 1e-3);
    EXPECT_LE(mu - ml.value, 0.75 * k);
    // large N: ratio tends to one
    double big = 1e9;
    auto far = eval_mu_lower(1024, 10, big, 4.0 / 1024);
    EXPECT_NEAR(far.value / (1024.0 / 1024 * big), 1.0, 1e-3);
    EXPECT_THROW(eval_mu_lower(1, 10, 100, 0.1), std::invalid_argument);
}

TEST(bounds, chain_reference_point) {
    double k = std::ldexp(1.0, 30);
    auto r = eval_chain(k, 14, 1, std::ldexp(1.0, 20));
    EXPECT_EQ(r.N, 491520);
    EXPECT_TRUE(r.constraints.all());
    EXPECT_TRUE(r.applicable);
    EXPECT_TRUE(r.delta_prime_ok);
    EXPECT_TRUE(r.mu_lower_le_mu);
    EXPECT_TRUE(r.exponent_order_ok);
    EXPECT_TRUE(r.n_prime_nonneg);
    EXPECT_NEAR(r.delta, 0.01093578809369800535, 1e-14);
    EXPECT_NEAR(r.delta_prime, 0.011062402613781880175, 1e-14);
    EXPECT_NEAR(r.ln_eps, -58.088567435045457212, 1e-9);
    EXPECT_NEAR(r.ln_eps_ex, -15.11149006838273711, 1e-9);
    EXPECT_NEAR(r.closed_form, 1.1618821960558153769e-7, 1e-20);
    EXPECT_TRUE(r.chain_le_closed_form);
    EXPECT_LE(r.eps, r.closed_form);
    EXPECT_TRUE(r.warnings.empty());
}

// The alternate exponent with 2^(l+1) sits just above the true one; 2^(l+2) holds.
TEST(bounds, eps_prime_alternate_exponent) {
    double k = std::ldexp(1.0, 30);
    auto r = eval_chain(k, 14, 1, 0);
    EXPECT_FALSE(r.eps_prime_le_alt);
    double with_l2 = -r.delta_prime * r.delta_prime * r.mu_lower / std::ldexp(1.0, 16);
    EXPECT_LE(r.ln_eps_prime, with_l2);
}

TEST(bounds, constraint_flags) {
    auto r = eval_chain(std::ldexp(1.0, 20), 10, 1, 0);
    EXPECT_FALSE(r.constraints.l_ok);
    EXPECT_FALSE(r.constraints.all());
    EXPECT_FALSE(r.warnings.empty());
    EXPECT_TRUE(std::isfinite(r.ln_eps));
    EXPECT_FALSE(eval_closed_form(1.5, 14, 1).applicable);
    EXPECT_TRUE(eval_closed_form(2.5, 14, 1).applicable);
    // upper end: log2 k <= 2^14 / 256 = 64
    EXPECT_TRUE(check_constraints(std::ldexp(1.0, 64), 14, 1).k_upper_ok);
    EXPECT_FALSE(check_constraints(std::ldexp(1.0, 65), 14, 1).k_upper_ok);
}

TEST(bounds, closed_form_monotone_in_k) {
    for (uint32_t l : {14u, 16u}) {
        for (double c : {1.0, 2.0, 4.0}) {
            double prev = 10;
            for (int e = 4; e <= 40; e++) {
                double v = eval_closed_form(std::ldexp(1.0, e), l, c).ln_value;
                EXPECT_LT(v, prev);
                prev = v;
            }
        }
    }
}

TEST(bounds, grid_chain_dominated_by_closed_form) {
    int valid = 0;
    for (uint32_t l : {14u, 16u, 18u}) {
        for (double c : {1.0, 2.0, 4.0}) {
            for (int e = 20; e <= 34; e++) {
                auto r = eval_chain(std::ldexp(1.0, e), l, c, 0);
                if (!r.constraints.all()) {
                    continue;
                }
                valid++;
                EXPECT_LE(r.ln_eps, r.ln_closed_form + 1e-12) << "l=" << l << " c=" << c << " e=" << e;
                EXPECT_TRUE(r.applicable);
                EXPECT_TRUE(r.delta_prime_ok);
                EXPECT_TRUE(r.mu_lower_le_mu);
                EXPECT_TRUE(r.exponent_order_ok);
                EXPECT_TRUE(r.n_prime_nonneg);
                if (r.eps_below_one) {
                    EXPECT_TRUE(std::isfinite(r.ln_eps_det));
                }
            }
        }
    }
    EXPECT_GT(valid, 100);
    // negligible once k is large against 2^l log k
    EXPECT_LT(eval_chain(std::ldexp(1.0, 34), 14, 1, 0).ln_eps_det, -700);
}

TEST(bounds, lift_values) {
    EXPECT_DOUBLE_EQ(lift_to_general(0.01, 0, 1), 0.04);
    double a = lift_to_general(1e-30, 1e9, 64), b = lift_to_general(1e-30, 2e9, 64);
    EXPECT_NEAR(b / a, 4.0, 1e-6);
    EXPECT_THROW(lift_to_general(-1, 0, 1), std::invalid_argument);
}

TEST(bounds, plan_examples) {
    auto p = plan_parameters(std::ldexp(1.0, 30), 1, 509);
    EXPECT_EQ(p.l, 14u);
    EXPECT_EQ(p.N, 491520u);
    EXPECT_EQ(p.r, 3u);
    EXPECT_TRUE(p.constraints.all());
    EXPECT_TRUE(p.warnings.empty());
    auto small = plan_parameters(4, 1, 509);
    EXPECT_EQ(small.l, 14u);
    EXPECT_TRUE(small.constraints.k_lower_ok);
    auto one = plan_parameters(4, 1, 1u << 20);
    EXPECT_EQ(one.r, 1u);
    // log2 log2 k + 8 > 14 once log2 k > 64
    auto wide = plan_parameters(std::ldexp(1.0, 100), 1, 2);
    EXPECT_EQ(wide.l, 15u);
    // rounding moves c
    auto odd = plan_parameters(3, 1, 509);
    EXPECT_FALSE(odd.warnings.empty());
    EXPECT_THROW(plan_parameters(1, 1, 509), std::invalid_argument);
}

TEST(bounds, grid_csv_shape) {
    auto r = eval_chain(std::ldexp(1.0, 24), 14, 1, 0);
    std::string head = grid_csv_header(), row = grid_csv_row(r);
    EXPECT_EQ(std::count(head.begin(), head.end(), ','), std::count(row.begin(), row.end(), ','));
    EXPECT_NE(r.to_json().find("\"chain_le_closed_form\":true"), std::string::npos);
}
