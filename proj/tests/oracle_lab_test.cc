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

#include "fischlin/oracle_lab.h"

#include <gtest/gtest.h>

#include <cmath>

#include "fischlin/bounds.h"

using namespace fischlin;
using namespace fischlin::lab;

TEST(Comp, InvolutionAndUnitary) {
    for (uint32_t l = 1; l <= 6; l++) {
        auto c = comp_matrix(l);
        auto id = Eigen::MatrixXcd::Identity(c.rows(), c.cols());
        EXPECT_LT((c * c - id).cwiseAbs().maxCoeff(), 1e-12) << l;
        EXPECT_LT((c.adjoint() * c - id).cwiseAbs().maxCoeff(), 1e-12) << l;
    }
}

TEST(Comp, BottomMapsToPlus) {
    for (uint32_t l = 1; l <= 4; l++) {
        size_t d = size_t{1} << l;
        Eigen::VectorXcd out = comp_matrix(l) * basis_state(d + 1, d);
        Eigen::VectorXcd want = Eigen::VectorXcd::Zero(d + 1);
        want.head(d) = plus_state(l);
        EXPECT_LT((out - want).norm(), 1e-12);
    }
}

TEST(Comp, ZeroAtOneBit) {
    Eigen::VectorXcd out = comp_matrix(1) * basis_state(3, 0);
    EXPECT_NEAR(out[0].real(), 0.5, 1e-12);
    EXPECT_NEAR(out[1].real(), -0.5, 1e-12);
    EXPECT_NEAR(out[2].real(), 1 / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(out.norm(), 1, 1e-12);
}

TEST(CompTail, NineSixteenths) {
    EXPECT_NEAR(comp_zero_tail_exact(1, 2, 0.5), 9.0 / 16, 1e-15);
    EXPECT_NEAR(comp_zero_tail_tensor(1, 2, 0.5), 9.0 / 16, 1e-12);
}

TEST(CompTail, TensorAgreesWithBinomial) {
    for (uint32_t l = 1; l <= 3; l++) {
        for (uint32_t k = 1; k <= 5; k++) {
            for (double g : {0.1, 0.25, 0.5}) {
                EXPECT_NEAR(comp_zero_tail_exact(l, k, g), comp_zero_tail_tensor(l, k, g), 1e-12) << l << " " << k << " " << g;
            }
        }
    }
}

TEST(CompTail, FrozenValue) {
    // Pr[Bin(100, 9/16) < 75], independent evaluation
    EXPECT_NEAR(comp_zero_tail_exact(2, 100, 0.25) / 0.9999212028762762883, 1, 1e-10);
}

TEST(CompTail, SmallGammaGivesFullMassBelowK) {
    // gamma < 1/k: event is "not all zero", complement of p0^k
    double p0 = 0.5625;
    EXPECT_NEAR(comp_zero_tail_exact(2, 10, 0.05), 1 - std::pow(p0, 10), 1e-14);
}

TEST(CompTail, RejectsBadGamma) {
    EXPECT_THROW(comp_zero_tail_exact(2, 10, 0), std::invalid_argument);
    EXPECT_THROW(comp_zero_tail_exact(2, 10, 0.6), std::invalid_argument);
}

TEST(CompTail, SmallSweepReportsShape) {
    auto sw = comp_zero_tail_sweep(2, 4, 4, 64);
    EXPECT_GT(sw.points, 0u);
    EXPECT_EQ(sw.chernoff_violations, 0u);
    EXPECT_FALSE(sw.per_gamma.empty());
}

TEST(Symmetric, FullPlusCase) {
    Rng rng(1);
    for (uint32_t m = 1; m <= 3; m++) {
        auto s = build_symmetric_state(m, m, 1, rng, SymMode::PermutationRegister);
        EXPECT_NEAR(s.amp.norm(), 1, 1e-12);
        EXPECT_NEAR(register_weight(s, 0, plus_state(1)), 1, 1e-12);
    }
}

TEST(Symmetric, NormSymmetry) {
    Rng rng(2);
    for (auto mode : {SymMode::PermutationRegister, SymMode::Projected}) {
        auto s = build_symmetric_state(3, 1, 1, rng, mode, 2);
        EXPECT_LT(norm_symmetry_defect(s, 20, rng), 1e-12);
    }
}

TEST(Symmetric, MembershipInW) {
    Rng rng(3);
    for (uint32_t m = 2; m <= 4; m++) {
        for (uint32_t n = 0; n <= m; n++) {
            auto s = build_symmetric_state(m, n, 1, rng, SymMode::PermutationRegister, 2);
            EXPECT_LT(distance_from_w(s, n), 1e-12) << m << " " << n;
        }
    }
    // a computational basis state is not in W_1^2
    auto b = product_state(2, 1, basis_state(2, 1));
    EXPECT_GT(distance_from_w(b, 1), 0.1);
}

TEST(Symmetric, CapEnforced) {
    Rng rng(4);
    EXPECT_THROW(build_symmetric_state(5, 1, 2, rng, SymMode::PermutationRegister), std::invalid_argument);
    EXPECT_THROW(build_symmetric_state(13, 1, 2, rng, SymMode::Projected), std::invalid_argument);
    EXPECT_THROW(build_symmetric_state(2, 3, 1, rng, SymMode::Projected), std::invalid_argument);
}

TEST(Measure, TwoRegistersOnePlus) {
    Rng rng(5);
    auto s = build_symmetric_state(2, 1, 1, rng, SymMode::PermutationRegister, 2);
    auto c = measure_bound_check(s, 1);
    EXPECT_NEAR(c.zero_rhs, 0.25 - std::sqrt(2.0) / 2, 1e-15);
    EXPECT_LT(c.zero_rhs, 0);
    EXPECT_GE(c.plus_weight, 0.5 - 1e-10);
    EXPECT_TRUE(c.pass());
}

TEST(Measure, AllPlusZeroWeight) {
    for (uint32_t l = 1; l <= 2; l++) {
        auto s = product_state(4, l, plus_state(l));
        auto c = measure_bound_check(s, 4);
        EXPECT_NEAR(c.zero_weight, std::ldexp(1.0, -static_cast<int>(l)), 1e-12);
        EXPECT_TRUE(c.pass());
    }
}

TEST(Measure, SmallSweep) {
    auto sw = measure_sweep(3, 2, 1, 20, 7);
    EXPECT_TRUE(sw.pass());
    EXPECT_GE(sw.min_plus_margin, -1e-10);
}

TEST(Martingale, ProductPlus) {
    Rng rng(11);
    auto s = product_state(8, 1, plus_state(1));
    auto r = sequential_measure_martingale(s, {1, 2, 3, 4}, 20000, rng);
    EXPECT_NEAR(r.mean_mu_prime, 4, 1e-12);
    // i.i.d. case: exact tail is a binomial CDF, Pr[Bin(8,1/2) <= 2] = 37/256 at eps = 2
    EXPECT_NEAR(r.exact_tail[1], 37.0 / 256, 1e-12);
    EXPECT_TRUE(r.pass());
}

TEST(Martingale, DeterministicZeros) {
    Rng rng(12);
    auto s = product_state(5, 1, basis_state(2, 0));
    auto r = sequential_measure_martingale(s, {0.5, 1}, 1000, rng);
    for (size_t j = 0; j < r.eps.size(); j++) {
        EXPECT_EQ(r.exact_tail[j], 0);
        EXPECT_EQ(r.empirical_tail[j], 0);
    }
    EXPECT_NEAR(r.mean_mu_prime, 5, 1e-12);
}

TEST(Martingale, SymmetricState) {
    Rng rng(13);
    auto s = build_symmetric_state(4, 2, 1, rng, SymMode::PermutationRegister, 2);
    auto r = sequential_measure_martingale(s, {0.5, 1, 2}, 5000, rng);
    EXPECT_TRUE(r.pass());
}

TEST(Chernoff, SharedFormula) {
    Rng rng(21);
    auto r = chernoff_mc(256, 1.0 / 16, 0.5, 2000, rng);
    EXPECT_DOUBLE_EQ(r.upper_bound, chernoff_upper(16, 0.5));
    EXPECT_DOUBLE_EQ(r.lower_bound, chernoff_lower(16, 0.5));
    EXPECT_TRUE(r.pass());
}

TEST(Chernoff, CertainCoin) {
    Rng rng(22);
    auto r = chernoff_mc(64, 1, 1, 100, rng);
    EXPECT_EQ(r.upper_tail_emp, 0);
    EXPECT_TRUE(r.pass());
}

TEST(Query, UnitaryAndUniform) {
    auto r = query_unitary_smoke(1, 2, {0});
    EXPECT_LT(r.unitarity_defect, 1e-12);
    EXPECT_LT(r.marginal_defect, 1e-12);
    EXPECT_LT(r.answer_tv, 1e-12);
    EXPECT_TRUE(r.pass());
}

TEST(Query, NoQueriesEmptyDatabase) {
    auto r = query_unitary_smoke(1, 2, {});
    EXPECT_NEAR(r.empty_db_weight, 1, 1e-12);
    EXPECT_TRUE(r.pass());
}

TEST(Query, RepeatedPointConsistent) {
    auto r = query_unitary_smoke(1, 2, {1, 1, 0, 1});
    EXPECT_LT(r.repeat_defect, 1e-12);
    EXPECT_LT(r.answer_tv, 1e-12);
    EXPECT_LT(r.oversize_db_weight, 1e-12);
    EXPECT_TRUE(r.pass());
}

TEST(Query, TwoBitRange) {
    auto r = query_unitary_smoke(2, 2, {0, 1, 0});
    EXPECT_TRUE(r.pass());
}

TEST(Query, SizeCap) { EXPECT_THROW(compressed_query_unitary(2, 5), std::invalid_argument); }
