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

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "fischlin/bigint.h"

namespace fischlin::lab {

// Dense amplitude cap shared by every check.
constexpr size_t kMaxAmplitudes = size_t{1} << 24;

/// Local compressed register of dimension 2^l + 1; index 2^l is the empty symbol.
Eigen::MatrixXcd comp_matrix(uint32_t l);
Eigen::VectorXcd plus_state(uint32_t l);
Eigen::VectorXcd basis_state(size_t dim, size_t index);

// ---- tail of (Comp|0^l>)^k ------------------------------------------------

/// Pr[Bin(k, (1 - 2^-l)^2) < (1 - gamma) k] from log-space pmf terms. gamma in (0, 1/2].
double comp_zero_tail_exact(uint32_t l, uint64_t k, double gamma);
/// Same probability read off the expanded tensor product; (2^l + 1)^k entries.
double comp_zero_tail_tensor(uint32_t l, uint32_t k, double gamma);
/// exp(-(gamma - 2 2^-l) k / 2), the claimed bound.
double comp_zero_tail_bound(uint32_t l, uint64_t k, double gamma);
/// exp(-x^2 k / (2 p0)) with x = p0 - (1 - gamma): the plain lower-tail Chernoff value.
double comp_zero_tail_chernoff(uint32_t l, uint64_t k, double gamma);

struct TailSweep {
    uint64_t points = 0;
    uint64_t violations = 0;
    uint64_t chernoff_violations = 0;
    // first violation in sweep order (l, k, gamma)
    uint32_t first_l = 0;
    uint64_t first_k = 0;
    double first_gamma = 0, first_tail = 0, first_bound = 0;
    double worst_ratio = 0;  // max tail / bound
    std::vector<std::string> per_gamma;  // "l=5 gamma=0.125 violations=..." lines

    bool pass() const { return violations == 0; }
    std::string to_json() const;
};

/// l in [l_lo, l_hi], k in [k_lo, k_hi], gamma from {4 2^-l, 1/4, 1/2} keeping gamma > 2 2^-l.
TailSweep comp_zero_tail_sweep(uint32_t l_lo, uint32_t l_hi, uint64_t k_lo, uint64_t k_hi);

// ---- symmetric states -----------------------------------------------------

/// Amplitudes over m registers of dim 2^l (register 1 most significant), followed by an
/// environment register and an optional permutation register.
struct TensorState {
    uint32_t m = 0;
    uint32_t l = 0;
    size_t env_dim = 1;
    size_t perm_dim = 1;
    Eigen::VectorXcd amp;

    size_t local_dim() const { return size_t{1} << l; }
    size_t tail_dim() const { return env_dim * perm_dim; }
    size_t data_dim() const;
};

enum class SymMode { PermutationRegister, Projected };

/// Random state in W_n^m (x) C^env, symmetrized by adjoining |pi> or by projecting.
TensorState build_symmetric_state(uint32_t m, uint32_t n, uint32_t l, Rng &rng, SymMode mode, size_t env_dim = 1);

TensorState product_state(uint32_t m, uint32_t l, const Eigen::VectorXcd &local);

/// Registers permuted by perm: register j moves to position perm[j].
Eigen::VectorXcd permute_registers(const TensorState &s, const std::vector<uint32_t> &perm);

/// ||<v|_reg psi||^2, reg is 0-based.
double register_weight(const TensorState &s, uint32_t reg, const Eigen::VectorXcd &v);

/// ||P_W psi - psi|| with P_W the projector onto W_n^m on the data registers.
double distance_from_w(const TensorState &s, uint32_t n);

/// max over trials and permutations of | ||A pi psi|| - ||A psi|| | for random diagonal A.
double norm_symmetry_defect(const TensorState &s, uint32_t trials, Rng &rng);

struct MeasureCheck {
    double plus_weight = 0, zero_weight = 0;
    double plus_floor = 0, zero_rhs = 0;
    bool plus_ok = false, zero_ok = false;
    bool pass() const { return plus_ok && zero_ok; }
};

MeasureCheck measure_bound_check(const TensorState &s, uint32_t n);

struct MeasureSweep {
    uint32_t m = 0, n = 0, l = 0, trials = 0;
    uint64_t seed = 0;
    uint32_t plus_failures = 0, zero_failures = 0;
    double min_plus_margin = 0, min_zero_margin = 0;
    bool pass() const { return plus_failures == 0 && zero_failures == 0; }
    std::string to_json() const;
};

MeasureSweep measure_sweep(uint32_t m, uint32_t n, uint32_t l, uint32_t trials, uint64_t seed, size_t env_dim = 2);

// ---- martingale -----------------------------------------------------------

struct MartingaleReport {
    uint32_t m = 0;
    uint64_t trials = 0;
    std::vector<double> eps, exact_tail, empirical_tail, bound;
    double mean_mu_prime = 0;
    bool exact_ok = false, empirical_ok = false;
    bool pass() const { return exact_ok && empirical_ok; }
    std::string to_json() const;
};

/// Measures registers 1..m in order; X_i = [outcome = 0^l], Z_i = E[X_i | X_<i], mu' = sum Z_i.
/// Tail event: sum X_i <= mu' - eps. Compared with exp(-eps^2 / (2m)).
MartingaleReport sequential_measure_martingale(const TensorState &s, const std::vector<double> &eps, uint64_t trials, Rng &rng);

// ---- Chernoff -------------------------------------------------------------

struct ChernoffReport {
    uint64_t n = 0, trials = 0;
    double p = 0, delta = 0, mu = 0;
    double upper_tail_emp = 0, lower_tail_emp = 0;
    double upper_bound = 0, lower_bound = 0;
    bool pass() const;
    std::string to_json() const;
};

ChernoffReport chernoff_mc(uint64_t n, double p, double delta, uint64_t trials, Rng &rng);

// ---- compressed query -----------------------------------------------------

/// O = sum_x |x><x| (x) Comp_Dx CNOT_{Y,Dx} Comp_Dx on X (x) Y (x) D.
Eigen::MatrixXcd compressed_query_unitary(uint32_t l, uint32_t domain);

struct QuerySmoke {
    uint32_t l = 0, domain = 0;
    std::vector<uint32_t> queries;
    double unitarity_defect = 0;
    double marginal_defect = 0;      // single query output vs uniform
    double empty_db_weight = 0;      // weight on all-empty database before any query
    double repeat_defect = 0;        // two unmeasured queries at the same x return the input
    double answer_tv = 0;            // exact answer law vs lazily sampled function
    double oversize_db_weight = 0;   // weight on databases larger than the query count
    bool pass() const;
    std::string to_json() const;
};

QuerySmoke query_unitary_smoke(uint32_t l, uint32_t domain, const std::vector<uint32_t> &queries);

}  // namespace fischlin::lab
