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

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "fischlin/bounds.h"
#include "json.hpp"

namespace fischlin::lab {

using cd = std::complex<double>;
using nlohmann::json;

namespace {

size_t ipow(size_t b, uint32_t e) {
    size_t r = 1;
    for (uint32_t j = 0; j < e; j++) {
        if (r > kMaxAmplitudes / b) {
            throw std::invalid_argument("dense state exceeds the amplitude cap");
        }
        r *= b;
    }
    return r;
}

size_t factorial(uint32_t m) {
    size_t r = 1;
    for (uint32_t j = 2; j <= m; j++) {
        r *= j;
    }
    return r;
}

// Box-Muller on the portable uniform sampler.
cd gaussian(Rng &rng) {
    double u1 = uniform_unit(rng), u2 = uniform_unit(rng);
    double r = std::sqrt(-2 * std::log1p(-u1));
    return {r * std::cos(2 * M_PI * u2), r * std::sin(2 * M_PI * u2)};
}

Eigen::MatrixXd walsh_hadamard(uint32_t l) {
    size_t d = size_t{1} << l;
    Eigen::MatrixXd h(d, d);
    double s = 1 / std::sqrt(static_cast<double>(d));
    for (size_t x = 0; x < d; x++) {
        for (size_t y = 0; y < d; y++) {
            h(x, y) = (__builtin_popcountll(x & y) % 2 ? -s : s);
        }
    }
    return h;
}

size_t digit(size_t y, uint32_t reg, uint32_t m, uint32_t l) {
    return (y >> (l * (m - 1 - reg))) & ((size_t{1} << l) - 1);
}

uint32_t zero_digits(size_t y, uint32_t m, uint32_t l) {
    uint32_t z = 0;
    for (uint32_t j = 0; j < m; j++) {
        z += digit(y, j, m, l) == 0;
    }
    return z;
}

// Applies a real d x d matrix to one data register in place.
void apply_local(Eigen::VectorXcd &amp, uint32_t m, uint32_t l, size_t tail, uint32_t reg, const Eigen::MatrixXd &mat) {
    size_t d = size_t{1} << l;
    size_t stride = (size_t{1} << (l * (m - 1 - reg)));
    size_t data = size_t{1} << (l * m);
    std::vector<cd> buf(d);
    for (size_t y = 0; y < data; y++) {
        if (digit(y, reg, m, l) != 0) {
            continue;
        }
        for (size_t t = 0; t < tail; t++) {
            for (size_t a = 0; a < d; a++) {
                buf[a] = amp[(y + a * stride) * tail + t];
            }
            for (size_t a = 0; a < d; a++) {
                cd acc = 0;
                for (size_t b = 0; b < d; b++) {
                    acc += mat(a, b) * buf[b];
                }
                amp[(y + a * stride) * tail + t] = acc;
            }
        }
    }
}

Eigen::VectorXcd permute_data(const Eigen::VectorXcd &amp, uint32_t m, uint32_t l, size_t tail, const std::vector<uint32_t> &perm) {
    size_t data = size_t{1} << (l * m);
    Eigen::VectorXcd out(amp.size());
    for (size_t y = 0; y < data; y++) {
        size_t moved = 0;
        for (uint32_t j = 0; j < m; j++) {
            moved |= digit(y, j, m, l) << (l * (m - 1 - perm[j]));
        }
        for (size_t t = 0; t < tail; t++) {
            out[moved * tail + t] = amp[y * tail + t];
        }
    }
    return out;
}

std::vector<std::vector<uint32_t>> all_permutations(uint32_t m) {
    std::vector<uint32_t> p(m);
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<uint32_t>> out;
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

}  // namespace

Eigen::VectorXcd basis_state(size_t dim, size_t index) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    v[index] = 1;
    return v;
}

Eigen::VectorXcd plus_state(uint32_t l) {
    size_t d = size_t{1} << l;
    return Eigen::VectorXcd::Constant(d, 1 / std::sqrt(static_cast<double>(d)));
}

Eigen::MatrixXcd comp_matrix(uint32_t l) {
    if (l < 1 || l > 12) {
        throw std::invalid_argument("l must lie in [1, 12]");
    }
    size_t d = size_t{1} << l;
    Eigen::VectorXcd plus = Eigen::VectorXcd::Zero(d + 1);
    plus.head(d) = plus_state(l);
    Eigen::VectorXcd bot = basis_state(d + 1, d);
    Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d + 1, d + 1);
    return bot * plus.adjoint() + plus * bot.adjoint() + (id - plus * plus.adjoint() - bot * bot.adjoint());
}

// ---- tails ----------------------------------------------------------------

namespace {

void check_gamma(double gamma) {
    if (!(gamma > 0) || gamma > 0.5) {
        throw std::invalid_argument("gamma must lie in (0, 1/2]");
    }
}

double p_zero(uint32_t l) {
    double q = 1 - std::ldexp(1.0, -static_cast<int>(l));
    return q * q;
}

// number of zero coordinates must stay below this for the event
double tail_cut(uint64_t k, double gamma) { return (1 - gamma) * static_cast<double>(k); }

}  // namespace

double comp_zero_tail_exact(uint32_t l, uint64_t k, double gamma) {
    check_gamma(gamma);
    double cut = tail_cut(k, gamma);
    if (cut <= 0) {
        return 0;
    }
    // largest s with s < cut
    int64_t top = static_cast<int64_t>(std::ceil(cut)) - 1;
    top = std::min<int64_t>(top, static_cast<int64_t>(k));
    double p = p_zero(l);
    double kk = static_cast<double>(k);
    double ln_top = std::lgamma(kk + 1) - std::lgamma(top + 1.0) - std::lgamma(kk - top + 1) + top * std::log(p) +
                    (kk - top) * std::log1p(-p);
    // walk down from the top term; ratios pmf(s-1)/pmf(s) = s (1-p) / ((k-s+1) p)
    double sum = 1, term = 1, odds = (1 - p) / p;
    for (int64_t s = top; s > 0; s--) {
        term *= static_cast<double>(s) / (kk - s + 1) * odds;
        sum += term;
        if (term < 1e-18 * sum) {
            break;
        }
    }
    return std::exp(ln_top + std::log(sum));
}

double comp_zero_tail_tensor(uint32_t l, uint32_t k, double gamma) {
    check_gamma(gamma);
    size_t dim = (size_t{1} << l) + 1;
    size_t total = ipow(dim, k);
    Eigen::VectorXcd c = comp_matrix(l) * basis_state(dim, 0);
    double cut = tail_cut(k, gamma);
    double mass = 0;
    for (size_t idx = 0; idx < total; idx++) {
        size_t rest = idx;
        cd a = 1;
        uint32_t zeros = 0;
        for (uint32_t j = 0; j < k; j++) {
            size_t dg = rest % dim;
            rest /= dim;
            a *= c[dg];
            zeros += dg == 0;
        }
        if (zeros < cut) {
            mass += std::norm(a);
        }
    }
    return mass;
}

double comp_zero_tail_bound(uint32_t l, uint64_t k, double gamma) { return eval_eps_gamma(gamma, l, static_cast<double>(k)); }

double comp_zero_tail_chernoff(uint32_t l, uint64_t k, double gamma) {
    double p = p_zero(l);
    double x = p - (1 - gamma);
    if (x <= 0) {
        return 1;
    }
    return std::exp(-x * x * static_cast<double>(k) / (2 * p));
}

TailSweep comp_zero_tail_sweep(uint32_t l_lo, uint32_t l_hi, uint64_t k_lo, uint64_t k_hi) {
    TailSweep out;
    for (uint32_t l = l_lo; l <= l_hi; l++) {
        double floor = 2 * std::ldexp(1.0, -static_cast<int>(l));
        std::vector<double> gammas;
        for (double g : {4 * std::ldexp(1.0, -static_cast<int>(l)), 0.25, 0.5}) {
            if (g > floor && g <= 0.5 && std::find(gammas.begin(), gammas.end(), g) == gammas.end()) {
                gammas.push_back(g);
            }
        }
        for (double g : gammas) {
            uint64_t bad = 0;
            for (uint64_t k = k_lo; k <= k_hi; k++) {
                double tail = comp_zero_tail_exact(l, k, g);
                double bound = comp_zero_tail_bound(l, k, g);
                out.points++;
                out.worst_ratio = std::max(out.worst_ratio, tail / bound);
                if (tail > bound * (1 + 1e-12)) {
                    if (out.violations == 0) {
                        out.first_l = l;
                        out.first_k = k;
                        out.first_gamma = g;
                        out.first_tail = tail;
                        out.first_bound = bound;
                    }
                    out.violations++;
                    bad++;
                }
                if (tail > comp_zero_tail_chernoff(l, k, g) * (1 + 1e-12)) {
                    out.chernoff_violations++;
                }
            }
            std::ostringstream ss;
            ss << "l=" << l << " gamma=" << g << " violations=" << bad;
            out.per_gamma.push_back(ss.str());
        }
    }
    return out;
}

std::string TailSweep::to_json() const {
    json j = {{"check", "comp_zero_tail"},
              {"measured", {{"points", points}, {"violations", violations}, {"worst_ratio", worst_ratio},
                            {"chernoff_violations", chernoff_violations}, {"per_gamma", per_gamma}}},
              {"bound", "exp(-(gamma - 2*2^-l) k / 2)"},
              {"pass", pass()}};
    if (violations > 0) {
        j["measured"]["first_violation"] = {{"l", first_l}, {"k", first_k}, {"gamma", first_gamma},
                                            {"tail", first_tail}, {"bound", first_bound}};
    }
    return j.dump();
}

// ---- symmetric states -----------------------------------------------------

size_t TensorState::data_dim() const { return size_t{1} << (l * m); }

TensorState product_state(uint32_t m, uint32_t l, const Eigen::VectorXcd &local) {
    TensorState s;
    s.m = m;
    s.l = l;
    size_t d = s.local_dim();
    if (static_cast<size_t>(local.size()) != d) {
        throw std::invalid_argument("local state has the wrong dimension");
    }
    size_t data = ipow(d, m);
    s.amp = Eigen::VectorXcd(data);
    for (size_t y = 0; y < data; y++) {
        cd a = 1;
        for (uint32_t j = 0; j < m; j++) {
            a *= local[digit(y, j, m, l)];
        }
        s.amp[y] = a;
    }
    return s;
}

TensorState build_symmetric_state(uint32_t m, uint32_t n, uint32_t l, Rng &rng, SymMode mode, size_t env_dim) {
    if (m < 1 || n > m || l < 1 || env_dim < 1) {
        throw std::invalid_argument("need 1 <= m, n <= m, l >= 1");
    }
    if (mode == SymMode::PermutationRegister && m * l > 8) {
        throw std::invalid_argument("permutation register supported for m * l <= 8");
    }
    if (static_cast<size_t>(m) * l > 24) {
        throw std::invalid_argument("m * l exceeds 24 amplitude bits");
    }
    TensorState s;
    s.m = m;
    s.l = l;
    s.env_dim = env_dim;
    size_t data = ipow(s.local_dim(), m);
    if (data * env_dim > kMaxAmplitudes) {
        throw std::invalid_argument("dense state exceeds the amplitude cap");
    }
    // In the Hadamard frame |+^l> is |0>, so W_n^m is spanned by strings with >= n zero digits.
    Eigen::VectorXcd base = Eigen::VectorXcd::Zero(data * env_dim);
    for (size_t y = 0; y < data; y++) {
        if (zero_digits(y, m, l) < n) {
            continue;
        }
        for (size_t e = 0; e < env_dim; e++) {
            base[y * env_dim + e] = gaussian(rng);
        }
    }
    Eigen::MatrixXd h = walsh_hadamard(l);
    for (uint32_t j = 0; j < m; j++) {
        apply_local(base, m, l, env_dim, j, h);
    }
    base.normalize();

    auto perms = all_permutations(m);
    if (mode == SymMode::Projected) {
        Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(base.size());
        for (const auto &p : perms) {
            acc += permute_data(base, m, l, env_dim, p);
        }
        double norm = acc.norm();
        if (norm < 1e-9) {
            throw std::runtime_error("symmetric projection vanished");
        }
        s.amp = acc / norm;
        return s;
    }
    s.perm_dim = perms.size();
    if (base.size() * s.perm_dim > kMaxAmplitudes) {
        throw std::invalid_argument("dense state exceeds the amplitude cap");
    }
    s.amp = Eigen::VectorXcd::Zero(base.size() * s.perm_dim);
    double scale = 1 / std::sqrt(static_cast<double>(factorial(m)));
    for (size_t g = 0; g < perms.size(); g++) {
        Eigen::VectorXcd moved = permute_data(base, m, l, env_dim, perms[g]);
        for (size_t idx = 0; idx < static_cast<size_t>(moved.size()); idx++) {
            s.amp[idx * s.perm_dim + g] = scale * moved[idx];
        }
    }
    return s;
}

Eigen::VectorXcd permute_registers(const TensorState &s, const std::vector<uint32_t> &perm) {
    return permute_data(s.amp, s.m, s.l, s.tail_dim(), perm);
}

double register_weight(const TensorState &s, uint32_t reg, const Eigen::VectorXcd &v) {
    size_t d = s.local_dim(), tail = s.tail_dim(), data = s.data_dim();
    size_t stride = size_t{1} << (s.l * (s.m - 1 - reg));
    double w = 0;
    for (size_t y = 0; y < data; y++) {
        if (digit(y, reg, s.m, s.l) != 0) {
            continue;
        }
        for (size_t t = 0; t < tail; t++) {
            cd acc = 0;
            for (size_t a = 0; a < d; a++) {
                acc += std::conj(v[a]) * s.amp[(y + a * stride) * tail + t];
            }
            w += std::norm(acc);
        }
    }
    return w;
}

double distance_from_w(const TensorState &s, uint32_t n) {
    Eigen::VectorXcd v = s.amp;
    Eigen::MatrixXd h = walsh_hadamard(s.l);
    size_t tail = s.tail_dim();
    for (uint32_t j = 0; j < s.m; j++) {
        apply_local(v, s.m, s.l, tail, j, h);
    }
    for (size_t y = 0; y < s.data_dim(); y++) {
        if (zero_digits(y, s.m, s.l) < n) {
            for (size_t t = 0; t < tail; t++) {
                v[y * tail + t] = 0;
            }
        }
    }
    for (uint32_t j = 0; j < s.m; j++) {
        apply_local(v, s.m, s.l, tail, j, h);
    }
    return (v - s.amp).norm();
}

double norm_symmetry_defect(const TensorState &s, uint32_t trials, Rng &rng) {
    auto perms = all_permutations(s.m);
    size_t tail = s.tail_dim();
    double worst = 0;
    for (uint32_t t = 0; t < trials; t++) {
        std::vector<cd> diag(s.data_dim());
        for (auto &x : diag) {
            x = gaussian(rng);
        }
        auto apply_a = [&](const Eigen::VectorXcd &v) {
            double acc = 0;
            for (size_t idx = 0; idx < static_cast<size_t>(v.size()); idx++) {
                acc += std::norm(diag[idx / tail] * v[idx]);
            }
            return std::sqrt(acc);
        };
        double ref = apply_a(s.amp);
        for (const auto &p : perms) {
            worst = std::max(worst, std::abs(apply_a(permute_registers(s, p)) - ref));
        }
    }
    return worst;
}

MeasureCheck measure_bound_check(const TensorState &s, uint32_t n) {
    MeasureCheck c;
    double m = s.m;
    c.plus_weight = register_weight(s, 0, plus_state(s.l));
    c.zero_weight = register_weight(s, 0, basis_state(s.local_dim(), 0));
    c.plus_floor = n / m;
    c.zero_rhs = std::ldexp(1.0, -static_cast<int>(s.l)) * n / m -
                 std::exp2(1 - s.l / 2.0) * std::sqrt(n * (m - n) / (m * m));
    c.plus_ok = c.plus_weight >= c.plus_floor - 1e-10;
    c.zero_ok = c.zero_weight >= c.zero_rhs - 1e-12;
    return c;
}

MeasureSweep measure_sweep(uint32_t m, uint32_t n, uint32_t l, uint32_t trials, uint64_t seed, size_t env_dim) {
    MeasureSweep out;
    out.m = m;
    out.n = n;
    out.l = l;
    out.trials = trials;
    out.seed = seed;
    out.min_plus_margin = out.min_zero_margin = INFINITY;
    Rng rng(seed);
    for (uint32_t t = 0; t < trials; t++) {
        auto s = build_symmetric_state(m, n, l, rng, SymMode::PermutationRegister, env_dim);
        auto c = measure_bound_check(s, n);
        out.plus_failures += !c.plus_ok;
        out.zero_failures += !c.zero_ok;
        out.min_plus_margin = std::min(out.min_plus_margin, c.plus_weight - c.plus_floor);
        out.min_zero_margin = std::min(out.min_zero_margin, c.zero_weight - c.zero_rhs);
    }
    return out;
}

std::string MeasureSweep::to_json() const {
    return json{{"check", "measure"},
                {"params", {{"m", m}, {"n", n}, {"l", l}, {"trials", trials}, {"seed", seed}}},
                {"measured", {{"plus_failures", plus_failures}, {"zero_failures", zero_failures},
                              {"min_plus_margin", min_plus_margin}, {"min_zero_margin", min_zero_margin}}},
                {"bound", {{"plus", "n/m"}, {"zero", "2^-l n/m - 2^(1-l/2) sqrt(n(m-n)/m^2)"}}},
                {"pass", pass()}}
        .dump();
}

// ---- martingale -----------------------------------------------------------

MartingaleReport sequential_measure_martingale(const TensorState &s, const std::vector<double> &eps, uint64_t trials, Rng &rng) {
    const uint32_t m = s.m;
    if (m > 24) {
        throw std::invalid_argument("too many registers to condition exactly");
    }
    size_t patterns = size_t{1} << m;
    // pattern bit for register j sits at position m-1-j so prefixes are high bits
    std::vector<double> prob(patterns, 0);
    size_t tail = s.tail_dim();
    for (size_t y = 0; y < s.data_dim(); y++) {
        size_t b = 0;
        for (uint32_t j = 0; j < m; j++) {
            if (digit(y, j, m, s.l) == 0) {
                b |= size_t{1} << (m - 1 - j);
            }
        }
        for (size_t t = 0; t < tail; t++) {
            prob[b] += std::norm(s.amp[y * tail + t]);
        }
    }
    // prefix[i][v]: probability that the first i outcomes read v
    std::vector<std::vector<double>> prefix(m + 1);
    for (uint32_t i = 0; i <= m; i++) {
        prefix[i].assign(size_t{1} << i, 0);
        for (size_t b = 0; b < patterns; b++) {
            prefix[i][b >> (m - i)] += prob[b];
        }
    }
    auto cond = [&](uint32_t i, size_t pre) {
        // P[X_{i+1} = 1 | first i outcomes = pre]
        double den = prefix[i][pre];
        return den > 0 ? prefix[i + 1][(pre << 1) | 1] / den : 0.0;
    };

    MartingaleReport r;
    r.m = m;
    r.trials = trials;
    r.eps = eps;
    r.exact_tail.assign(eps.size(), 0);
    r.empirical_tail.assign(eps.size(), 0);
    for (double e : eps) {
        r.bound.push_back(azuma(e, m));
    }
    for (size_t b = 0; b < patterns; b++) {
        if (prob[b] <= 0) {
            continue;
        }
        double mu = 0;
        for (uint32_t i = 0; i < m; i++) {
            mu += cond(i, b >> (m - i));
        }
        r.mean_mu_prime += prob[b] * mu;
        double sum = __builtin_popcountll(b);
        for (size_t j = 0; j < eps.size(); j++) {
            if (sum <= mu - eps[j] + 1e-9) {
                r.exact_tail[j] += prob[b];
            }
        }
    }
    std::vector<uint64_t> hits(eps.size(), 0);
    for (uint64_t t = 0; t < trials; t++) {
        size_t pre = 0;
        double mu = 0, sum = 0;
        for (uint32_t i = 0; i < m; i++) {
            double z = cond(i, pre);
            mu += z;
            int x = uniform_unit(rng) < z;
            sum += x;
            pre = (pre << 1) | static_cast<size_t>(x);
        }
        for (size_t j = 0; j < eps.size(); j++) {
            hits[j] += sum <= mu - eps[j] + 1e-9;
        }
    }
    r.exact_ok = r.empirical_ok = true;
    for (size_t j = 0; j < eps.size(); j++) {
        double b = std::min(1.0, r.bound[j]);
        r.empirical_tail[j] = trials ? static_cast<double>(hits[j]) / trials : 0;
        r.exact_ok &= r.exact_tail[j] <= r.bound[j] + 1e-12;
        double slack = trials ? 3 * std::sqrt(b * (1 - b) / trials) : 0;
        r.empirical_ok &= r.empirical_tail[j] <= r.bound[j] + slack;
    }
    return r;
}

std::string MartingaleReport::to_json() const {
    return json{{"check", "martingale"},
                {"params", {{"m", m}, {"trials", trials}, {"eps", eps}}},
                {"measured", {{"exact_tail", exact_tail}, {"empirical_tail", empirical_tail}, {"mean_mu_prime", mean_mu_prime}}},
                {"bound", bound},
                {"pass", pass()}}
        .dump();
}

// ---- Chernoff -------------------------------------------------------------

ChernoffReport chernoff_mc(uint64_t n, double p, double delta, uint64_t trials, Rng &rng) {
    if (!(p >= 0 && p <= 1) || !(delta > 0) || trials == 0) {
        throw std::invalid_argument("need p in [0, 1], delta > 0, trials > 0");
    }
    ChernoffReport r;
    r.n = n;
    r.p = p;
    r.delta = delta;
    r.trials = trials;
    r.mu = static_cast<double>(n) * p;
    r.upper_bound = chernoff_upper(r.mu, delta);
    r.lower_bound = chernoff_lower(r.mu, delta);
    uint64_t up = 0, lo = 0;
    for (uint64_t t = 0; t < trials; t++) {
        uint64_t x = 0;
        for (uint64_t j = 0; j < n; j++) {
            x += uniform_unit(rng) < p;
        }
        up += x >= (1 + delta) * r.mu;
        lo += x <= (1 - delta) * r.mu;
    }
    r.upper_tail_emp = static_cast<double>(up) / trials;
    r.lower_tail_emp = static_cast<double>(lo) / trials;
    return r;
}

bool ChernoffReport::pass() const {
    auto ok = [&](double emp, double bound) {
        double b = std::min(1.0, bound);
        return emp <= bound + 3 * std::sqrt(b * (1 - b) / trials);
    };
    return ok(upper_tail_emp, upper_bound) && ok(lower_tail_emp, lower_bound);
}

std::string ChernoffReport::to_json() const {
    return json{{"check", "chernoff"},
                {"params", {{"n", n}, {"p", p}, {"delta", delta}, {"trials", trials}}},
                {"measured", {{"upper_tail", upper_tail_emp}, {"lower_tail", lower_tail_emp}}},
                {"bound", {{"upper", upper_bound}, {"lower", lower_bound}}},
                {"pass", pass()}}
        .dump();
}

// ---- compressed query -----------------------------------------------------

namespace {

// Comp on D_x, then CNOT from D_x into Y, then Comp again; on Y (x) D_x, index y * (d+1) + dx.
Eigen::MatrixXcd local_query(uint32_t l) {
    size_t d = size_t{1} << l, e = d + 1;
    Eigen::MatrixXcd comp = comp_matrix(l);
    Eigen::MatrixXcd c2 = Eigen::MatrixXcd::Zero(d * e, d * e);
    Eigen::MatrixXcd cnot = Eigen::MatrixXcd::Zero(d * e, d * e);
    for (size_t y = 0; y < d; y++) {
        c2.block(y * e, y * e, e, e) = comp;
        for (size_t dx = 0; dx < e; dx++) {
            size_t y2 = dx < d ? (y ^ dx) : y;
            cnot(y2 * e + dx, y * e + dx) = 1;
        }
    }
    return c2 * cnot * c2;
}

size_t db_digit(size_t db, uint32_t x, uint32_t domain, size_t e) {
    for (uint32_t j = x + 1; j < domain; j++) {
        db /= e;
    }
    return db % e;
}

size_t db_stride(uint32_t x, uint32_t domain, size_t e) {
    size_t s = 1;
    for (uint32_t j = x + 1; j < domain; j++) {
        s *= e;
    }
    return s;
}

}  // namespace

Eigen::MatrixXcd compressed_query_unitary(uint32_t l, uint32_t domain) {
    size_t d = size_t{1} << l, e = d + 1;
    size_t db = ipow(e, domain);
    size_t dim = domain * d * db;
    if (dim > 4096) {
        throw std::invalid_argument("query unitary limited to 4096 dimensions");
    }
    Eigen::MatrixXcd loc = local_query(l);
    Eigen::MatrixXcd o = Eigen::MatrixXcd::Zero(dim, dim);
    for (uint32_t x = 0; x < domain; x++) {
        size_t stride = db_stride(x, domain, e);
        for (size_t y = 0; y < d; y++) {
            for (size_t D = 0; D < db; D++) {
                size_t dx = db_digit(D, x, domain, e);
                size_t col = (x * d + y) * db + D;
                size_t base = D - dx * stride;
                for (size_t y2 = 0; y2 < d; y2++) {
                    for (size_t dx2 = 0; dx2 < e; dx2++) {
                        cd a = loc(y2 * e + dx2, y * e + dx);
                        if (a != cd(0)) {
                            o((x * d + y2) * db + base + dx2 * stride, col) += a;
                        }
                    }
                }
            }
        }
    }
    return o;
}

QuerySmoke query_unitary_smoke(uint32_t l, uint32_t domain, const std::vector<uint32_t> &queries) {
    QuerySmoke r;
    r.l = l;
    r.domain = domain;
    r.queries = queries;
    size_t d = size_t{1} << l, e = d + 1;
    size_t db = ipow(e, domain);
    for (uint32_t x : queries) {
        if (x >= domain) {
            throw std::invalid_argument("query outside the domain");
        }
    }
    Eigen::MatrixXcd o = compressed_query_unitary(l, domain);
    size_t dim = o.rows();
    r.unitarity_defect = (o.adjoint() * o - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff();

    // all-empty database index
    size_t empty = 0;
    for (uint32_t x = 0; x < domain; x++) {
        empty = empty * e + d;
    }
    for (uint32_t x = 0; x < domain; x++) {
        for (size_t y = 0; y < d; y++) {
            Eigen::VectorXcd in = basis_state(dim, (x * d + y) * db + empty);
            Eigen::VectorXcd out = o * in;
            if (y == 0) {
                for (size_t h = 0; h < d; h++) {
                    double pr = 0;
                    for (size_t D = 0; D < db; D++) {
                        pr += std::norm(out[(x * d + h) * db + D]);
                    }
                    r.marginal_defect = std::max(r.marginal_defect, std::abs(pr - 1.0 / d));
                }
            }
            r.repeat_defect = std::max(r.repeat_defect, (o * out - in).norm());
        }
    }

    // Classical-basis queries: fresh Y = |0>, apply, measure Y.
    Eigen::MatrixXcd loc = local_query(l);
    std::map<std::vector<uint32_t>, Eigen::VectorXcd> branches;
    branches[{}] = basis_state(db, empty);
    r.empty_db_weight = std::norm(branches[{}][empty]);
    for (uint32_t x : queries) {
        size_t stride = db_stride(x, domain, e);
        std::map<std::vector<uint32_t>, Eigen::VectorXcd> next;
        for (const auto &[answers, phi] : branches) {
            for (size_t h = 0; h < d; h++) {
                Eigen::VectorXcd out = Eigen::VectorXcd::Zero(db);
                for (size_t D = 0; D < db; D++) {
                    if (phi[D] == cd(0)) {
                        continue;
                    }
                    size_t dx = db_digit(D, x, domain, e);
                    size_t base = D - dx * stride;
                    for (size_t dx2 = 0; dx2 < e; dx2++) {
                        out[base + dx2 * stride] += loc(h * e + dx2, 0 * e + dx) * phi[D];
                    }
                }
                if (out.squaredNorm() > 1e-30) {
                    auto key = answers;
                    key.push_back(static_cast<uint32_t>(h));
                    next[key] = out;
                }
            }
        }
        branches = std::move(next);
    }

    std::vector<bool> queried(domain, false);
    for (uint32_t x : queries) {
        queried[x] = true;
    }
    size_t distinct = std::count(queried.begin(), queried.end(), true);
    double tv = 0;
    size_t seqs = ipow(d, static_cast<uint32_t>(queries.size()));
    for (size_t code = 0; code < seqs; code++) {
        std::vector<uint32_t> ans(queries.size());
        size_t rest = code;
        for (size_t t = queries.size(); t-- > 0;) {
            ans[t] = static_cast<uint32_t>(rest % d);
            rest /= d;
        }
        bool consistent = true;
        for (size_t a = 0; a < queries.size(); a++) {
            for (size_t b = 0; b < a; b++) {
                consistent &= queries[a] != queries[b] || ans[a] == ans[b];
            }
        }
        double lazy = consistent ? std::pow(static_cast<double>(d), -static_cast<double>(distinct)) : 0;
        auto it = branches.find(ans);
        double comp = it == branches.end() ? 0 : it->second.squaredNorm();
        tv += std::abs(comp - lazy);
    }
    r.answer_tv = tv / 2;

    for (const auto &[answers, phi] : branches) {
        for (size_t D = 0; D < db; D++) {
            size_t used = 0;
            bool stray = false;
            for (uint32_t x = 0; x < domain; x++) {
                if (db_digit(D, x, domain, e) != d) {
                    used++;
                    stray |= !queried[x];
                }
            }
            if (used > queries.size() || stray) {
                r.oversize_db_weight += std::norm(phi[D]);
            }
        }
    }
    return r;
}

bool QuerySmoke::pass() const {
    return unitarity_defect <= 1e-12 && marginal_defect <= 1e-12 && std::abs(empty_db_weight - 1) <= 1e-12 &&
           repeat_defect <= 1e-12 && answer_tv <= 1e-12 && oversize_db_weight <= 1e-12;
}

std::string QuerySmoke::to_json() const {
    return json{{"check", "query_unitary"},
                {"params", {{"l", l}, {"domain", domain}, {"queries", queries}}},
                {"measured", {{"unitarity_defect", unitarity_defect}, {"marginal_defect", marginal_defect},
                              {"empty_db_weight", empty_db_weight}, {"repeat_defect", repeat_defect},
                              {"answer_tv", answer_tv}, {"oversize_db_weight", oversize_db_weight}}},
                {"bound", {{"tolerance", 1e-12}}},
                {"pass", pass()}}
        .dump();
}

}  // namespace fischlin::lab
