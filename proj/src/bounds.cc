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

#include "fischlin/bounds.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace fischlin {

namespace {

double pow2(double e) { return std::exp2(e); }

double clamp01(double v) { return std::isnan(v) ? v : std::clamp(v, 0.0, 1.0); }

void require_delta(double delta) {
    if (!(delta > 0) || delta > 1) {
        throw std::invalid_argument("delta must lie in (0, 1]");
    }
}

}  // namespace

double ln_chernoff_upper(double mu, double delta) { return -delta * delta * mu / 3; }
double ln_chernoff_lower(double mu, double delta) { return -delta * delta * mu / 2; }
double ln_azuma(double eps, double m) { return -eps * eps / (2 * m); }
double chernoff_upper(double mu, double delta) { return std::exp(ln_chernoff_upper(mu, delta)); }
double chernoff_lower(double mu, double delta) { return std::exp(ln_chernoff_lower(mu, delta)); }
double azuma(double eps, double m) { return std::exp(ln_azuma(eps, m)); }

double log_sum_exp(const std::vector<double> &terms) {
    double hi = -std::numeric_limits<double>::infinity();
    for (double t : terms) {
        hi = std::max(hi, t);
    }
    if (!std::isfinite(hi)) {
        return hi;
    }
    double s = 0;
    for (double t : terms) {
        s += std::exp(t - hi);
    }
    return hi + std::log(s);
}

double ln_eps_dprime(double k, uint32_t l, double n, double delta) {
    require_delta(delta);
    return ln_chernoff_upper(pow2(-static_cast<double>(l)) * k * n, delta);
}

double eval_eps_dprime(double k, uint32_t l, double n, double delta) { return std::exp(ln_eps_dprime(k, l, n, delta)); }

double ln_eps_gamma(double gamma, uint32_t l, double k_eff) {
    // below 2 * 2^-l the exponent turns positive and the value is a vacuous bound above 1
    double floor = 2 * pow2(-static_cast<double>(l));
    if (!(gamma > 0) || gamma > 1) {
        throw std::invalid_argument("gamma must lie in (0, 1]");
    }
    return -(gamma - floor) * k_eff / 2;
}

double eval_eps_gamma(double gamma, uint32_t l, double k_eff) { return std::exp(ln_eps_gamma(gamma, l, k_eff)); }

MuLower eval_mu_lower(double k, uint32_t l, double n, double gamma) {
    if (!(k >= 2) || !(gamma > 0)) {
        throw std::invalid_argument("need k >= 2 and gamma > 0 for the log term");
    }
    double two_l = pow2(l);
    MuLower out;
    out.log_term = std::abs(std::log2(std::log2(k) / (4 * gamma)));
    double bracket = n - 1 - gamma * (1 + 4 * two_l + out.log_term) - 4 * std::sqrt(two_l * gamma * n);
    out.value = k / two_l * bracket;
    out.positive = out.value > 0;
    return out;
}

Constraints check_constraints(double k, uint32_t l, double c_rate) {
    Constraints c;
    c.l_ok = l >= 14;
    c.k_lower_ok = k >= std::exp2(1.0 / c_rate);
    c.k_upper_ok = std::log2(k) <= pow2(l) / (256 * c_rate);
    return c;
}

ClosedForm eval_closed_form(double k, uint32_t l, double c_rate) {
    ClosedForm out;
    double two_l = pow2(l);
    double a = -k / (128 * c_rate * two_l * std::log2(k));
    double b = -k / (8 * two_l);
    out.ln_value = log_sum_exp({std::log(3.0) + a, std::log(7.0) + b});
    out.value = std::exp(out.ln_value);
    out.applicable = k > 1 && check_constraints(k, l, c_rate).all();
    return out;
}

double lift_to_general(double eps_det, double q, double k) {
    if (eps_det < 0 || q < 0 || k < 0) {
        throw std::invalid_argument("negative input");
    }
    return 4 * (q + k) * (q + k) * eps_det;
}

BoundReport eval_chain(double k, uint32_t l, double c_rate, double q) {
    if (l < 1 || !(k >= 2) || !(c_rate > 0) || q < 0) {
        throw std::invalid_argument("need l >= 1, k >= 2, c > 0, q >= 0");
    }
    BoundReport r;
    r.k = k;
    r.l = l;
    r.c_rate = c_rate;
    r.q = q;
    const double two_l = pow2(l);
    const double inv = 1 / two_l;
    r.constraints = check_constraints(k, l, c_rate);
    if (!r.constraints.all()) {
        r.warnings.push_back("parameters outside l >= 14, 2^(1/c) <= k <= 2^(2^l/(256c))");
    }

    r.gamma = 4 * inv;
    r.N = std::round(c_rate * two_l * std::log2(k));
    r.mu = inv * k * r.N;
    r.m = k * (r.N - 1);
    auto ml = eval_mu_lower(k, l, r.N, r.gamma);
    r.mu_lower = ml.value;
    r.log_term = ml.log_term;
    r.mu_lower_le_mu = r.mu_lower <= r.mu;
    r.n = r.m - r.gamma * k;
    r.n_prime = r.n - pow2(2.0 + l) * (r.m - r.n);
    r.n_prime_nonneg = r.n_prime >= 0;

    r.delta = ((1 - 8 * inv) * k - (r.mu - r.mu_lower)) / (2 * r.mu);
    r.delta_prime = r.delta * r.mu / r.mu_lower;
    r.applicable = ml.positive && r.delta > 0 && r.delta <= 1;
    r.delta_prime_ok = r.delta_prime > 0 && r.delta_prime <= 1;
    if (!ml.positive) {
        r.warnings.push_back("lower cumulative mean is not positive");
    }
    if (!(r.delta > 0 && r.delta <= 1)) {
        r.warnings.push_back("delta outside (0, 1]");
    }

    // Formulas are evaluated even off the applicable region so reports stay complete.
    r.ln_eps_dprime = ln_chernoff_upper(r.mu, r.delta);
    r.ln_eps_prime = -r.delta_prime * r.delta_prime * r.mu_lower * r.mu_lower / (2 * r.m);
    r.ln_eps_prime_alt = -r.delta_prime * r.delta_prime * r.mu_lower / (2 * two_l);
    r.ln_eps_gamma_k = ln_eps_gamma(r.gamma, l, k);
    r.ln_eps_gamma_1mgk = ln_eps_gamma(r.gamma, l, (1 - r.gamma) * k);
    r.exponent_order_ok = r.delta_prime * r.delta_prime * r.mu_lower >= r.delta * r.delta * r.mu;
    r.eps_prime_le_alt = r.ln_eps_prime <= r.ln_eps_prime_alt;

    r.ln_eps = log_sum_exp({r.ln_eps_dprime, std::log(2.0) + r.ln_eps_prime / 2, std::log(7.0) + r.ln_eps_gamma_1mgk / 4});
    r.eps_dprime = std::exp(r.ln_eps_dprime);
    r.eps_prime = std::exp(r.ln_eps_prime);
    r.eps_prime_alt = std::exp(r.ln_eps_prime_alt);
    r.eps_gamma_k = std::exp(r.ln_eps_gamma_k);
    r.eps_gamma_1mgk = std::exp(r.ln_eps_gamma_1mgk);
    r.eps = std::exp(r.ln_eps);

    r.eps_below_one = r.ln_eps < 0;
    if (r.eps_below_one) {
        r.ln_eps_det = r.ln_eps - std::log1p(-r.eps);
        r.eps_det = std::exp(r.ln_eps_det);
        r.ln_eps_ex = std::log(4.0) + 2 * std::log(q + k) + r.ln_eps_det;
        r.eps_ex = std::exp(r.ln_eps_ex);
    } else {
        r.warnings.push_back("eps >= 1; eps/(1-eps) undefined");
        r.ln_eps_det = r.ln_eps_ex = r.eps_det = r.eps_ex = std::numeric_limits<double>::infinity();
    }

    auto cf = eval_closed_form(k, l, c_rate);
    r.closed_form = cf.value;
    r.ln_closed_form = cf.ln_value;
    r.chain_le_closed_form = r.ln_eps <= r.ln_closed_form;
    return r;
}

std::string BoundReport::to_json() const {
    using nlohmann::json;
    json j;
    j["params"] = {{"k", k}, {"l", l}, {"c", c_rate}, {"q", q}};
    j["derived"] = {{"N", N}, {"gamma", gamma}, {"mu", mu}, {"m", m}, {"mu_lower", mu_lower},
                    {"log_term", log_term}, {"delta", delta}, {"delta_prime", delta_prime},
                    {"n", n}, {"n_prime", n_prime}};
    j["raw"] = {{"eps_dprime", eps_dprime}, {"eps_gamma_k", eps_gamma_k}, {"eps_gamma_1mgk", eps_gamma_1mgk},
                {"eps_prime", eps_prime}, {"eps_prime_alt", eps_prime_alt}, {"eps", eps}, {"eps_det", eps_det},
                {"eps_ex", eps_ex}, {"closed_form", closed_form}};
    j["clamped"] = {{"eps", clamp01(eps)}, {"eps_det", clamp01(eps_det)}, {"eps_ex", clamp01(eps_ex)},
                    {"closed_form", clamp01(closed_form)}};
    j["ln"] = {{"eps_dprime", ln_eps_dprime}, {"eps_gamma_k", ln_eps_gamma_k}, {"eps_gamma_1mgk", ln_eps_gamma_1mgk},
               {"eps_prime", ln_eps_prime}, {"eps_prime_alt", ln_eps_prime_alt}, {"eps", ln_eps},
               {"eps_det", ln_eps_det}, {"eps_ex", ln_eps_ex}, {"closed_form", ln_closed_form}};
    j["flags"] = {{"l_ok", constraints.l_ok}, {"k_lower_ok", constraints.k_lower_ok},
                  {"k_upper_ok", constraints.k_upper_ok}, {"constraints_ok", constraints.all()},
                  {"applicable", applicable}, {"eps_below_one", eps_below_one},
                  {"delta_prime_ok", delta_prime_ok}, {"mu_lower_le_mu", mu_lower_le_mu},
                  {"exponent_order_ok", exponent_order_ok}, {"n_prime_nonneg", n_prime_nonneg},
                  {"eps_prime_le_alt", eps_prime_le_alt}, {"chain_le_closed_form", chain_le_closed_form}};
    j["warnings"] = warnings;
    return j.dump();
}

Plan plan_parameters(double k, double c_rate, uint64_t base) {
    if (!(k >= 2) || !(c_rate > 0) || base < 2) {
        throw std::invalid_argument("need k >= 2, c > 0, base >= 2");
    }
    Plan p;
    p.k = k;
    p.c_rate = c_rate;
    p.base = base;
    double raw = std::log2(std::log2(k)) + std::log2(c_rate) + 8;
    p.l = static_cast<uint32_t>(std::max(14.0, std::ceil(raw - 1e-12)));
    if (p.l > 64) {
        throw std::invalid_argument("planned l exceeds 64");
    }
    double n = std::round(c_rate * std::exp2(p.l) * std::log2(k));
    if (n > 4294967295.0) {
        throw std::invalid_argument("planned N does not fit in 32 bits");
    }
    p.N = static_cast<uint64_t>(n);
    p.c_effective = n / (std::exp2(p.l) * std::log2(k));
    p.r = 1;
    unsigned __int128 reach = base;
    while (reach < p.N) {
        reach *= base;
        p.r++;
    }
    p.constraints = check_constraints(k, p.l, c_rate);
    if (std::abs(p.c_effective - c_rate) > 1e-12 * c_rate) {
        std::ostringstream ss;
        ss << std::setprecision(12) << "rounding N changes c to " << p.c_effective;
        p.warnings.push_back(ss.str());
    }
    if (!p.constraints.all()) {
        p.warnings.push_back("k outside 2^(1/c) <= k <= 2^(2^l/(256c))");
    }
    return p;
}

std::string Plan::to_json() const {
    nlohmann::json j = {{"k", k}, {"c", c_rate}, {"c_effective", c_effective}, {"l", l}, {"N", N},
                        {"base", base}, {"r", r}, {"constraints_ok", constraints.all()}, {"warnings", warnings}};
    return j.dump();
}

std::string grid_csv_header() {
    return "k,l,c,q,N,gamma,mu,m,mu_lower,delta,delta_prime,n_prime,ln_eps_dprime,ln_eps_prime,"
           "ln_eps_prime_alt,ln_eps_gamma_1mgk,ln_eps,ln_eps_det,ln_eps_ex,ln_closed_form,constraints_ok,"
           "applicable,chain_le_closed_form\n";
}

std::string grid_csv_row(const BoundReport &r) {
    std::ostringstream ss;
    ss << std::setprecision(17);
    ss << r.k << ',' << r.l << ',' << r.c_rate << ',' << r.q << ',' << r.N << ',' << r.gamma << ',' << r.mu << ','
       << r.m << ',' << r.mu_lower << ',' << r.delta << ',' << r.delta_prime << ',' << r.n_prime << ','
       << r.ln_eps_dprime << ',' << r.ln_eps_prime << ',' << r.ln_eps_prime_alt << ',' << r.ln_eps_gamma_1mgk << ','
       << r.ln_eps << ',' << r.ln_eps_det << ',' << r.ln_eps_ex << ',' << r.ln_closed_form << ','
       << r.constraints.all() << ',' << r.applicable << ',' << r.chain_le_closed_form << '\n';
    return ss.str();
}

}  // namespace fischlin
