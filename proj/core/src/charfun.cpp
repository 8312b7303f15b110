// Copyright 2026 The dcework Authors
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

#include "dcework/charfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "dcework/error.hpp"

namespace dce {
namespace {

constexpr cplx kI(0.0, 1.0);

// sinh((-i u hbar dw + beta hbar w0) / 2)
cplx thermal_sinh(double w0, double w_tau, double beta, double hbar, cplx u) {
    return std::sinh(0.5 * (-kI * u * hbar * (w_tau - w0) + beta * hbar * w0));
}

// Evaluates numer / sqrt(denom(t)) with the root continued from t = 0, where
// denom(0) is real positive.
template <typename Denominator>
cplx continued_inverse_sqrt(const Denominator& denom, cplx numer) {
    const cplx d0 = denom(0.0);
    for (int steps = 64; steps <= (1 << 16); steps *= 2) {
        cplx prev_d = d0;
        cplx root = std::sqrt(d0);
        bool ok = true;
        for (int s = 1; s <= steps; ++s) {
            const cplx d = denom(static_cast<double>(s) / steps);
            if (d == 0.0) {
                throw DivergenceError("closed_form: characteristic function diverges on the path");
            }
            if (std::abs(std::arg(d / prev_d)) >= 0.5 * std::numbers::pi) {
                ok = false;
                break;
            }
            cplx next = std::sqrt(d);
            if (std::abs(-next - root) < std::abs(next - root)) {
                next = -next;
            }
            root = next;
            prev_d = d;
        }
        if (ok) {
            return numer / root;
        }
    }
    throw ConvergenceError("closed_form: square-root branch could not be continued from (0, 0)");
}

cplx modified_value(const CharfunParams& p, cplx u, cplx v) {
    const double b = p.beta;
    const double h = p.hbar;
    const double wk0 = p.omega_k;
    const double wkt = p.wk_tau();
    switch (p.variant) {
        case ResonanceVariant::DoF: {
            const double s = std::pow(std::sinh(p.g_tau), 2);
            auto sh = [&](cplx uu) { return thermal_sinh(wk0, wkt, b, h, uu); };
            auto denom = [&](double t) {
                const cplx uu = t * u;
                const cplx vv = t * v;
                const cplx a = sh(uu);
                return a * a + std::sin(uu * h * wkt + vv) * std::sin((uu - kI * b) * h * wk0 + vv) * s;
            };
            return continued_inverse_sqrt(denom, sh(u));
        }
        case ResonanceVariant::SuF:
        case ResonanceVariant::DiF: {
            const double wp0 = p.omega_p;
            const double wpt = p.wp_tau();
            const cplx ak = thermal_sinh(wk0, wkt, b, h, u);
            const cplx ap = thermal_sinh(wp0, wpt, b, h, u);
            cplx mix;
            if (p.variant == ResonanceVariant::SuF) {
                const double s = std::pow(std::sinh(p.g_tau), 2);
                mix = std::sin(0.5 * u * h * (wkt + wpt) + v) *
                      std::sin(0.5 * (u - kI * b) * h * (wk0 + wp0) + v) * s;
            } else {
                const double s = std::pow(std::sin(p.g_tau), 2);
                mix = std::sin(0.5 * u * h * (wkt - wpt)) * std::sin(0.5 * (u - kI * b) * h * (wk0 - wp0)) * s;
            }
            const cplx denom = ak * ap + mix;
            if (denom == 0.0) {
                throw DivergenceError("closed_form: characteristic function has a pole here");
            }
            return ak * ap / denom;
        }
    }
    return 1.0;
}

double require_ratio(ResonanceVariant variant, double r) {
    if (variant == ResonanceVariant::DoF) {
        return r;
    }
    if (!(r > 0.0)) {
        throw DomainError("classical forms: frequency ratio must be positive");
    }
    if (variant == ResonanceVariant::DiF && std::abs(r - 1.0) < 1e-6) {
        throw DomainError("classical forms: DiF with r = 1 is degenerate");
    }
    return r;
}

// Rates (a, b) of the two Gamma(1/2) variables whose difference is the
// classical DoF work: 1/a - 1/b = 4 s / beta, 1/(a b) = 4 s / beta^2.
std::pair<double, double> dof_gamma_rates(double g_tau, double beta) {
    const double s = std::pow(std::sinh(g_tau), 2);
    const double root = std::sqrt(s * s + s);
    return {beta / (2.0 * (s + root)), beta / (2.0 * (root - s))};
}

}  // namespace

bool CharfunParams::static_endpoints() const {
    return wk_tau() == omega_k && (variant == ResonanceVariant::DoF || wp_tau() == omega_p);
}

void CharfunParams::validate() const {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw DomainError("charfun: beta must be positive and finite");
    }
    if (!(hbar > 0.0)) {
        throw DomainError("charfun: hbar must be positive");
    }
    if (!(omega_k > 0.0) || !(wk_tau() > 0.0)) {
        throw DomainError("charfun: omega_k must be positive");
    }
    if (variant != ResonanceVariant::DoF) {
        if (!(omega_p > 0.0) || !(wp_tau() > 0.0)) {
            throw DomainError("charfun: omega_p must be positive");
        }
        if (variant == ResonanceVariant::DiF && std::abs(omega_p / omega_k - 1.0) < 1e-6) {
            throw DomainError("charfun: DiF needs omega_k != omega_p");
        }
    }
    if (!std::isfinite(g_tau)) {
        throw DomainError("charfun: g_tau must be finite");
    }
}

double CharfunParams::work_quantum() const {
    switch (variant) {
        case ResonanceVariant::DoF: return hbar * 2.0 * omega_k;
        case ResonanceVariant::SuF: return hbar * (omega_k + omega_p);
        case ResonanceVariant::DiF: return hbar * std::abs(omega_k - omega_p);
    }
    return 0.0;
}

std::vector<double> CharfunParams::frequencies0() const {
    if (variant == ResonanceVariant::DoF) {
        return {omega_k};
    }
    return {omega_k, omega_p};
}

std::vector<double> CharfunParams::frequencies_tau() const {
    if (variant == ResonanceVariant::DoF) {
        return {wk_tau()};
    }
    return {wk_tau(), wp_tau()};
}

CharfunParams params_for_case(const ResonanceCase& c, double beta, double tau, double hbar) {
    CharfunParams p;
    p.variant = c.variant;
    p.beta = beta;
    p.hbar = hbar;
    p.omega_k = c.omega_k;
    p.omega_p = c.omega_p;
    p.g_tau = c.strength * tau;
    return p;
}

cplx closed_form(const CharfunParams& params, cplx u, cplx v) {
    params.validate();
    if (!params.static_endpoints()) {
        throw DomainError("closed_form: endpoints differ; use closed_form_general");
    }
    if (u == 0.0 && v == 0.0) {
        return 1.0;
    }
    return modified_value(params, u, v);
}

GeneralCharfun closed_form_general(const CharfunParams& params, cplx u, cplx v) {
    params.validate();
    if (u == 0.0 && v == 0.0) {
        return {1.0, 1.0};
    }
    GeneralCharfun out;
    out.modified = modified_value(params, u, v);
    cplx factor = adiabatic_mode_factor(params.omega_k, params.wk_tau(), params.beta, u, params.hbar);
    if (params.variant != ResonanceVariant::DoF) {
        factor *= adiabatic_mode_factor(params.omega_p, params.wp_tau(), params.beta, u, params.hbar);
    }
    out.full = out.modified * factor;
    return out;
}

CharfunParams reversed(const CharfunParams& params) {
    CharfunParams r = params;
    r.omega_k = params.wk_tau();
    r.omega_k_tau = params.omega_k;
    if (params.variant != ResonanceVariant::DoF) {
        r.omega_p = params.wp_tau();
        r.omega_p_tau = params.omega_p;
    }
    return r;
}

cplx multi_resonance_product(const std::vector<ResonanceTerm>& terms, cplx u, cplx v) {
    std::set<ModeIndex> seen;
    for (const auto& t : terms) {
        for (const auto& m : t.modes) {
            if (!seen.insert(m).second) {
                throw CoupledCaseError("multi_resonance_product: mode " + m.str() +
                                       " appears in two resonances; these are coupled and need "
                                       "the symplectic evaluator (charfun_general)");
            }
        }
    }
    cplx out = 1.0;
    for (const auto& t : terms) {
        out *= closed_form_general(t.params, u, v).full;
    }
    return out;
}

cplx adiabatic_mode_factor(double omega0, double omega_tau, double beta, cplx u, double hbar) {
    if (!(beta > 0.0)) {
        throw DomainError("adiabatic_mode_factor: beta must be positive");
    }
    if (omega_tau == omega0) {
        return 1.0;
    }
    const double x = beta * hbar * omega0;
    return -std::expm1(-x) / (1.0 - std::exp(-x + kI * u * hbar * (omega_tau - omega0)));
}

GrandPotentialDiff grand_potential_diff(const std::vector<ActiveMode>& modes, double beta,
                                        double hbar) {
    if (!(beta > 0.0)) {
        throw DomainError("grand_potential_diff: beta must be positive");
    }
    GrandPotentialDiff out;
    for (const auto& m : modes) {
        if (!(m.omega0 > 0.0) || !(m.omega_tau > 0.0)) {
            throw DomainError("grand_potential_diff: beta * omega must be positive");
        }
        out.value += std::log1p(-std::exp(-beta * hbar * m.omega_tau)) -
                     std::log1p(-std::exp(-beta * hbar * m.omega0));
        out.modes.push_back(m.mode);
    }
    out.value /= beta;
    return out;
}

GrandPotentialDiff grand_potential_diff(const GeometrySpec& geom, Polarization pol,
                                        const std::vector<ModeIndex>& modes, double lambda0,
                                        double lambda_tau, double beta, double hbar) {
    return grand_potential_diff(active_modes(geom, pol, modes, lambda0, lambda_tau), beta, hbar);
}

cplx classical_charfun(ResonanceVariant variant, double r, double g_tau, cplx u_tilde) {
    require_ratio(variant, r);
    const cplx q = u_tilde * u_tilde - kI * u_tilde;
    switch (variant) {
        case ResonanceVariant::DoF:
            return 1.0 / std::sqrt(1.0 + 4.0 * q * std::pow(std::sinh(g_tau), 2));
        case ResonanceVariant::SuF:
            return 1.0 / (1.0 + (r + 1.0) * (r + 1.0) / r * q * std::pow(std::sinh(g_tau), 2));
        case ResonanceVariant::DiF:
            return 1.0 / (1.0 + (r - 1.0) * (r - 1.0) / r * q * std::pow(std::sin(g_tau), 2));
    }
    return 1.0;
}

ClassicalRates classical_rates(ResonanceVariant variant, double r, double g_tau, double beta) {
    require_ratio(variant, r);
    double inner = 0.0;
    switch (variant) {
        case ResonanceVariant::DoF:
            throw DomainError("classical_rates: the DoF density is not a two-sided exponential");
        case ResonanceVariant::SuF:
            inner = 4.0 * r / (std::pow(std::sinh(g_tau), 2) * (r + 1.0) * (r + 1.0));
            break;
        case ResonanceVariant::DiF:
            inner = 4.0 * r / (std::pow(std::sin(g_tau), 2) * (r - 1.0) * (r - 1.0));
            break;
    }
    const double root = std::sqrt(1.0 + inner);
    return {0.5 * beta * (1.0 - root), 0.5 * beta * (1.0 + root)};
}

double classical_work_pdf(ResonanceVariant variant, double r, double g_tau, double beta, double w) {
    if (variant == ResonanceVariant::DoF) {
        const auto [a, b] = dof_gamma_rates(g_tau, beta);
        if (w == 0.0) {
            return std::numeric_limits<double>::infinity();
        }
        const double x = 0.5 * (a + b) * std::abs(w);
        const double pre = std::sqrt(a * b) / std::numbers::pi;
        if (x < 500.0) {
            return pre * std::exp(0.5 * (b - a) * w) * std::cyl_bessel_k(0.0, x);
        }
        // Large-argument series for exp(x) K0(x); the exponentials cancel analytically.
        const double inv = 1.0 / x;
        const double scaled = std::sqrt(0.5 * std::numbers::pi * inv) *
                              (1.0 - inv / 8.0 + 9.0 * inv * inv / 128.0 - 225.0 * inv * inv * inv / 3072.0);
        return pre * std::exp(w > 0.0 ? -a * w : b * w) * scaled;
    }
    const auto rates = classical_rates(variant, r, g_tau, beta);
    const double pre = rates.alpha_plus * rates.alpha_minus / (rates.alpha_plus - rates.alpha_minus);
    return pre * std::exp((w >= 0.0 ? rates.alpha_plus : rates.alpha_minus) * w);
}

double classical_work_cdf(ResonanceVariant variant, double r, double g_tau, double beta, double w) {
    if (variant == ResonanceVariant::DoF) {
        const auto [a, b] = dof_gamma_rates(g_tau, beta);
        // F(w) = 2 sqrt(b/pi) int_{z0}^inf exp(-b z^2) erf(sqrt(a (w + z^2))) dz
        const double z0 = w < 0.0 ? std::sqrt(-w) : 0.0;
        auto integrand = [&](double z) {
            const double arg = a * (w + z * z);
            return arg <= 0.0 ? 0.0 : std::exp(-b * z * z) * std::erf(std::sqrt(arg));
        };
        boost::math::quadrature::exp_sinh<double> integrator;
        const double value = integrator.integrate(integrand, z0, std::numeric_limits<double>::infinity(), 1e-13);
        return std::clamp(2.0 * std::sqrt(b / std::numbers::pi) * value, 0.0, 1.0);
    }
    const auto rates = classical_rates(variant, r, g_tau, beta);
    const double span = rates.alpha_minus - rates.alpha_plus;
    if (w < 0.0) {
        return -rates.alpha_plus / span * std::exp(rates.alpha_minus * w);
    }
    return 1.0 - rates.alpha_minus / span * std::exp(rates.alpha_plus * w);
}

Moments moments(const CharfunParams& params) {
    params.validate();
    const auto w0 = params.frequencies0();
    const double w_max = *std::max_element(w0.begin(), w0.end());
    const double energy = params.hbar * w_max;
    const double length = std::min(params.beta, 1.0 / energy);
    const double scale = energy + 1.0 / params.beta;

    auto log_g = [&](double u) { return std::log(closed_form_general(params, u, 0.0).full); };
    struct Estimate {
        double mean;
        double variance;
    };
    auto estimate = [&](double h) {
        auto first = [&](double hh) { return (log_g(hh) - log_g(-hh)) / (2.0 * hh); };
        auto second = [&](double hh) { return (log_g(hh) + log_g(-hh)) / (hh * hh); };
        const cplx d1 = (4.0 * first(0.5 * h) - first(h)) / 3.0;
        const cplx d2 = (4.0 * second(0.5 * h) - second(h)) / 3.0;
        return Estimate{(-kI * d1).real(), (-d2).real()};
    };
    const Estimate coarse = estimate(1e-2 * length);
    const Estimate mid = estimate(1e-3 * length);
    const Estimate fine = estimate(1e-4 * length);
    const bool mean_ok = std::abs(coarse.mean - mid.mean) <= 1e-6 * scale ||
                         std::abs(mid.mean - fine.mean) <= 1e-6 * scale;
    const bool var_ok = std::abs(coarse.variance - mid.variance) <= 1e-6 * scale * scale ||
                        std::abs(mid.variance - fine.variance) <= 1e-6 * scale * scale;
    if (!mean_ok || !var_ok) {
        throw ConvergenceError("moments: finite-difference ladder did not converge");
    }
    return {mid.mean, mid.variance};
}

}  // namespace dce
