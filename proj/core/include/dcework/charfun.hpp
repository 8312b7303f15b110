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

#pragma once

#include <optional>
#include <vector>

#include "dcework/driving.hpp"
#include "dcework/linalg.hpp"

namespace dce {

/// Inputs of the single-resonance characteristic functions. Frequencies are
/// angular frequencies; energies are hbar * omega. The *_tau frequencies
/// default to their lambda0 values (static boundary endpoints).
struct CharfunParams {
    ResonanceVariant variant = ResonanceVariant::DoF;
    double beta = 1.0;
    double hbar = 1.0;
    double mu = 0.0;
    double omega_k = 1.0;
    double omega_p = 2.0;
    std::optional<double> omega_k_tau;
    std::optional<double> omega_p_tau;
    double g_tau = 0.0;

    double wk_tau() const { return omega_k_tau.value_or(omega_k); }
    double wp_tau() const { return omega_p_tau.value_or(omega_p); }
    bool static_endpoints() const;
    /// Throws DomainError on beta <= 0, non-positive frequencies, or a DiF
    /// case with |omega_k / omega_p - 1| < 1e-6.
    void validate() const;
    /// Energy quantum of the work lattice (hbar times 2 w_k, w_k + w_p or
    /// |w_k - w_p|), valid for static endpoints.
    double work_quantum() const;
    /// The active modes of the case with their frequency pairs.
    std::vector<double> frequencies0() const;
    std::vector<double> frequencies_tau() const;
};

/// Builds params for one case of a plan.
CharfunParams params_for_case(const ResonanceCase& c, double beta, double tau, double hbar = 1.0);

/// Single-resonance G(u, v) for static endpoints. The square root of the
/// double-frequency form is continued from G(0, 0) = 1 along (t u, t v).
cplx closed_form(const CharfunParams& params, cplx u, cplx v);

struct GeneralCharfun {
    cplx modified;  ///< closed form with moving endpoints
    cplx full;      ///< modified times the adiabatic factors of the case modes
};

/// Characteristic function with lambda_tau != lambda0. Reduces to
/// closed_form when the frequencies do not change.
GeneralCharfun closed_form_general(const CharfunParams& params, cplx u, cplx v);

/// Parameters of the time-reversed drive: initial and final frequencies swap.
CharfunParams reversed(const CharfunParams& params);

/// A resonance case together with the modes it occupies.
struct ResonanceTerm {
    CharfunParams params;
    std::vector<ModeIndex> modes;
};

/// Product of per-case characteristic functions. Throws CoupledCaseError
/// when two terms share a mode.
cplx multi_resonance_product(const std::vector<ResonanceTerm>& terms, cplx u, cplx v);

/// Thermal average of exp(i u hbar (omega_tau - omega0) n) for a mode whose
/// occupation is conserved.
cplx adiabatic_mode_factor(double omega0, double omega_tau, double beta, cplx u,
                           double hbar = 1.0);

struct GrandPotentialDiff {
    double value = 0.0;
    std::vector<ModeIndex> modes;
};

/// Delta Phi over a finite mode set; zero-point energy excluded.
GrandPotentialDiff grand_potential_diff(const std::vector<ActiveMode>& modes, double beta,
                                        double hbar = 1.0);
GrandPotentialDiff grand_potential_diff(const GeometrySpec& geom, Polarization pol,
                                        const std::vector<ModeIndex>& modes, double lambda0,
                                        double lambda_tau, double beta, double hbar = 1.0);

/// hbar -> 0 limit as a function of u_tilde = u / beta. r = omega_p / omega_k
/// (ignored for DoF).
cplx classical_charfun(ResonanceVariant variant, double r, double g_tau, cplx u_tilde);

/// Exponential rates of the classical two-sided work density, alpha_plus < 0
/// governing w > 0 and alpha_minus > 0 governing w < 0.
struct ClassicalRates {
    double alpha_plus = 0.0;
    double alpha_minus = 0.0;
};
ClassicalRates classical_rates(ResonanceVariant variant, double r, double g_tau, double beta);

/// Classical work density. SuF/DiF are two-sided exponentials. DoF is the
/// difference of two Gamma(1/2) variables (a variance-gamma law), whose
/// characteristic function is the classical DoF form.
double classical_work_pdf(ResonanceVariant variant, double r, double g_tau, double beta, double w);
double classical_work_cdf(ResonanceVariant variant, double r, double g_tau, double beta, double w);

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

/// Mean and variance of work from central differences of ln G(u, 0) at u = 0
/// with one Richardson step. Steps are {1e-2, 1e-3, 1e-4} * min(beta,
/// 1 / (hbar omega_max)); throws ConvergenceError if the two coarser
/// estimates disagree by more than 1e-6 of the natural scale.
Moments moments(const CharfunParams& params);

}  // namespace dce
