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

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dcework/cavity_modes.hpp"
#include "dcework/symplectic.hpp"

namespace dce {

/// Boundary motion lambda(t) = lambda0 [1 + epsilon sin(Omega t + phi)] for
/// 0 <= t <= tau. The drive may stop at a different position lambda_tau.
struct DrivingProtocol {
    double lambda0 = 1.0;
    double epsilon = 0.01;
    double omega_drive = 0.0;
    double tau = 0.0;
    double phi = 0.0;
    double hbar = 1.0;
    std::optional<double> lambda_tau;

    double final_lambda() const { return lambda_tau.value_or(lambda0); }
    /// Throws DomainError on lambda0 <= 0, tau < 0, epsilon outside (0, 1),
    /// or hbar <= 0.
    void validate() const;
    /// Non-fatal remarks, e.g. epsilon >= 0.1 where first-order RWA is doubtful.
    std::vector<std::string> warnings() const;
};

/// A mode taking part in a computation, with its frequency before and after
/// the drive.
struct ActiveMode {
    ModeIndex mode;
    double omega0 = 0.0;
    double omega_tau = 0.0;
};

/// Frequencies of `modes` at lambda0 and lambda_tau.
std::vector<ActiveMode> active_modes(const GeometrySpec& geom, Polarization pol,
                                     const std::vector<ModeIndex>& modes, double lambda0,
                                     double lambda_tau);

enum class ResonanceVariant { DoF, SuF, DiF };

std::string to_string(ResonanceVariant variant);
ResonanceVariant parse_variant(const std::string& text);

/// One resonance condition met by the drive. For DoF, p == k. For DiF, k is
/// the higher-frequency mode.
struct ResonanceCase {
    ResonanceVariant variant = ResonanceVariant::DoF;
    ModeIndex k;
    ModeIndex p;
    double omega_k = 0.0;  ///< at lambda0
    double omega_p = 0.0;
    double coupling = 0.0;  ///< g_kp (for DoF, -d ln omega / d ln lambda)
    double strength = 0.0;  ///< g_j, frequency units
    double detuning = 0.0;

    std::vector<ModeIndex> modes() const;
    nlohmann::json to_json() const;
};

/// Geometry-dependent inputs of the strengths.
struct CouplingModel {
    std::function<double(const ModeIndex&, const ModeIndex&)> coupling;
    std::function<double(const ModeIndex&)> sensitivity;
};

CouplingModel cavity_coupling(const GeometrySpec& geom, Polarization pol, double lambda0);

struct ResonancePlan {
    std::vector<ResonanceCase> cases;
    /// Partition of case ids into coupled components, ordered by smallest id.
    std::vector<std::vector<size_t>> groups;
    std::vector<SpectrumEntry> adiabatic_modes;

    /// Modes of a group in first-appearance order.
    std::vector<ModeIndex> group_modes(size_t group) const;
    nlohmann::json to_json() const;
};

/// g1 = (epsilon Omega / 4) * sensitivity; g2, g3 from g_kp with the
/// frequency-ratio weights. Throws DomainError for a DiF with omega_k == omega_p.
double coupling_strength(ResonanceVariant variant, double epsilon, double omega_drive,
                         double omega_k, double omega_p, double coupling);
double coupling_strength(const ResonanceCase& c, const DrivingProtocol& protocol,
                         const GeometrySpec& geom, Polarization pol);

/// Tests every mode against Omega = 2 omega_k and every unordered pair against
/// Omega = omega_k + omega_p and |omega_k - omega_p|, within tol. Cases with
/// zero strength are dropped. Throws AmbiguityError when one pair meets both
/// pair conditions.
ResonancePlan classify_resonances(const std::vector<SpectrumEntry>& spectrum,
                                  const DrivingProtocol& protocol, double tol,
                                  const CouplingModel& model);

/// Default tolerance 1e-9 * Omega.
ResonancePlan classify_resonances(const std::vector<SpectrumEntry>& spectrum,
                                  const DrivingProtocol& protocol, const CouplingModel& model);

/// A plan holding one case with a prescribed strength, for direct parameter
/// studies. Mode labels are 1:0:0 (k) and 2:0:0 (p).
ResonancePlan single_case_plan(ResonanceVariant variant, double omega_k, double omega_p,
                               double strength);

/// Rates of the RWA generator for one coupled group:
/// V = sum_k -i gamma_k (a_k^dag a_k^dag - a_k a_k)
///   + sum_{k,p} -i h_kp (a_k^dag a_p - a_p^dag a_k) - i d_kp (a_k^dag a_p^dag - a_p a_k),
/// conjugated by exp(-i phi N / 2).
struct EffectiveGenerator {
    std::vector<ModeIndex> modes;
    std::vector<double> omega;
    std::vector<double> gamma;
    std::vector<std::vector<double>> h;
    std::vector<std::vector<double>> d;
    double phi = 0.0;

    /// V as a quadratic operator over `modes`.
    QuadraticForm form() const;
};

EffectiveGenerator effective_generator(const ResonancePlan& plan, size_t group, double phi = 0.0);
QuadraticForm interaction_generator(const ResonancePlan& plan, size_t group, double phi = 0.0);

}  // namespace dce
