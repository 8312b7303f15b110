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

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dcework/cavity_modes.hpp"
#include "dcework/driving.hpp"

namespace dce::cli {

/// Malformed or incomplete configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct NumericsConfig {
    /// One cutoff for every mode, or one per active mode in order.
    std::vector<int> n_max = {40};
    int grid = 64;
    double tail_tol = 1e-10;
    double periodicity_tol = 1e-8;
    /// Relative to the drive frequency.
    double resonance_tol = 1e-9;
    std::size_t block_budget = 4096;
    double leakage_threshold = 1e-8;
    int branch_steps = 64;
    /// Relative to the work quantum.
    double merge_tol = 1e-9;
    int verify_grid = 64;
    double verify_u_extent = 1.0;
};

/// A single resonance given by its dimensionless parameters instead of a
/// cavity, for parameter studies.
struct DirectResonance {
    ResonanceVariant variant = ResonanceVariant::DoF;
    double omega_k = 1.0;
    double omega_p = 2.0;
    double g_tau = 0.0;
    std::optional<double> omega_k_tau;
    std::optional<double> omega_p_tau;
};

struct RunConfig {
    std::optional<GeometrySpec> geometry;
    Polarization polarization = Polarization::TE;
    double max_frequency = 0.0;
    std::optional<DirectResonance> direct;

    DrivingProtocol protocol;
    /// Number, or a selector such as "2*w(1,1,1)", "w(1,0,1)+w(2,0,1)".
    std::string omega_expr;

    double beta = 0.0;
    NumericsConfig numerics;
    std::string prefix = "dcework";
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Reads the process environment.
std::optional<std::string> process_env(const std::string& name);

/// Parses an INI file with sections [geometry], [resonance], [protocol],
/// [thermal], [numerics] and [output]. Numerics keys can be overridden by
/// DCE_NUMERICS_<KEY> variables. The drive frequency is left unresolved.
RunConfig load_config(const std::string& path, const EnvLookup& env = process_env);
RunConfig parse_config(const std::string& text, const EnvLookup& env = process_env);

/// Evaluates the drive-frequency expression against the mode spectrum at
/// lambda0 and stores it in protocol.omega_drive.
void resolve_omega(RunConfig& config);

/// Text for --help describing every section and key.
std::string config_reference();

}  // namespace dce::cli
