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

#include <array>
#include <compare>
#include <iosfwd>
#include <string>
#include <vector>

#include "dcework/bessel.hpp"

namespace dce {

enum class Shape { Rectangular, Cylindrical, Spherical };
enum class MovingWall { Longitudinal, Radial };
enum class Polarization { TE, TM };

std::string to_string(Shape shape);
std::string to_string(MovingWall wall);
std::string to_string(Polarization pol);
Polarization parse_polarization(const std::string& text);

/// Cavity shape with its fixed lengths. The length of the moving dimension is
/// never stored here; every query takes it as `lambda`.
///
/// Rectangular: the wall at z = lambda moves, Lx and Ly are fixed.
/// Cylindrical: either the end cap (lambda is the axis length, R fixed) or the
/// mantle (lambda is the radius, axis_length fixed) moves.
/// Spherical: lambda is the radius.
struct GeometrySpec {
    Shape shape = Shape::Rectangular;
    double Lx = 1.0;
    double Ly = 1.0;
    double R = 1.0;
    double axis_length = 1.0;
    MovingWall moving_wall = MovingWall::Longitudinal;

    static GeometrySpec rectangular(double Lx, double Ly);
    static GeometrySpec cylindrical(double R, double axis_length, MovingWall wall);
    static GeometrySpec spherical();

    /// Throws DomainError on a non-positive or non-finite length.
    void validate() const;
};

/// Mode label. Rectangular (kx, ky, kz); cylindrical (n, m, k) with n the
/// azimuthal number, m the radial root index and k the axial number;
/// spherical (n, l, m) with n the radial root index.
struct ModeIndex {
    int a = 0;
    int b = 0;
    int c = 0;

    auto operator<=>(const ModeIndex&) const = default;
    std::array<int, 3> as_array() const { return {a, b, c}; }
    /// "a:b:c"
    std::string str() const;
    static ModeIndex parse(const std::string& text);
};

bool is_valid_mode(const GeometrySpec& geom, Polarization pol, const ModeIndex& mode);
/// Throws DomainError with the offending index if the mode is not allowed.
void require_valid_mode(const GeometrySpec& geom, Polarization pol, const ModeIndex& mode);

/// Angular eigenfrequency of `mode` with the moving dimension at `lambda`.
double mode_frequency(const GeometrySpec& geom, Polarization pol, const ModeIndex& mode,
                      double lambda);

/// -d ln(omega) / d ln(lambda): the fraction of omega^2 carried by the moving
/// dimension. Sets the double-frequency resonance strength.
double frequency_sensitivity(const GeometrySpec& geom, Polarization pol, const ModeIndex& mode,
                             double lambda);

/// Dimensionless coupling g_kp between two instantaneous modes, so that the
/// overlap integral is (lambda_dot / lambda) * g_kp.
double coupling_coefficient(const GeometrySpec& geom, Polarization pol, const ModeIndex& k,
                            const ModeIndex& p);

struct SpectrumEntry {
    ModeIndex mode;
    double frequency = 0.0;
};

/// All modes with frequency <= max_frequency, ascending. Frequencies equal to
/// within 1e-12 relative are ordered by ModeIndex.
std::vector<SpectrumEntry> mode_spectrum(const GeometrySpec& geom, Polarization pol,
                                         double lambda, double max_frequency);

/// CSV with header `mode_index,polarization,frequency`.
void write_spectrum_csv(std::ostream& out, Polarization pol,
                        const std::vector<SpectrumEntry>& spectrum);

}  // namespace dce
