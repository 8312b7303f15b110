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

#include "dcework/cavity_modes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <ostream>
#include <sstream>

#include "dcework/error.hpp"
#include "dcework/format.hpp"

namespace dce {
namespace {

constexpr double kPi = std::numbers::pi;

void require_length(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        std::ostringstream msg;
        msg << "geometry: " << name << " must be positive and finite, got " << value;
        throw DomainError(msg.str());
    }
}

BesselKind cylinder_kind(Polarization pol) {
    return pol == Polarization::TE ? BesselKind::CylJPrime : BesselKind::CylJ;
}

BesselKind sphere_kind(Polarization pol) {
    return pol == Polarization::TE ? BesselKind::SphJ : BesselKind::SphXJPrime;
}

double cylinder_root(Polarization pol, int n, int m) {
    return bessel_zero(cylinder_kind(pol), std::abs(n), m);
}

double sphere_root(Polarization pol, int l, int n) { return bessel_zero(sphere_kind(pol), l, n); }

double sign_pow(int e) { return e % 2 == 0 ? 1.0 : -1.0; }

// Squared frequency split into the part set by the moving dimension and the
// part set by the fixed ones.
struct FrequencyParts {
    double moving = 0.0;
    double fixed = 0.0;
};

FrequencyParts frequency_parts(const GeometrySpec& geom, Polarization pol, const ModeIndex& mode,
                               double lambda) {
    FrequencyParts parts;
    switch (geom.shape) {
        case Shape::Rectangular: {
            const double kx = mode.a * kPi / geom.Lx;
            const double ky = mode.b * kPi / geom.Ly;
            const double kz = mode.c * kPi / lambda;
            parts.moving = kz * kz;
            parts.fixed = kx * kx + ky * ky;
            break;
        }
        case Shape::Cylindrical: {
            const double root = cylinder_root(pol, mode.a, mode.b);
            if (geom.moving_wall == MovingWall::Longitudinal) {
                const double radial = root / geom.R;
                const double axial = kPi * mode.c / lambda;
                parts.moving = axial * axial;
                parts.fixed = radial * radial;
            } else {
                const double radial = root / lambda;
                const double axial = kPi * mode.c / geom.axis_length;
                parts.moving = radial * radial;
                parts.fixed = axial * axial;
            }
            break;
        }
        case Shape::Spherical: {
            const double radial = sphere_root(pol, mode.b, mode.a) / lambda;
            parts.moving = radial * radial;
            break;
        }
    }
    return parts;
}

double axial_coupling(Polarization pol, int k, int kp) {
    if (k == kp) {
        return pol == Polarization::TE ? 0.0 : 1.0;
    }
    const double kk = k;
    const double pp = kp;
    const double numer = pol == Polarization::TE ? 2.0 * kk * pp : 2.0 * kk * kk;
    return sign_pow(k + kp) * numer / (kk * kk - pp * pp);
}

double cylinder_radial_coupling(Polarization pol, int n, int m, int mp) {
    const double y = cylinder_root(pol, n, m);
    const double yp = cylinder_root(pol, n, mp);
    const double nn = static_cast<double>(n) * n;
    if (pol == Polarization::TE) {
        if (m == mp) {
            return y * y / (y * y - nn);
        }
        return 2.0 * y * yp / (y * y - yp * yp) * std::sqrt((y * y - nn) / (yp * yp - nn));
    }
    if (m == mp) {
        return 0.0;
    }
    return 2.0 * y * yp / (y * y - yp * yp);
}

double sphere_coupling(Polarization pol, int l, int n, int np) {
    const double x = sphere_root(pol, l, n);
    const double xp = sphere_root(pol, l, np);
    if (pol == Polarization::TE) {
        if (n == np) {
            return 0.0;
        }
        return 2.0 * x * xp / (x * x - xp * xp);
    }
    const double ll = static_cast<double>(l) * (l + 1);
    if (n == np) {
        return x * x / (x * x - ll);
    }
    return 2.0 * x * xp / (x * x - xp * xp) * std::sqrt((x * x - ll) / (xp * xp - ll));
}

}  // namespace

std::string to_string(Shape shape) {
    switch (shape) {
        case Shape::Rectangular: return "rectangular";
        case Shape::Cylindrical: return "cylindrical";
        case Shape::Spherical: return "spherical";
    }
    return "unknown";
}

std::string to_string(MovingWall wall) {
    return wall == MovingWall::Longitudinal ? "longitudinal" : "radial";
}

std::string to_string(Polarization pol) { return pol == Polarization::TE ? "TE" : "TM"; }

Polarization parse_polarization(const std::string& text) {
    if (text == "TE" || text == "te") {
        return Polarization::TE;
    }
    if (text == "TM" || text == "tm") {
        return Polarization::TM;
    }
    throw DomainError("unknown polarization '" + text + "' (expected TE or TM)");
}

GeometrySpec GeometrySpec::rectangular(double Lx, double Ly) {
    GeometrySpec g;
    g.shape = Shape::Rectangular;
    g.Lx = Lx;
    g.Ly = Ly;
    g.validate();
    return g;
}

GeometrySpec GeometrySpec::cylindrical(double R, double axis_length, MovingWall wall) {
    GeometrySpec g;
    g.shape = Shape::Cylindrical;
    g.R = R;
    g.axis_length = axis_length;
    g.moving_wall = wall;
    g.validate();
    return g;
}

GeometrySpec GeometrySpec::spherical() {
    GeometrySpec g;
    g.shape = Shape::Spherical;
    return g;
}

void GeometrySpec::validate() const {
    switch (shape) {
        case Shape::Rectangular:
            require_length(Lx, "Lx");
            require_length(Ly, "Ly");
            break;
        case Shape::Cylindrical:
            if (moving_wall == MovingWall::Longitudinal) {
                require_length(R, "R");
            } else {
                require_length(axis_length, "axis_length");
            }
            break;
        case Shape::Spherical:
            break;
    }
}

std::string ModeIndex::str() const {
    return std::to_string(a) + ":" + std::to_string(b) + ":" + std::to_string(c);
}

ModeIndex ModeIndex::parse(const std::string& text) {
    std::string normalized = text;
    std::replace(normalized.begin(), normalized.end(), ',', ':');
    std::istringstream in(normalized);
    ModeIndex idx;
    char s1 = 0;
    char s2 = 0;
    if (!(in >> idx.a >> s1 >> idx.b >> s2 >> idx.c) || s1 != ':' || s2 != ':') {
        throw DomainError("cannot parse mode index '" + text + "' (expected a:b:c)");
    }
    in >> std::ws;
    if (!in.eof()) {
        throw DomainError("trailing characters in mode index '" + text + "'");
    }
    return idx;
}

bool is_valid_mode(const GeometrySpec& geom, Polarization pol, const ModeIndex& mode) {
    const bool te = pol == Polarization::TE;
    switch (geom.shape) {
        case Shape::Rectangular:
            if (te) {
                return mode.a >= 0 && mode.b >= 0 && mode.c >= 1 && (mode.a > 0 || mode.b > 0);
            }
            return mode.a >= 1 && mode.b >= 1 && mode.c >= 0;
        case Shape::Cylindrical:
            return mode.b >= 1 && mode.c >= (te ? 1 : 0);
        case Shape::Spherical:
            return mode.a >= 1 && mode.b >= 1 && std::abs(mode.c) <= mode.b;
    }
    return false;
}

void require_valid_mode(const GeometrySpec& geom, Polarization pol, const ModeIndex& mode) {
    if (!is_valid_mode(geom, pol, mode)) {
        throw DomainError("mode " + mode.str() + " is not a valid " + to_string(geom.shape) + " " +
                          to_string(pol) + " mode");
    }
}

double mode_frequency(const GeometrySpec& geom, Polarization pol, const ModeIndex& mode,
                      double lambda) {
    require_length(lambda, "lambda");
    require_valid_mode(geom, pol, mode);
    const auto parts = frequency_parts(geom, pol, mode, lambda);
    return std::sqrt(parts.moving + parts.fixed);
}

double frequency_sensitivity(const GeometrySpec& geom, Polarization pol, const ModeIndex& mode,
                             double lambda) {
    require_length(lambda, "lambda");
    require_valid_mode(geom, pol, mode);
    const auto parts = frequency_parts(geom, pol, mode, lambda);
    return parts.moving / (parts.moving + parts.fixed);
}

double coupling_coefficient(const GeometrySpec& geom, Polarization pol, const ModeIndex& k,
                            const ModeIndex& p) {
    require_valid_mode(geom, pol, k);
    require_valid_mode(geom, pol, p);
    switch (geom.shape) {
        case Shape::Rectangular:
            if (k.a != p.a || k.b != p.b) {
                return 0.0;
            }
            return axial_coupling(pol, k.c, p.c);
        case Shape::Cylindrical:
            if (geom.moving_wall == MovingWall::Longitudinal) {
                if (k.a != p.a || k.b != p.b) {
                    return 0.0;
                }
                return axial_coupling(pol, k.c, p.c);
            }
            if (k.a != p.a || k.c != p.c) {
                return 0.0;
            }
            return cylinder_radial_coupling(pol, k.a, k.b, p.b);
        case Shape::Spherical:
            if (k.b != p.b || k.c != p.c) {
                return 0.0;
            }
            return sphere_coupling(pol, k.b, k.a, p.a);
    }
    return 0.0;
}

std::vector<SpectrumEntry> mode_spectrum(const GeometrySpec& geom, Polarization pol,
                                         double lambda, double max_frequency) {
    geom.validate();
    require_length(lambda, "lambda");
    std::vector<SpectrumEntry> out;
    if (!(max_frequency > 0.0)) {
        return out;
    }
    const double limit = max_frequency * (1.0 + 1e-12);
    auto consider = [&](const ModeIndex& mode) {
        if (!is_valid_mode(geom, pol, mode)) {
            return;
        }
        const double w = mode_frequency(geom, pol, mode, lambda);
        if (w <= limit) {
            out.push_back({mode, w});
        }
    };
    const bool te = pol == Polarization::TE;

    switch (geom.shape) {
        case Shape::Rectangular: {
            const int nx = static_cast<int>(std::floor(limit * geom.Lx / kPi));
            const int ny = static_cast<int>(std::floor(limit * geom.Ly / kPi));
            const int nz = static_cast<int>(std::floor(limit * lambda / kPi));
            for (int kx = 0; kx <= nx; ++kx) {
                for (int ky = 0; ky <= ny; ++ky) {
                    for (int kz = 0; kz <= nz; ++kz) {
                        consider({kx, ky, kz});
                    }
                }
            }
            break;
        }
        case Shape::Cylindrical: {
            const bool longitudinal = geom.moving_wall == MovingWall::Longitudinal;
            const double radius = longitudinal ? geom.R : lambda;
            const double axis = longitudinal ? lambda : geom.axis_length;
            const int kmax = static_cast<int>(std::floor(limit * axis / kPi));
            for (int n = 0;; ++n) {
                if (cylinder_root(pol, n, 1) / radius > limit) {
                    break;
                }
                for (int m = 1; cylinder_root(pol, n, m) / radius <= limit; ++m) {
                    for (int k = te ? 1 : 0; k <= kmax; ++k) {
                        consider({n, m, k});
                        if (n != 0) {
                            consider({-n, m, k});
                        }
                    }
                }
            }
            break;
        }
        case Shape::Spherical: {
            for (int l = 1;; ++l) {
                if (sphere_root(pol, l, 1) / lambda > limit) {
                    break;
                }
                for (int n = 1; sphere_root(pol, l, n) / lambda <= limit; ++n) {
                    for (int m = -l; m <= l; ++m) {
                        consider({n, l, m});
                    }
                }
            }
            break;
        }
    }

    std::sort(out.begin(), out.end(), [](const SpectrumEntry& x, const SpectrumEntry& y) {
        return x.frequency < y.frequency;
    });
    // Reorder near-degenerate runs by index so the output does not depend on
    // last-bit rounding of the frequencies.
    size_t start = 0;
    while (start < out.size()) {
        size_t end = start + 1;
        while (end < out.size() &&
               out[end].frequency - out[end - 1].frequency <= 1e-12 * out[end].frequency) {
            ++end;
        }
        std::sort(out.begin() + static_cast<std::ptrdiff_t>(start),
                  out.begin() + static_cast<std::ptrdiff_t>(end),
                  [](const SpectrumEntry& x, const SpectrumEntry& y) { return x.mode < y.mode; });
        start = end;
    }
    return out;
}

void write_spectrum_csv(std::ostream& out, Polarization pol,
                        const std::vector<SpectrumEntry>& spectrum) {
    out << "mode_index,polarization,frequency\n";
    for (const auto& e : spectrum) {
        out << e.mode.str() << ',' << to_string(pol) << ',' << format_real(e.frequency) << '\n';
    }
}

}  // namespace dce
