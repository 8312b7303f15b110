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


#include "oracles.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace dce::testing {
namespace {

constexpr double kPi = std::numbers::pi;

double std_cyl_prime(int n, double x) {
    if (n == 0) {
        return -std::cyl_bessel_j(1.0, x);
    }
    return 0.5 * (std::cyl_bessel_j(n - 1.0, x) - std::cyl_bessel_j(n + 1.0, x));
}

double std_sph_prime(int l, double x) {
    return std::sph_bessel(l - 1, x) - (l + 1.0) / x * std::sph_bessel(l, x);
}

double evaluate(BesselKind kind, int order, double x) {
    switch (kind) {
        case BesselKind::CylJ: return std::cyl_bessel_j(static_cast<double>(order), x);
        case BesselKind::CylJPrime: return std_cyl_prime(order, x);
        case BesselKind::SphJ: return std::sph_bessel(order, x);
        case BesselKind::SphXJPrime:
            return std::sph_bessel(order, x) + x * std_sph_prime(order, x);
    }
    return 0.0;
}

double integrate(const std::function<double(double)>& f, double a, double b) {
    double error = 0.0;
    const double value =
        boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14, &error);
    if (!(error <= 1e-9 * (1.0 + std::abs(value)))) {
        throw std::runtime_error("overlap quadrature did not converge: error " + std::to_string(error) + " value " + std::to_string(value));
    }
    return value;
}

// Moving-coordinate factor of a mode function and its lambda derivative.
struct Radial {
    std::function<double(double)> f;
    std::function<double(double)> df;
    std::function<double(double)> weight;
};

Radial axial(Polarization pol, int k, double lambda) {
    const double kk = k * kPi / lambda;
    const double amp = std::sqrt(2.0 / lambda);
    Radial r;
    r.weight = [](double) { return 1.0; };
    if (pol == Polarization::TE) {
        r.f = [=](double z) { return amp * std::sin(kk * z); };
        r.df = [=](double z) {
            return -amp * std::sin(kk * z) / (2.0 * lambda) - amp * std::cos(kk * z) * kk * z / lambda;
        };
    } else {
        r.f = [=](double z) { return amp * std::cos(kk * z); };
        r.df = [=](double z) {
            return -amp * std::cos(kk * z) / (2.0 * lambda) + amp * std::sin(kk * z) * kk * z / lambda;
        };
    }
    return r;
}

Radial cylinder_radial(Polarization pol, int n, int m, double lambda) {
    const int an = std::abs(n);
    double root = 0.0;
    double norm = 0.0;
    if (pol == Polarization::TE) {
        root = bracketed_root(BesselKind::CylJPrime, an, m);
        norm = std::sqrt(2.0) /
               (std::cyl_bessel_j(static_cast<double>(an), root) *
                std::sqrt(1.0 - static_cast<double>(an) * an / (root * root)));
    } else {
        root = bracketed_root(BesselKind::CylJ, an, m);
        norm = std::sqrt(2.0) / std::cyl_bessel_j(an + 1.0, root);
    }
    Radial r;
    r.weight = [](double rho) { return rho; };
    r.f = [=](double rho) {
        return norm * std::cyl_bessel_j(static_cast<double>(an), root * rho / lambda) / lambda;
    };
    r.df = [=](double rho) {
        const double x = root * rho / lambda;
        return -norm * std::cyl_bessel_j(static_cast<double>(an), x) / (lambda * lambda) -
               norm * std_cyl_prime(an, x) * x / (lambda * lambda);
    };
    return r;
}

Radial sphere_radial(Polarization pol, int n, int l, double lambda) {
    double root = 0.0;
    double norm = 0.0;
    if (pol == Polarization::TE) {
        root = bracketed_root(BesselKind::SphJ, l, n);
        norm = std_sph_prime(l, root);
    } else {
        root = bracketed_root(BesselKind::SphXJPrime, l, n);
        norm = std_sph_prime(l, root) * std::sqrt(root * root - l * (l + 1.0));
    }
    const double amp = std::sqrt(2.0 / (lambda * lambda * lambda)) / norm;
    Radial r;
    r.weight = [](double x) { return x * x; };
    r.f = [=](double x) { return amp * std::sph_bessel(l, root * x / lambda); };
    r.df = [=](double x) {
        const double y = root * x / lambda;
        return -1.5 * amp * std::sph_bessel(l, y) / lambda - amp * std_sph_prime(l, y) * y / lambda;
    };
    return r;
}

}  // namespace

double bracketed_root(BesselKind kind, int order, int index) {
    if (index < 1) {
        throw std::invalid_argument("root index starts at 1");
    }
    const double step = 1e-2;
    double a = step;
    double fa = evaluate(kind, order, a);
    int found = 0;
    while (a < 1e4) {
        const double b = a + step;
        const double fb = evaluate(kind, order, b);
        if ((fa < 0.0) != (fb < 0.0)) {
            if (++found == index) {
                double lo = a;
                double hi = b;
                double flo = fa;
                while (true) {
                    const double mid = 0.5 * (lo + hi);
                    if (mid <= lo || mid >= hi) {
                        return mid;
                    }
                    const double fm = evaluate(kind, order, mid);
                    if ((fm < 0.0) == (flo < 0.0)) {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
            }
        }
        a = b;
        fa = fb;
    }
    throw std::runtime_error("bracketed_root: root not found for order " + std::to_string(order));
}

double overlap_integral_oracle(const GeometrySpec& geom, Polarization pol, const ModeIndex& k,
                               const ModeIndex& p, double lambda, double lambda_dot) {
    Radial rk;
    Radial rp;
    bool transverse_match = false;
    switch (geom.shape) {
        case Shape::Rectangular:
            transverse_match = k.a == p.a && k.b == p.b;
            rk = axial(pol, k.c, lambda);
            rp = axial(pol, p.c, lambda);
            break;
        case Shape::Cylindrical:
            if (geom.moving_wall == MovingWall::Longitudinal) {
                transverse_match = k.a == p.a && k.b == p.b;
                rk = axial(pol, k.c, lambda);
                rp = axial(pol, p.c, lambda);
            } else {
                transverse_match = k.a == p.a && k.c == p.c;
                rk = cylinder_radial(pol, k.a, k.b, lambda);
                rp = cylinder_radial(pol, p.a, p.b, lambda);
            }
            break;
        case Shape::Spherical:
            transverse_match = k.b == p.b && k.c == p.c;
            rk = sphere_radial(pol, k.a, k.b, lambda);
            rp = sphere_radial(pol, p.a, p.b, lambda);
            break;
    }
    if (!transverse_match || lambda_dot == 0.0) {
        return 0.0;
    }
    const double value =
        integrate([&](double x) { return rk.df(x) * rp.f(x) * rk.weight(x); }, 0.0, lambda);
    return -lambda_dot * value;
}

std::vector<double> squeezed_vacuum_distribution(double r, int nmax) {
    std::vector<double> out(static_cast<size_t>(nmax + 1), 0.0);
    const double t2 = std::tanh(r) * std::tanh(r);
    double term = 1.0 / std::cosh(r);
    for (int m = 0; 2 * m <= nmax; ++m) {
        out[static_cast<size_t>(2 * m)] = term;
        // (2m+2)! / (2^{2m+2} ((m+1)!)^2) over the same at m
        term *= t2 * (2.0 * m + 1.0) / (2.0 * m + 2.0);
    }
    return out;
}

std::vector<double> two_mode_squeezed_distribution(double r, int nmax) {
    std::vector<double> out(static_cast<size_t>(nmax + 1), 0.0);
    const double t2 = std::tanh(r) * std::tanh(r);
    double term = 1.0 / (std::cosh(r) * std::cosh(r));
    for (int n = 0; n <= nmax; ++n) {
        out[static_cast<size_t>(n)] = term;
        term *= t2;
    }
    return out;
}

}  // namespace dce::testing
