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

#include <string>

namespace dce {

/// Functions whose positive zeros set the cylindrical and spherical cavity
/// spectra.
enum class BesselKind {
    CylJ,        ///< J_n(x)
    CylJPrime,   ///< J'_n(x)
    SphJ,        ///< j_l(x)
    SphXJPrime,  ///< d/dx [x j_l(x)]
};

std::string to_string(BesselKind kind);

/// Cylindrical Bessel function of the first kind, integer order n >= 0.
/// Miller's downward recurrence, normalized with sum J_0^2 + 2 sum J_k^2 = 1.
double cyl_bessel_j(int n, double x);
double cyl_bessel_j_prime(int n, double x);

/// Spherical Bessel function of the first kind, l >= 0.
double sph_bessel_j(int l, double x);
/// d/dx [x j_l(x)] = x j_{l-1}(x) - l j_l(x).
double sph_bessel_xj_prime(int l, double x);

/// Evaluates the function selected by `kind` at x.
double bessel_function(BesselKind kind, int order, double x);

/// index-th positive zero (index >= 1) of the function selected by `kind`.
///
/// Zeros are found by scanning for sign changes and refined by bisection to
/// about one ulp, then cached per (kind, order). The cache is safe for
/// concurrent readers with a single writer at a time.
///
/// CylJ/CylJPrime take order >= 0, the spherical kinds order >= 1. For
/// CylJPrime with n = 0 the trivial zero at x = 0 is skipped.
double bessel_zero(BesselKind kind, int order, int index);

}  // namespace dce
