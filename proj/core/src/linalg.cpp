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

#include "dcework/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "dcework/error.hpp"

namespace dce {
namespace {

constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};
constexpr double kTheta13 = 5.371920351148152;

// Lower-degree approximants used when the norm is already small.
struct LowOrder {
    int degree;
    double theta;
    std::array<double, 10> b;
};
constexpr std::array<LowOrder, 4> kLowOrders = {{
    {3, 1.495585217958292e-2, {120.0, 60.0, 12.0, 1.0}},
    {5, 2.539398330063230e-1, {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0}},
    {7, 9.504178996162932e-1,
     {17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0}},
    {9, 2.097847961257068,
     {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0, 2162160.0, 110880.0,
      3960.0, 90.0, 1.0}},
}};

CMatrix low_order_pade(const CMatrix& a, const LowOrder& order) {
    const Eigen::Index n = a.rows();
    const CMatrix a2 = a * a;
    CMatrix power = CMatrix::Identity(n, n);
    CMatrix u_inner = CMatrix::Zero(n, n);
    CMatrix v = CMatrix::Zero(n, n);
    for (int k = 0; k <= order.degree; k += 2) {
        v += order.b[static_cast<size_t>(k)] * power;
        u_inner += order.b[static_cast<size_t>(k + 1)] * power;
        power = power * a2;
    }
    const CMatrix u = a * u_inner;
    return (v - u).partialPivLu().solve(v + u);
}

}  // namespace

double norm1(const CMatrix& a) {
    double best = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        best = std::max(best, a.col(j).cwiseAbs().sum());
    }
    return best;
}

CMatrix expm(const CMatrix& a) {
    if (a.rows() != a.cols()) {
        throw DomainError("expm: matrix must be square");
    }
    const Eigen::Index n = a.rows();
    if (n == 0) {
        return a;
    }
    const double norm = norm1(a);
    if (!a.allFinite() || !std::isfinite(norm)) {
        throw DivergenceError("expm: non-finite input");
    }
    if (norm == 0.0) {
        return CMatrix::Identity(n, n);
    }
    for (const auto& order : kLowOrders) {
        if (norm <= order.theta) {
            return low_order_pade(a, order);
        }
    }
    int squarings = 0;
    if (norm > kTheta13) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
    }
    const CMatrix x = a / std::ldexp(1.0, squarings);
    const CMatrix ident = CMatrix::Identity(n, n);
    const CMatrix x2 = x * x;
    const CMatrix x4 = x2 * x2;
    const CMatrix x6 = x4 * x2;
    const auto& b = kPade13;

    const CMatrix u_inner = x6 * (b[13] * x6 + b[11] * x4 + b[9] * x2) + b[7] * x6 + b[5] * x4 +
                            b[3] * x2 + b[1] * ident;
    const CMatrix u = x * u_inner;
    const CMatrix v =
        x6 * (b[12] * x6 + b[10] * x4 + b[8] * x2) + b[6] * x6 + b[4] * x4 + b[2] * x2 + b[0] * ident;

    CMatrix r = (v - u).partialPivLu().solve(v + u);
    for (int i = 0; i < squarings; ++i) {
        r = r * r;
    }
    if (!r.allFinite()) {
        throw DivergenceError("expm: result overflowed (input 1-norm " + std::to_string(norm) + ")");
    }
    return r;
}

}  // namespace dce
