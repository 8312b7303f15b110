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

#include "dcework/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <utility>
#include <vector>

#include "dcework/error.hpp"

namespace dce {
namespace {

constexpr double kRescaleAbove = 1e150;
constexpr double kRescaleBy = 1e-150;

int miller_start(int order, double x) {
    const double scale = std::max(static_cast<double>(order), x);
    int start = order + static_cast<int>(x) + 20 + static_cast<int>(std::sqrt(40.0 * scale));
    return start + (start % 2);
}

// J_0(x) .. J_nmax(x) for x > 0.
std::vector<double> cyl_sequence(int nmax, double x) {
    std::vector<double> out(static_cast<size_t>(nmax) + 1, 0.0);
    const int start = miller_start(nmax, x);

    double above = 0.0;   // J_{k+1}
    double cur = 1e-30;   // J_k, k = start
    double sum_sq = 2.0 * cur * cur;
    double even_sum = 2.0 * cur;  // start is even
    for (int k = start; k >= 1; --k) {
        const double below = (2.0 * k / x) * cur - above;
        above = cur;
        cur = below;
        const int idx = k - 1;
        const double weight = idx == 0 ? 1.0 : 2.0;
        if (idx <= nmax) {
            out[static_cast<size_t>(idx)] = cur;
        }
        sum_sq += weight * cur * cur;
        if (idx % 2 == 0) {
            even_sum += weight * cur;
        }
        if (std::abs(cur) > kRescaleAbove) {
            cur *= kRescaleBy;
            above *= kRescaleBy;
            for (int j = idx; j <= nmax; ++j) {
                out[static_cast<size_t>(j)] *= kRescaleBy;
            }
            sum_sq *= kRescaleBy * kRescaleBy;
            even_sum *= kRescaleBy;
        }
    }
    // J_0^2 + 2 sum J_k^2 = 1 fixes the magnitude, J_0 + 2 sum J_2k = 1 the sign.
    const double norm = (even_sum > 0.0 ? 1.0 : -1.0) / std::sqrt(sum_sq);
    for (double& v : out) {
        v *= norm;
    }
    return out;
}

// j_0(x) .. j_lmax(x) for x > 0.
std::vector<double> sph_sequence(int lmax, double x) {
    std::vector<double> out(static_cast<size_t>(lmax) + 1, 0.0);
    const int start = miller_start(lmax, x);

    double above = 0.0;
    double cur = 1e-30;
    double sum_sq = (2.0 * start + 1.0) * cur * cur;
    std::vector<double> low(2, 0.0);  // unnormalized j_0, j_1
    for (int l = start; l >= 1; --l) {
        const double below = ((2.0 * l + 1.0) / x) * cur - above;
        above = cur;
        cur = below;
        const int idx = l - 1;
        if (idx <= lmax) {
            out[static_cast<size_t>(idx)] = cur;
        }
        if (idx <= 1) {
            low[static_cast<size_t>(idx)] = cur;
        }
        sum_sq += (2.0 * idx + 1.0) * cur * cur;
        if (std::abs(cur) > kRescaleAbove) {
            cur *= kRescaleBy;
            above *= kRescaleBy;
            for (int j = idx; j <= lmax; ++j) {
                out[static_cast<size_t>(j)] *= kRescaleBy;
            }
            if (idx <= 1) {
                low[static_cast<size_t>(idx)] *= kRescaleBy;
            }
            if (idx == 0) {
                low[1] *= kRescaleBy;
            }
            sum_sq *= kRescaleBy * kRescaleBy;
        }
    }
    // sum (2l+1) j_l^2 = 1; sign from whichever of j_0, j_1 is larger.
    const double j0 = std::sin(x) / x;
    const double j1 = std::sin(x) / (x * x) - std::cos(x) / x;
    double sign = 1.0;
    if (std::abs(j0) >= std::abs(j1)) {
        sign = (j0 >= 0.0) == (low[0] >= 0.0) ? 1.0 : -1.0;
    } else {
        sign = (j1 >= 0.0) == (low[1] >= 0.0) ? 1.0 : -1.0;
    }
    const double norm = sign / std::sqrt(sum_sq);
    for (double& v : out) {
        v *= norm;
    }
    return out;
}

void require_order(BesselKind kind, int order) {
    const bool spherical = kind == BesselKind::SphJ || kind == BesselKind::SphXJPrime;
    const int min_order = spherical ? 1 : 0;
    if (order < min_order) {
        throw DomainError("bessel: order " + std::to_string(order) + " below minimum " +
                          std::to_string(min_order) + " for " + to_string(kind));
    }
}

struct RootCache {
    std::shared_mutex mutex;
    std::map<std::pair<int, int>, std::vector<double>> roots;
};

RootCache& root_cache() {
    static RootCache cache;
    return cache;
}

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

double bisect(BesselKind kind, int order, double a, double b) {
    double fa = bessel_function(kind, order, a);
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) {
            break;
        }
        const double fm = bessel_function(kind, order, mid);
        if (fm == 0.0) {
            return mid;
        }
        if (sign_of(fm) == sign_of(fa)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

// Appends the next positive zero after `roots.back()` (or the first one).
void extend_roots(BesselKind kind, int order, std::vector<double>& roots) {
    constexpr double kStep = 0.1;
    constexpr int kMaxSteps = 2000000;
    double x = roots.empty() ? 0.5 * order + 0.05 : roots.back() + 0.05;
    double fx = bessel_function(kind, order, x);
    while (fx == 0.0) {
        x += 1e-3;
        fx = bessel_function(kind, order, x);
    }
    for (int step = 0; step < kMaxSteps; ++step) {
        const double next = x + kStep;
        const double fn = bessel_function(kind, order, next);
        if (fn == 0.0) {
            roots.push_back(next);
            return;
        }
        if (sign_of(fn) != sign_of(fx)) {
            roots.push_back(bisect(kind, order, x, next));
            return;
        }
        x = next;
        fx = fn;
    }
    std::ostringstream msg;
    msg << "bessel_zero: no sign change found for " << to_string(kind) << " order " << order
        << " index " << roots.size() + 1;
    throw ConvergenceError(msg.str());
}

}  // namespace

std::string to_string(BesselKind kind) {
    switch (kind) {
        case BesselKind::CylJ: return "CylJ";
        case BesselKind::CylJPrime: return "CylJPrime";
        case BesselKind::SphJ: return "SphJ";
        case BesselKind::SphXJPrime: return "SphXJPrime";
    }
    return "unknown";
}

double cyl_bessel_j(int n, double x) {
    if (n < 0) {
        throw DomainError("cyl_bessel_j: negative order");
    }
    if (x == 0.0) {
        return n == 0 ? 1.0 : 0.0;
    }
    if (x < 0.0) {
        return (n % 2 == 0 ? 1.0 : -1.0) * cyl_bessel_j(n, -x);
    }
    return cyl_sequence(n, x)[static_cast<size_t>(n)];
}

double cyl_bessel_j_prime(int n, double x) {
    if (n < 0) {
        throw DomainError("cyl_bessel_j_prime: negative order");
    }
    if (x <= 0.0) {
        if (x == 0.0) {
            return n == 1 ? 0.5 : 0.0;
        }
        return (n % 2 == 0 ? -1.0 : 1.0) * cyl_bessel_j_prime(n, -x);
    }
    const auto seq = cyl_sequence(n + 1, x);
    if (n == 0) {
        return -seq[1];
    }
    return 0.5 * (seq[static_cast<size_t>(n) - 1] - seq[static_cast<size_t>(n) + 1]);
}

double sph_bessel_j(int l, double x) {
    if (l < 0) {
        throw DomainError("sph_bessel_j: negative order");
    }
    if (x == 0.0) {
        return l == 0 ? 1.0 : 0.0;
    }
    if (x < 0.0) {
        return (l % 2 == 0 ? 1.0 : -1.0) * sph_bessel_j(l, -x);
    }
    return sph_sequence(l, x)[static_cast<size_t>(l)];
}

double sph_bessel_xj_prime(int l, double x) {
    if (l < 1) {
        throw DomainError("sph_bessel_xj_prime: order must be >= 1");
    }
    if (x == 0.0) {
        return 0.0;
    }
    const auto seq = sph_sequence(l, std::abs(x));
    const double value = std::abs(x) * seq[static_cast<size_t>(l) - 1] - l * seq[static_cast<size_t>(l)];
    // x j_l(x) has parity (-1)^{l+1}, so its derivative has parity (-1)^l.
    return (x < 0.0 && l % 2 == 1) ? -value : value;
}

double bessel_function(BesselKind kind, int order, double x) {
    switch (kind) {
        case BesselKind::CylJ: return cyl_bessel_j(order, x);
        case BesselKind::CylJPrime: return cyl_bessel_j_prime(order, x);
        case BesselKind::SphJ: return sph_bessel_j(order, x);
        case BesselKind::SphXJPrime: return sph_bessel_xj_prime(order, x);
    }
    throw DomainError("bessel_function: unknown kind");
}

double bessel_zero(BesselKind kind, int order, int index) {
    require_order(kind, order);
    if (index < 1) {
        throw DomainError("bessel_zero: index must be >= 1");
    }
    auto& cache = root_cache();
    const std::pair<int, int> key{static_cast<int>(kind), order};
    {
        std::shared_lock lock(cache.mutex);
        const auto it = cache.roots.find(key);
        if (it != cache.roots.end() && it->second.size() >= static_cast<size_t>(index)) {
            return it->second[static_cast<size_t>(index) - 1];
        }
    }
    std::unique_lock lock(cache.mutex);
    auto& roots = cache.roots[key];
    while (roots.size() < static_cast<size_t>(index)) {
        extend_roots(kind, order, roots);
    }
    return roots[static_cast<size_t>(index) - 1];
}

}  // namespace dce
