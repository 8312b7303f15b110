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


#include <cmath>
#include <map>
#include <sstream>

#include "doctest.h"
#include "dcework/charfun.hpp"
#include "dcework/error.hpp"
#include "dcework/fock_oracle.hpp"
#include "dcework/symplectic.hpp"
#include "oracles.hpp"

using namespace dce;

namespace {

constexpr cplx kI(0.0, 1.0);

GaussianDynamics dynamics(ResonanceVariant variant, double wk, double wp, double gt, double tau) {
    const auto plan = single_case_plan(variant, wk, wp, gt / tau);
    GaussianDynamics dyn;
    dyn.omega0 = variant == ResonanceVariant::DoF ? std::vector<double>{wk} : std::vector<double>{wk, wp};
    dyn.omega_tau = dyn.omega0;
    dyn.generator = interaction_generator(plan, 0);
    dyn.tau = tau;
    return dyn;
}

TruncatedFockSpace space_for(const GaussianDynamics& dyn, const std::vector<int>& cut) {
    std::vector<ActiveMode> modes;
    for (int k = 0; k < dyn.modes(); ++k) {
        modes.push_back({{k + 1, 0, 0}, dyn.omega0[static_cast<size_t>(k)], dyn.omega_tau[static_cast<size_t>(k)]});
    }
    return TruncatedFockSpace(modes, cut);
}

double mean_photons_from_vacuum(const TruncatedFockSpace& space, const Evolution& evo) {
    const CMatrix u = evo.dense(space.dimension());
    double n = 0.0;
    for (size_t i = 0; i < space.dimension(); ++i) {
        n += std::norm(u(static_cast<Eigen::Index>(i), 0)) * space.photons(i);
    }
    return n;
}

}  // namespace

TEST_SUITE("fock_oracle") {

TEST_CASE("basis bookkeeping") {
    TruncatedFockSpace space({{{1, 0, 0}, 1.0, 1.0}, {{2, 0, 0}, 2.5, 2.0}}, {3, 4});
    CHECK(space.dimension() == 20);
    for (size_t i = 0; i < space.dimension(); ++i) {
        CHECK(space.index(space.occupation(i)) == i);
    }
    CHECK(space.occupation(0) == std::vector<int>{0, 0});
    const size_t idx = space.index({2, 3});
    CHECK(space.energy0(idx) == doctest::Approx(2.0 + 7.5));
    CHECK(space.energy_tau(idx) == doctest::Approx(2.0 + 6.0));
    CHECK(space.photons(idx) == 5);
    CHECK(space.on_top_shell(space.index({3, 0})));
    CHECK(!space.on_top_shell(space.index({2, 3})));
    CHECK(!space.contains({4, 0}));
    CHECK(space.reversed().energy0(idx) == doctest::Approx(space.energy_tau(idx)));
    const auto dyn = dynamics(ResonanceVariant::DoF, 1.0, 1.0, 0.3, 10.0);
    CHECK_THROWS_AS(build_evolution(space_for(dyn, {9000}), dyn.generator, dyn.tau), TruncationError);
}

TEST_CASE("free evolution is diagonal phases") {
    TruncatedFockSpace space({{{1, 0, 0}, 1.3, 1.3}}, 10);
    const auto evo = build_evolution(space, QuadraticForm(1), 2.0);
    const CMatrix u = evo.dense(space.dimension());
    for (int n = 0; n <= 10; ++n) {
        CHECK(std::abs(u(n, n) - std::exp(-kI * 1.3 * (n + 0.5) * 2.0)) < 1e-12);
    }
    CHECK(std::abs(u.norm() * u.norm() - 11.0) < 1e-10);
}

TEST_CASE("squeezing from vacuum") {
    const double gt = 0.3;
    const auto dyn = dynamics(ResonanceVariant::DoF, 1.0, 1.0, gt, 10.0);
    const auto space = space_for(dyn, {80});
    const auto evo = build_evolution(space, dyn.generator, dyn.tau);
    CHECK(mean_photons_from_vacuum(space, evo) == doctest::Approx(std::pow(std::sinh(gt), 2)).epsilon(1e-8));
    CHECK(evo.unitarity_defect < 1e-10);

    const auto dist = oracle_distribution(dyn, {80}, 50.0);
    const auto series = testing::squeezed_vacuum_distribution(gt, 40);
    std::map<int, double> by_n;
    for (const auto& p : dist.peaks) {
        by_n[p.delta_n] += p.prob;
    }
    for (int n = 0; n <= 40; n += 2) {
        CHECK(std::abs(by_n[n] - series[static_cast<size_t>(n)]) < 1e-6);
    }
}

TEST_CASE("two-mode squeezing from vacuum") {
    const double gt = 0.4;
    const auto dyn = dynamics(ResonanceVariant::SuF, 1.0, 2.0, gt, 10.0);
    const auto dist = oracle_distribution(dyn, {30, 30}, 50.0);
    const auto series = testing::two_mode_squeezed_distribution(gt, 20);
    std::map<int, double> by_n;
    for (const auto& p : dist.peaks) {
        by_n[p.delta_n] += p.prob;
    }
    for (int n = 0; n <= 20; ++n) {
        CHECK(std::abs(by_n[2 * n] - series[static_cast<size_t>(n)]) < 1e-6);
    }
}

TEST_CASE("difference driving conserves photon number") {
    const auto dyn = dynamics(ResonanceVariant::DiF, 2.0, 1.0, 0.3, 10.0);
    const auto space = space_for(dyn, {12, 12});
    const auto evo = build_evolution(space, dyn.generator, dyn.tau);
    const CMatrix u = evo.dense(space.dimension());
    for (size_t col = 0; col < space.dimension(); ++col) {
        for (size_t row = 0; row < space.dimension(); ++row) {
            if (space.photons(row) != space.photons(col)) {
                CHECK(std::abs(u(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col))) < 1e-14);
            }
        }
    }
    for (const auto& p : oracle_distribution(dyn, {40, 40}, 1.0).peaks) {
        CHECK(p.delta_n == 0);
    }
}

TEST_CASE("identity evolution gives a single peak") {
    TruncatedFockSpace space({{{1, 0, 0}, 1.0, 1.0}}, 60);
    const auto evo = build_evolution(space, QuadraticForm(1), 0.0);
    const auto dist = two_point_measurement(space, evo, 1.0);
    REQUIRE(dist.peaks.size() == 1);
    CHECK(dist.peaks[0].w == 0.0);
    CHECK(dist.peaks[0].delta_n == 0);
    CHECK(dist.peaks[0].prob + dist.residual_mass == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("thermal double-frequency support and identities") {
    const auto dyn = dynamics(ResonanceVariant::DoF, 1.0, 1.0, 0.3, 10.0);
    const auto dist = oracle_distribution(dyn, {200}, 0.2);
    CHECK(std::abs(dist.total() + dist.residual_mass - 1.0) < 1e-12);
    for (const auto& p : dist.peaks) {
        CHECK(p.delta_n % 2 == 0);
        CHECK(p.prob >= 0.0);
        CHECK(std::abs(p.w - p.delta_n * 1.0) < 1e-9);
    }
    CHECK(std::abs(charfun_numeric(dist, 0.0, 0.0) - (1.0 - dist.residual_mass)) < 1e-14);
    CHECK(std::abs(charfun_numeric(dist, kI * 0.2, 0.0) - 1.0) < 1e-8);
}

TEST_CASE("detailed balance between forward and reverse distributions") {
    const auto dyn = dynamics(ResonanceVariant::SuF, 1.0, 2.0, 0.3, 10.0);
    const auto space = space_for(dyn, {40, 25});
    const auto evo = build_evolution(space, dyn.generator, dyn.tau);
    const auto fwd = two_point_measurement(space, evo, 1.0);
    const auto rev = two_point_measurement(space.reversed(), reverse_evolution(evo), 1.0);
    std::map<std::pair<long long, int>, double> rev_map;
    for (const auto& p : rev.peaks) {
        rev_map[{std::llround(p.w * 1e6), p.delta_n}] = p.prob;
    }
    int checked = 0;
    for (const auto& p : fwd.peaks) {
        const auto it = rev_map.find({std::llround(-p.w * 1e6), -p.delta_n});
        if (p.prob > 1e-10 && it != rev_map.end() && it->second > 1e-10) {
            CHECK(std::abs(p.prob / it->second / std::exp(p.w) - 1.0) < 1e-6);
            ++checked;
        }
    }
    CHECK(checked >= 5);
}

TEST_CASE("reversed dynamics propagate with the transpose") {
    const auto plan = single_case_plan(ResonanceVariant::SuF, 1.0, 2.3, 0.04);
    GaussianDynamics dyn;
    dyn.omega0 = {1.0, 2.3};
    dyn.omega_tau = dyn.omega0;
    dyn.generator = interaction_generator(plan, 0, 0.7);
    dyn.tau = 3.1;
    const auto space = space_for(dyn, {6, 6});
    const CMatrix expected = reverse_evolution(build_evolution(space, dyn.generator, dyn.tau)).dense(space.dimension());
    const auto back = reversed(dyn);
    const CMatrix got = build_evolution(space, back.generator, back.tau).dense(space.dimension());
    CHECK((got - expected).cwiseAbs().maxCoeff() < 1e-12);

    dyn.omega_tau = {1.1, 2.3};
    CHECK_THROWS_AS(reversed(dyn), DomainError);
}

TEST_CASE("doubling the cutoff moves peaks by less than the residual") {
    const auto dyn = dynamics(ResonanceVariant::DoF, 1.0, 1.0, 0.3, 10.0);
    FockOptions relaxed;
    relaxed.leakage_threshold = 1.0;
    const auto coarse = oracle_distribution(dyn, {50}, 0.3, 1.0, relaxed);
    const auto fine = oracle_distribution(dyn, {100}, 0.3, 1.0, relaxed);
    std::map<int, double> fine_map;
    for (const auto& p : fine.peaks) {
        fine_map[p.delta_n] = p.prob;
    }
    for (const auto& p : coarse.peaks) {
        CHECK(std::abs(p.prob - fine_map[p.delta_n]) <= coarse.residual_mass);
    }

    // Deep in the converged regime only rounding separates the two runs.
    const auto cold = oracle_distribution(dyn, {40}, 1.0);
    const auto colder = oracle_distribution(dyn, {80}, 1.0);
    std::map<int, double> cold_map;
    for (const auto& p : colder.peaks) {
        cold_map[p.delta_n] = p.prob;
    }
    for (const auto& p : cold.peaks) {
        CHECK(std::abs(p.prob - cold_map[p.delta_n]) <= cold.residual_mass + 1e-12);
    }
}

TEST_CASE("leakage guard") {
    const auto dyn = dynamics(ResonanceVariant::DoF, 1.0, 1.0, 0.3, 10.0);
    CHECK_THROWS_AS(oracle_distribution(dyn, {20}, 0.2), TruncationError);
}

TEST_CASE("distribution csv") {
    JointDistribution d;
    d.peaks = {{-2.0, -2, 0.25}, {0.0, 0, 0.5}, {2.0, 2, 0.2}};
    d.residual_mass = 0.05;
    std::ostringstream out;
    d.write_csv(out);
    CHECK(out.str() == "w,delta_n,prob\n-2,-2,0.25\n0,0,0.5\n2,2,0.2\n# residual_mass=0.05\n");
}

}
