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

#include <benchmark/benchmark.h>

#include <vector>

#include "dcework/bessel.hpp"
#include "dcework/charfun.hpp"
#include "dcework/distributions.hpp"
#include "dcework/driving.hpp"
#include "dcework/fock_oracle.hpp"
#include "dcework/linalg.hpp"
#include "dcework/symplectic.hpp"

namespace {

using namespace dce;

CharfunParams sum_case(double beta) {
    CharfunParams p;
    p.variant = ResonanceVariant::SuF;
    p.beta = beta;
    p.omega_k = 1.0;
    p.omega_p = 2.0;
    p.g_tau = 0.3;
    return p;
}

GaussianDynamics sum_dynamics() {
    const auto plan = single_case_plan(ResonanceVariant::SuF, 1.0, 2.0, 0.3);
    GaussianDynamics dyn;
    dyn.omega0 = {1.0, 2.0};
    dyn.omega_tau = dyn.omega0;
    dyn.generator = interaction_generator(plan, 0);
    dyn.tau = 1.0;
    return dyn;
}

void BM_ClosedForm(benchmark::State& state) {
    const auto p = sum_case(0.2);
    double u = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(closed_form(p, u, 0.4));
        u += 1e-6;
    }
}
BENCHMARK(BM_ClosedForm);

void BM_SymplecticCharfun(benchmark::State& state) {
    const auto dyn = sum_dynamics();
    double u = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(charfun_general(dyn, 0.2, u, 0.4));
        u += 1e-6;
    }
}
BENCHMARK(BM_SymplecticCharfun);

void BM_Expm(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const CMatrix a = CMatrix::Random(n, n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(expm(a));
    }
}
BENCHMARK(BM_Expm)->Arg(4)->Arg(16)->Arg(64)->Arg(256);

void BM_WorkInversion(benchmark::State& state) {
    const auto p = sum_case(1.0 / static_cast<double>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(extract_marginal_work(
            [&](double u) { return closed_form(p, u, 0.0); }, WorkLattice{p.work_quantum(), 0.0, 64}));
    }
}
BENCHMARK(BM_WorkInversion)->Arg(1)->Arg(5)->Arg(20);

void BM_FockOracle(benchmark::State& state) {
    const auto dyn = sum_dynamics();
    const int cut = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(oracle_distribution(dyn, {cut, cut}, 1.0));
    }
}
BENCHMARK(BM_FockOracle)->Arg(30)->Arg(45)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_BesselZero(benchmark::State& state) {
    int order = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(bessel_zero(BesselKind::CylJPrime, order, 7));
        order = (order + 1) % 30;
    }
}
BENCHMARK(BM_BesselZero);

}  // namespace

BENCHMARK_MAIN();
