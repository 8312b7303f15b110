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

#include <utility>
#include <vector>

#include "config.hpp"
#include "dcework/charfun.hpp"
#include "dcework/fock_oracle.hpp"
#include "dcework/symplectic.hpp"

namespace dce::cli {

/// The driven system described by a configuration: its resonance plan, the
/// modes that take part, and the characteristic functions built from them.
class Model {
public:
    explicit Model(RunConfig config);

    const RunConfig& config() const { return config_; }
    const ResonancePlan& plan() const { return plan_; }
    /// Modes of every group in group order, then adiabatic modes whose
    /// frequency changes.
    const std::vector<ActiveMode>& modes() const { return modes_; }
    const std::vector<CharfunParams>& case_params() const { return params_; }
    bool static_endpoints() const { return static_; }
    /// hbar times the drive frequency: the spacing of the work lattice.
    double work_quantum() const { return work_quantum_; }
    bool coupled() const;

    GaussianDynamics group_dynamics(size_t group) const;
    GaussianDynamics full_dynamics() const;

    cplx forward(cplx u, cplx v, bool symplectic) const;
    cplx reverse(cplx u, cplx v, bool symplectic) const;
    double delta_phi() const;

    std::vector<int> cutoffs() const;
    FockOptions fock_options() const;
    /// Forward and reverse two-point statistics from the truncated Fock space.
    std::pair<JointDistribution, JointDistribution> oracle_pair() const;
    JointDistribution oracle_forward() const;

private:
    cplx evaluate(cplx u, cplx v, bool symplectic, bool reverse) const;

    RunConfig config_;
    ResonancePlan plan_;
    std::vector<ActiveMode> modes_;
    std::vector<CharfunParams> params_;
    bool static_ = true;
    double work_quantum_ = 1.0;
};

}  // namespace dce::cli
