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

#include "model.hpp"

#include <map>
#include <string>

#include "dcework/error.hpp"

namespace dce::cli {

Model::Model(RunConfig config) : config_(std::move(config)) {
    auto& proto = config_.protocol;
    std::map<ModeIndex, std::pair<double, double>> freq;

    if (config_.direct) {
        const auto& d = *config_.direct;
        plan_ = single_case_plan(d.variant, d.omega_k, d.omega_p, d.g_tau);
        CharfunParams p;
        p.variant = d.variant;
        p.beta = config_.beta;
        p.hbar = proto.hbar;
        p.omega_k = d.omega_k;
        p.omega_p = d.omega_p;
        p.omega_k_tau = d.omega_k_tau;
        p.omega_p_tau = d.variant == ResonanceVariant::DoF ? d.omega_k_tau : d.omega_p_tau;
        p.g_tau = d.g_tau;
        p.validate();
        params_.push_back(p);
        const auto& c = plan_.cases.front();
        freq[c.k] = {p.omega_k, p.wk_tau()};
        freq[c.p] = {p.omega_p, p.wp_tau()};
        static_ = p.static_endpoints();
        work_quantum_ = static_ ? p.work_quantum() : proto.hbar;
        config_.protocol.omega_drive = work_quantum_ / proto.hbar;
    } else {
        proto.validate();
        if (!(config_.max_frequency > 0.0)) {
            throw ConfigError("[geometry] max_frequency must be positive");
        }
        if (!(proto.omega_drive > 0.0)) {
            throw ConfigError("[protocol] omega must be positive");
        }
        const auto& geom = *config_.geometry;
        const auto pol = config_.polarization;
        const auto spectrum = mode_spectrum(geom, pol, proto.lambda0, config_.max_frequency);
        plan_ = classify_resonances(spectrum, proto, config_.numerics.resonance_tol * proto.omega_drive,
                                    cavity_coupling(geom, pol, proto.lambda0));
        const double lt = proto.final_lambda();
        static_ = lt == proto.lambda0;
        for (const auto& e : spectrum) {
            freq[e.mode] = {e.frequency, static_ ? e.frequency : mode_frequency(geom, pol, e.mode, lt)};
        }
        for (const auto& c : plan_.cases) {
            auto p = params_for_case(c, config_.beta, proto.tau, proto.hbar);
            if (!static_) {
                p.omega_k_tau = freq.at(c.k).second;
                p.omega_p_tau = freq.at(c.p).second;
            }
            params_.push_back(p);
        }
        work_quantum_ = proto.hbar * proto.omega_drive;
    }

    for (size_t g = 0; g < plan_.groups.size(); ++g) {
        for (const auto& m : plan_.group_modes(g)) {
            modes_.push_back({m, freq.at(m).first, freq.at(m).second});
        }
    }
    for (const auto& e : plan_.adiabatic_modes) {
        const auto [w0, wt] = freq.at(e.mode);
        if (w0 != wt) {
            modes_.push_back({e.mode, w0, wt});
        }
    }
}

bool Model::coupled() const {
    for (const auto& g : plan_.groups) {
        if (g.size() > 1) {
            return true;
        }
    }
    return false;
}

GaussianDynamics Model::group_dynamics(size_t group) const {
    GaussianDynamics dyn;
    for (const auto& m : plan_.group_modes(group)) {
        for (const auto& a : modes_) {
            if (a.mode == m) {
                dyn.omega0.push_back(a.omega0);
                dyn.omega_tau.push_back(a.omega_tau);
            }
        }
    }
    dyn.generator = interaction_generator(plan_, group, config_.protocol.phi);
    dyn.tau = config_.direct ? 1.0 : config_.protocol.tau;
    return dyn;
}

GaussianDynamics Model::full_dynamics() const {
    const int n = static_cast<int>(modes_.size());
    GaussianDynamics dyn;
    for (const auto& a : modes_) {
        dyn.omega0.push_back(a.omega0);
        dyn.omega_tau.push_back(a.omega_tau);
    }
    dyn.generator = QuadraticForm(n);
    int offset = 0;
    for (size_t g = 0; g < plan_.groups.size(); ++g) {
        const auto local = interaction_generator(plan_, g, config_.protocol.phi);
        std::vector<int> slots(static_cast<size_t>(local.modes()));
        for (int k = 0; k < local.modes(); ++k) {
            slots[static_cast<size_t>(k)] = offset + k;
        }
        dyn.generator += local.embedded(n, slots);
        offset += local.modes();
    }
    dyn.tau = config_.direct ? 1.0 : config_.protocol.tau;
    return dyn;
}

cplx Model::evaluate(cplx u, cplx v, bool symplectic, bool reverse) const {
    const double beta = config_.beta;
    const double hbar = config_.protocol.hbar;
    BranchOptions branch;
    branch.initial_steps = config_.numerics.branch_steps;
    cplx g = 1.0;
    for (size_t grp = 0; grp < plan_.groups.size(); ++grp) {
        const auto& ids = plan_.groups[grp];
        if (ids.size() == 1 && !symplectic) {
            const auto& p = params_[ids.front()];
            g *= closed_form_general(reverse ? reversed(p) : p, u, v).full;
        } else if (!symplectic) {
            throw CoupledCaseError(
                "resonances share modes, so no closed-form product exists; rerun with --symplectic "
                "(or --oracle) to evaluate the coupled group");
        } else {
            const auto dyn = group_dynamics(grp);
            g *= charfun_general(reverse ? reversed(dyn) : dyn, beta, u, v, hbar, branch);
        }
    }
    for (const auto& e : plan_.adiabatic_modes) {
        for (const auto& a : modes_) {
            if (a.mode == e.mode) {
                g *= reverse ? adiabatic_mode_factor(a.omega_tau, a.omega0, beta, u, hbar)
                             : adiabatic_mode_factor(a.omega0, a.omega_tau, beta, u, hbar);
            }
        }
    }
    return g;
}

cplx Model::forward(cplx u, cplx v, bool symplectic) const {
    return evaluate(u, v, symplectic, false);
}

cplx Model::reverse(cplx u, cplx v, bool symplectic) const {
    return evaluate(u, v, symplectic, true);
}

double Model::delta_phi() const {
    return grand_potential_diff(modes_, config_.beta, config_.protocol.hbar).value;
}

std::vector<int> Model::cutoffs() const {
    const auto& n = config_.numerics.n_max;
    if (n.size() == 1) {
        return std::vector<int>(modes_.size(), n.front());
    }
    if (n.size() != modes_.size()) {
        throw ConfigError("[numerics] n_max lists " + std::to_string(n.size()) + " cutoffs for " +
                          std::to_string(modes_.size()) + " active modes");
    }
    return n;
}

FockOptions Model::fock_options() const {
    FockOptions o;
    o.block_budget = config_.numerics.block_budget;
    o.leakage_threshold = config_.numerics.leakage_threshold;
    return o;
}

JointDistribution Model::oracle_forward() const {
    return oracle_distribution(full_dynamics(), cutoffs(), config_.beta, config_.protocol.hbar,
                               fock_options());
}

std::pair<JointDistribution, JointDistribution> Model::oracle_pair() const {
    const auto dyn = full_dynamics();
    const TruncatedFockSpace space(modes_, cutoffs());
    const auto evo = build_evolution(space, dyn.generator, dyn.tau, fock_options());
    const double beta = config_.beta;
    const double hbar = config_.protocol.hbar;
    return {two_point_measurement(space, evo, beta, hbar, fock_options()),
            two_point_measurement(space.reversed(), reverse_evolution(evo), beta, hbar,
                                  fock_options())};
}

}  // namespace dce::cli
