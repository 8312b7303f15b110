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

#include "dcework/driving.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "dcework/error.hpp"

namespace dce {
namespace {

class DisjointSets {
public:
    explicit DisjointSets(size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    size_t find(size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(size_t a, size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) {
            parent_[std::max(a, b)] = std::min(a, b);
        }
    }

private:
    std::vector<size_t> parent_;
};

void assign_groups(ResonancePlan& plan) {
    DisjointSets sets(plan.cases.size());
    std::map<ModeIndex, size_t> owner;
    for (size_t i = 0; i < plan.cases.size(); ++i) {
        for (const auto& m : plan.cases[i].modes()) {
            const auto [it, inserted] = owner.emplace(m, i);
            if (!inserted) {
                sets.unite(it->second, i);
            }
        }
    }
    std::map<size_t, size_t> group_of_root;
    plan.groups.clear();
    for (size_t i = 0; i < plan.cases.size(); ++i) {
        const size_t root = sets.find(i);
        auto it = group_of_root.find(root);
        if (it == group_of_root.end()) {
            it = group_of_root.emplace(root, plan.groups.size()).first;
            plan.groups.emplace_back();
        }
        plan.groups[it->second].push_back(i);
    }
}

}  // namespace

void DrivingProtocol::validate() const {
    std::ostringstream msg;
    if (!(lambda0 > 0.0) || !std::isfinite(lambda0)) {
        msg << "protocol: lambda0 must be positive, got " << lambda0;
    } else if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
        msg << "protocol: epsilon must lie in (0, 1), got " << epsilon;
    } else if (!(tau >= 0.0) || !std::isfinite(tau)) {
        msg << "protocol: tau must be finite and non-negative, got " << tau;
    } else if (!(hbar > 0.0) || !std::isfinite(hbar)) {
        msg << "protocol: hbar must be positive, got " << hbar;
    } else if (!std::isfinite(omega_drive) || omega_drive < 0.0) {
        msg << "protocol: drive frequency must be finite and non-negative, got " << omega_drive;
    } else if (lambda_tau && !(*lambda_tau > 0.0)) {
        msg << "protocol: lambda_tau must be positive, got " << *lambda_tau;
    } else {
        return;
    }
    throw DomainError(msg.str());
}

std::vector<std::string> DrivingProtocol::warnings() const {
    std::vector<std::string> out;
    if (epsilon >= 0.1) {
        out.push_back("epsilon = " + std::to_string(epsilon) +
                      " is not small; first-order RWA strengths may be inaccurate");
    }
    return out;
}

std::vector<ActiveMode> active_modes(const GeometrySpec& geom, Polarization pol,
                                     const std::vector<ModeIndex>& modes, double lambda0,
                                     double lambda_tau) {
    std::vector<ActiveMode> out;
    out.reserve(modes.size());
    for (const auto& m : modes) {
        out.push_back({m, mode_frequency(geom, pol, m, lambda0),
                       mode_frequency(geom, pol, m, lambda_tau)});
    }
    return out;
}

std::string to_string(ResonanceVariant variant) {
    switch (variant) {
        case ResonanceVariant::DoF: return "DoF";
        case ResonanceVariant::SuF: return "SuF";
        case ResonanceVariant::DiF: return "DiF";
    }
    return "unknown";
}

ResonanceVariant parse_variant(const std::string& text) {
    std::string t = text;
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
    if (t == "dof" || t == "double") {
        return ResonanceVariant::DoF;
    }
    if (t == "suf" || t == "sum") {
        return ResonanceVariant::SuF;
    }
    if (t == "dif" || t == "difference") {
        return ResonanceVariant::DiF;
    }
    throw DomainError("unknown resonance variant '" + text + "' (expected DoF, SuF or DiF)");
}

std::vector<ModeIndex> ResonanceCase::modes() const {
    if (variant == ResonanceVariant::DoF) {
        return {k};
    }
    return {k, p};
}

nlohmann::json ResonanceCase::to_json() const {
    return {{"variant", to_string(variant)}, {"k", k.str()},
            {"p", p.str()},                  {"omega_k", omega_k},
            {"omega_p", omega_p},            {"coupling", coupling},
            {"strength", strength},          {"detuning", detuning}};
}

CouplingModel cavity_coupling(const GeometrySpec& geom, Polarization pol, double lambda0) {
    CouplingModel model;
    model.coupling = [geom, pol](const ModeIndex& k, const ModeIndex& p) {
        return coupling_coefficient(geom, pol, k, p);
    };
    model.sensitivity = [geom, pol, lambda0](const ModeIndex& k) {
        return frequency_sensitivity(geom, pol, k, lambda0);
    };
    return model;
}

std::vector<ModeIndex> ResonancePlan::group_modes(size_t group) const {
    std::vector<ModeIndex> out;
    for (const size_t id : groups.at(group)) {
        for (const auto& m : cases.at(id).modes()) {
            if (std::find(out.begin(), out.end(), m) == out.end()) {
                out.push_back(m);
            }
        }
    }
    return out;
}

nlohmann::json ResonancePlan::to_json() const {
    nlohmann::json j;
    j["cases"] = nlohmann::json::array();
    for (size_t i = 0; i < cases.size(); ++i) {
        auto c = cases[i].to_json();
        c["id"] = i;
        j["cases"].push_back(c);
    }
    j["groups"] = groups;
    j["adiabatic_modes"] = nlohmann::json::array();
    for (const auto& e : adiabatic_modes) {
        j["adiabatic_modes"].push_back({{"mode", e.mode.str()}, {"frequency", e.frequency}});
    }
    return j;
}

double coupling_strength(ResonanceVariant variant, double epsilon, double omega_drive,
                         double omega_k, double omega_p, double coupling) {
    const double pre = epsilon * omega_drive / 4.0;
    switch (variant) {
        case ResonanceVariant::DoF:
            return pre * coupling;
        case ResonanceVariant::SuF:
            return pre * (std::sqrt(omega_k / omega_p) - std::sqrt(omega_p / omega_k)) * coupling;
        case ResonanceVariant::DiF:
            if (omega_k == omega_p) {
                throw DomainError("coupling_strength: DiF needs omega_k != omega_p");
            }
            return pre * (std::sqrt(omega_k / omega_p) + std::sqrt(omega_p / omega_k)) * coupling;
    }
    return 0.0;
}

double coupling_strength(const ResonanceCase& c, const DrivingProtocol& protocol,
                         const GeometrySpec& geom, Polarization pol) {
    const double g = c.variant == ResonanceVariant::DoF
                         ? frequency_sensitivity(geom, pol, c.k, protocol.lambda0)
                         : coupling_coefficient(geom, pol, c.k, c.p);
    return coupling_strength(c.variant, protocol.epsilon, protocol.omega_drive, c.omega_k,
                             c.omega_p, g);
}

ResonancePlan classify_resonances(const std::vector<SpectrumEntry>& spectrum,
                                  const DrivingProtocol& protocol, double tol,
                                  const CouplingModel& model) {
    protocol.validate();
    if (spectrum.empty()) {
        throw DomainError("classify_resonances: empty spectrum");
    }
    if (!(tol > 0.0)) {
        throw DomainError("classify_resonances: tolerance must be positive");
    }
    const double omega = protocol.omega_drive;
    const double negligible = 1e-12 * protocol.epsilon * omega;
    ResonancePlan plan;
    std::vector<std::string> collisions;

    auto push = [&](ResonanceVariant variant, const SpectrumEntry& k, const SpectrumEntry& p,
                    double coupling, double detuning) {
        ResonanceCase c;
        c.variant = variant;
        c.k = k.mode;
        c.p = p.mode;
        c.omega_k = k.frequency;
        c.omega_p = p.frequency;
        c.coupling = coupling;
        c.detuning = detuning;
        if (variant == ResonanceVariant::DiF && k.frequency == p.frequency) {
            return;
        }
        c.strength = coupling_strength(variant, protocol.epsilon, omega, k.frequency, p.frequency,
                                       coupling);
        if (std::abs(c.strength) > negligible) {
            plan.cases.push_back(c);
        }
    };

    for (size_t i = 0; i < spectrum.size(); ++i) {
        const auto& a = spectrum[i];
        const double dof = std::abs(omega - 2.0 * a.frequency);
        if (dof <= tol) {
            push(ResonanceVariant::DoF, a, a, model.sensitivity(a.mode), dof);
        }
        for (size_t j = i + 1; j < spectrum.size(); ++j) {
            const auto& b = spectrum[j];
            const double suf = std::abs(omega - (a.frequency + b.frequency));
            const double dif = std::abs(omega - std::abs(a.frequency - b.frequency));
            if (suf <= tol && dif <= tol) {
                collisions.push_back(a.mode.str() + "/" + b.mode.str());
                continue;
            }
            if (suf <= tol) {
                push(ResonanceVariant::SuF, a, b, model.coupling(a.mode, b.mode), suf);
            }
            if (dif <= tol) {
                const bool a_high = a.frequency > b.frequency;
                const auto& hi = a_high ? a : b;
                const auto& lo = a_high ? b : a;
                push(ResonanceVariant::DiF, hi, lo, model.coupling(hi.mode, lo.mode), dif);
            }
        }
    }
    if (!collisions.empty()) {
        std::ostringstream msg;
        msg << "classify_resonances: tolerance " << tol
            << " lets these pairs meet both the sum and the difference condition:";
        for (const auto& c : collisions) {
            msg << ' ' << c;
        }
        throw AmbiguityError(msg.str());
    }

    assign_groups(plan);
    std::vector<ModeIndex> used;
    for (const auto& c : plan.cases) {
        for (const auto& m : c.modes()) {
            used.push_back(m);
        }
    }
    std::sort(used.begin(), used.end());
    for (const auto& e : spectrum) {
        if (!std::binary_search(used.begin(), used.end(), e.mode)) {
            plan.adiabatic_modes.push_back(e);
        }
    }
    return plan;
}

ResonancePlan classify_resonances(const std::vector<SpectrumEntry>& spectrum,
                                  const DrivingProtocol& protocol, const CouplingModel& model) {
    return classify_resonances(spectrum, protocol, 1e-9 * protocol.omega_drive, model);
}

ResonancePlan single_case_plan(ResonanceVariant variant, double omega_k, double omega_p,
                               double strength) {
    if (!(omega_k > 0.0) || (variant != ResonanceVariant::DoF && !(omega_p > 0.0))) {
        throw DomainError("single_case_plan: frequencies must be positive");
    }
    if (variant == ResonanceVariant::DiF && omega_k == omega_p) {
        throw DomainError("single_case_plan: DiF needs omega_k != omega_p");
    }
    ResonanceCase c;
    c.variant = variant;
    c.k = {1, 0, 0};
    c.p = variant == ResonanceVariant::DoF ? c.k : ModeIndex{2, 0, 0};
    c.omega_k = omega_k;
    c.omega_p = variant == ResonanceVariant::DoF ? omega_k : omega_p;
    c.strength = strength;
    ResonancePlan plan;
    plan.cases.push_back(c);
    plan.groups = {{0}};
    return plan;
}

QuadraticForm EffectiveGenerator::form() const {
    const int n = static_cast<int>(modes.size());
    QuadraticForm q(n);
    const cplx i(0.0, 1.0);
    for (int k = 0; k < n; ++k) {
        const double g = gamma[static_cast<size_t>(k)];
        if (g != 0.0) {
            q.add_term(q.creator(k), q.creator(k), -i * g);
            q.add_term(q.annihilator(k), q.annihilator(k), i * g);
        }
        for (int p = 0; p < n; ++p) {
            const double hk = h[static_cast<size_t>(k)][static_cast<size_t>(p)];
            if (hk != 0.0) {
                q.add_term(q.creator(k), q.annihilator(p), -i * hk);
                q.add_term(q.creator(p), q.annihilator(k), i * hk);
            }
            const double dk = d[static_cast<size_t>(k)][static_cast<size_t>(p)];
            if (dk != 0.0) {
                q.add_term(q.creator(k), q.creator(p), -i * dk);
                q.add_term(q.annihilator(p), q.annihilator(k), i * dk);
            }
        }
    }
    if (phi == 0.0) {
        return q;
    }
    return q.phase_rotated(std::vector<double>(static_cast<size_t>(n), 0.5 * phi));
}

EffectiveGenerator effective_generator(const ResonancePlan& plan, size_t group, double phi) {
    EffectiveGenerator gen;
    gen.modes = plan.group_modes(group);
    const size_t n = gen.modes.size();
    gen.omega.assign(n, 0.0);
    gen.gamma.assign(n, 0.0);
    gen.h.assign(n, std::vector<double>(n, 0.0));
    gen.d.assign(n, std::vector<double>(n, 0.0));
    gen.phi = phi;
    auto slot = [&](const ModeIndex& m) {
        return static_cast<size_t>(std::find(gen.modes.begin(), gen.modes.end(), m) -
                                   gen.modes.begin());
    };
    for (const size_t id : plan.groups.at(group)) {
        const auto& c = plan.cases.at(id);
        const size_t k = slot(c.k);
        const size_t p = slot(c.p);
        gen.omega[k] = c.omega_k;
        gen.omega[p] = c.omega_p;
        switch (c.variant) {
            case ResonanceVariant::DoF: gen.gamma[k] += 0.5 * c.strength; break;
            case ResonanceVariant::SuF: gen.d[k][p] += c.strength; break;
            case ResonanceVariant::DiF: gen.h[k][p] += c.strength; break;
        }
    }
    return gen;
}

QuadraticForm interaction_generator(const ResonancePlan& plan, size_t group, double phi) {
    return effective_generator(plan, group, phi).form();
}

}  // namespace dce
