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

#include "dcework/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "dcework/error.hpp"
#include "dcework/format.hpp"

namespace dce {
namespace {

// Applies alpha_i to an occupation vector in place; returns the amplitude.
double apply_ladder(int n_modes, int idx, std::vector<int>& occ) {
    if (idx < n_modes) {
        int& n = occ[static_cast<size_t>(idx)];
        if (n == 0) {
            return 0.0;
        }
        const double amp = std::sqrt(static_cast<double>(n));
        --n;
        return amp;
    }
    int& n = occ[static_cast<size_t>(idx - n_modes)];
    ++n;
    return std::sqrt(static_cast<double>(n));
}

class Components {
public:
    explicit Components(size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
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

}  // namespace

TruncatedFockSpace::TruncatedFockSpace(std::vector<ActiveMode> modes, std::vector<int> cutoffs)
    : modes_(std::move(modes)), cutoffs_(std::move(cutoffs)) {
    if (modes_.empty()) {
        throw DomainError("TruncatedFockSpace: no modes");
    }
    if (cutoffs_.size() != modes_.size()) {
        throw DomainError("TruncatedFockSpace: need one cutoff per mode");
    }
    strides_.assign(modes_.size(), 1);
    dimension_ = 1;
    for (size_t k = modes_.size(); k-- > 0;) {
        if (cutoffs_[k] < 0) {
            throw DomainError("TruncatedFockSpace: negative cutoff");
        }
        strides_[k] = dimension_;
        dimension_ *= static_cast<size_t>(cutoffs_[k]) + 1;
    }
}

TruncatedFockSpace::TruncatedFockSpace(std::vector<ActiveMode> modes, int cutoff)
    : TruncatedFockSpace(modes, std::vector<int>(modes.size(), cutoff)) {}

std::vector<int> TruncatedFockSpace::occupation(size_t index) const {
    std::vector<int> occ(modes_.size());
    for (size_t k = 0; k < modes_.size(); ++k) {
        occ[k] = static_cast<int>(index / strides_[k]);
        index %= strides_[k];
    }
    return occ;
}

size_t TruncatedFockSpace::index(const std::vector<int>& occupation) const {
    size_t idx = 0;
    for (size_t k = 0; k < modes_.size(); ++k) {
        idx += static_cast<size_t>(occupation[k]) * strides_[k];
    }
    return idx;
}

bool TruncatedFockSpace::contains(const std::vector<int>& occupation) const {
    for (size_t k = 0; k < modes_.size(); ++k) {
        if (occupation[k] < 0 || occupation[k] > cutoffs_[k]) {
            return false;
        }
    }
    return true;
}

double TruncatedFockSpace::energy0(size_t index) const {
    const auto occ = occupation(index);
    double e = 0.0;
    for (size_t k = 0; k < modes_.size(); ++k) {
        e += modes_[k].omega0 * occ[k];
    }
    return e;
}

double TruncatedFockSpace::energy_tau(size_t index) const {
    const auto occ = occupation(index);
    double e = 0.0;
    for (size_t k = 0; k < modes_.size(); ++k) {
        e += modes_[k].omega_tau * occ[k];
    }
    return e;
}

int TruncatedFockSpace::photons(size_t index) const {
    const auto occ = occupation(index);
    return std::accumulate(occ.begin(), occ.end(), 0);
}

bool TruncatedFockSpace::on_top_shell(size_t index) const {
    const auto occ = occupation(index);
    for (size_t k = 0; k < modes_.size(); ++k) {
        if (occ[k] == cutoffs_[k]) {
            return true;
        }
    }
    return false;
}

TruncatedFockSpace TruncatedFockSpace::reversed() const {
    auto swapped = modes_;
    for (auto& m : swapped) {
        std::swap(m.omega0, m.omega_tau);
    }
    return TruncatedFockSpace(swapped, cutoffs_);
}

std::vector<SparseElement> operator_elements(const TruncatedFockSpace& space,
                                             const QuadraticForm& q) {
    const int n = space.mode_count();
    if (q.modes() != n) {
        throw DomainError("operator_elements: form and space disagree on mode count");
    }
    std::vector<std::pair<int, int>> terms;
    for (int i = 0; i < 2 * n; ++i) {
        for (int j = 0; j < 2 * n; ++j) {
            if (q.S()(i, j) != 0.0) {
                terms.emplace_back(i, j);
            }
        }
    }
    std::map<std::pair<size_t, size_t>, cplx> acc;
    for (size_t col = 0; col < space.dimension(); ++col) {
        const auto occ0 = space.occupation(col);
        if (q.scalar() != 0.0) {
            acc[{col, col}] += q.scalar();
        }
        for (const auto& [i, j] : terms) {
            auto occ = occ0;
            double amp = apply_ladder(n, j, occ);
            if (amp == 0.0) {
                continue;
            }
            amp *= apply_ladder(n, i, occ);
            if (amp == 0.0 || !space.contains(occ)) {
                continue;
            }
            acc[{space.index(occ), col}] += 0.5 * q.S()(i, j) * amp;
        }
    }
    std::vector<SparseElement> out;
    out.reserve(acc.size());
    for (const auto& [key, value] : acc) {
        if (value != 0.0) {
            out.push_back({key.first, key.second, value});
        }
    }
    return out;
}

CMatrix operator_matrix(const TruncatedFockSpace& space, const QuadraticForm& q) {
    const auto dim = static_cast<Eigen::Index>(space.dimension());
    CMatrix m = CMatrix::Zero(dim, dim);
    for (const auto& e : operator_elements(space, q)) {
        m(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) += e.value;
    }
    return m;
}

CMatrix Evolution::dense(size_t dimension) const {
    const auto dim = static_cast<Eigen::Index>(dimension);
    CMatrix u = CMatrix::Zero(dim, dim);
    for (const auto& b : blocks) {
        for (size_t r = 0; r < b.states.size(); ++r) {
            for (size_t c = 0; c < b.states.size(); ++c) {
                u(static_cast<Eigen::Index>(b.states[r]), static_cast<Eigen::Index>(b.states[c])) =
                    b.U(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
            }
        }
    }
    return u;
}

Evolution build_evolution(const TruncatedFockSpace& space, const QuadraticForm& V, double tau,
                          const FockOptions& options) {
    if (!(tau >= 0.0)) {
        throw DomainError("build_evolution: tau must be non-negative");
    }
    const auto elements = operator_elements(space, V);
    const size_t dim = space.dimension();
    Components comp(dim);
    for (const auto& e : elements) {
        comp.unite(e.row, e.col);
    }
    std::map<size_t, size_t> block_of_root;
    std::vector<size_t> position(dim);
    Evolution evo;
    for (size_t s = 0; s < dim; ++s) {
        const size_t root = comp.find(s);
        auto it = block_of_root.find(root);
        if (it == block_of_root.end()) {
            it = block_of_root.emplace(root, evo.blocks.size()).first;
            evo.blocks.emplace_back();
        }
        auto& states = evo.blocks[it->second].states;
        position[s] = states.size();
        states.push_back(s);
    }
    std::vector<CMatrix> h(evo.blocks.size());
    for (size_t b = 0; b < evo.blocks.size(); ++b) {
        const size_t size = evo.blocks[b].states.size();
        if (size > options.block_budget) {
            std::ostringstream msg;
            msg << "build_evolution: invariant block of dimension " << size
                << " exceeds the budget of " << options.block_budget << "; lower n_max";
            throw TruncationError(msg.str());
        }
        h[b] = CMatrix::Zero(static_cast<Eigen::Index>(size), static_cast<Eigen::Index>(size));
    }
    for (const auto& e : elements) {
        const size_t b = block_of_root.at(comp.find(e.row));
        h[b](static_cast<Eigen::Index>(position[e.row]), static_cast<Eigen::Index>(position[e.col])) +=
            e.value;
    }

    double zero_point = 0.0;
    for (const auto& m : space.modes()) {
        zero_point += 0.5 * m.omega0;
    }
    for (size_t b = 0; b < evo.blocks.size(); ++b) {
        auto& block = evo.blocks[b];
        const CMatrix& hb = h[b];
        const double scale = 1.0 + hb.cwiseAbs().maxCoeff();
        if ((hb - hb.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
            throw DomainError("build_evolution: generator is not Hermitian");
        }
        Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (hb + hb.adjoint()));
        const CVector phases =
            (eig.eigenvalues().cast<cplx>() * cplx(0.0, -tau)).array().exp().matrix();
        CMatrix u = eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
        for (size_t r = 0; r < block.states.size(); ++r) {
            const double e0 = space.energy0(block.states[r]) + zero_point;
            u.row(static_cast<Eigen::Index>(r)) *= std::polar(1.0, -tau * e0);
        }
        const auto n = u.rows();
        evo.unitarity_defect = std::max(
            evo.unitarity_defect, (u.adjoint() * u - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff());
        block.U = std::move(u);
    }
    return evo;
}

Evolution reverse_evolution(const Evolution& forward) {
    Evolution out = forward;
    for (auto& b : out.blocks) {
        b.U.transposeInPlace();
    }
    return out;
}

double JointDistribution::total() const {
    double t = 0.0;
    for (const auto& p : peaks) {
        t += p.prob;
    }
    return t;
}

void JointDistribution::write_csv(std::ostream& out) const {
    out << "w,delta_n,prob\n";
    for (const auto& p : peaks) {
        out << format_real(p.w) << ',' << p.delta_n << ',' << format_real(p.prob) << '\n';
    }
    out << "# residual_mass=" << format_real(residual_mass) << '\n';
}

namespace {

std::vector<double> thermal_weights(const TruncatedFockSpace& space, double beta, double hbar) {
    std::vector<double> log_norm(space.modes().size());
    double log_z = 0.0;
    for (size_t k = 0; k < space.modes().size(); ++k) {
        log_z += std::log1p(-std::exp(-beta * hbar * space.modes()[k].omega0));
    }
    std::vector<double> w(space.dimension());
    for (size_t s = 0; s < space.dimension(); ++s) {
        w[s] = std::exp(log_z - beta * hbar * space.energy0(s));
    }
    return w;
}

}  // namespace

double top_shell_population(const TruncatedFockSpace& space, const Evolution& evo, double beta,
                            double hbar) {
    const auto weights = thermal_weights(space, beta, hbar);
    double pop = 0.0;
    for (const auto& b : evo.blocks) {
        for (size_t r = 0; r < b.states.size(); ++r) {
            if (!space.on_top_shell(b.states[r])) {
                continue;
            }
            for (size_t c = 0; c < b.states.size(); ++c) {
                pop += weights[b.states[c]] *
                       std::norm(b.U(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)));
            }
        }
    }
    return pop;
}

JointDistribution two_point_measurement(const TruncatedFockSpace& space, const Evolution& evo,
                                        double beta, double hbar, const FockOptions& options) {
    if (!(beta > 0.0)) {
        throw DomainError("two_point_measurement: beta must be positive");
    }
    const double leak = top_shell_population(space, evo, beta, hbar);
    if (leak > options.leakage_threshold) {
        std::ostringstream msg;
        msg << "two_point_measurement: top-shell population " << leak << " exceeds "
            << options.leakage_threshold << "; increase n_max";
        throw TruncationError(msg.str());
    }
    const auto weights = thermal_weights(space, beta, hbar);

    // Final states on the top shell are contaminated by reflection off the cutoff, so their
    // weight is booked as residual mass instead of being reported as a peak.
    std::vector<JointPeak> raw;
    double untrusted = 0.0;
    for (const auto& b : evo.blocks) {
        for (size_t c = 0; c < b.states.size(); ++c) {
            const size_t from = b.states[c];
            const double e0 = space.energy0(from);
            const int n0 = space.photons(from);
            for (size_t r = 0; r < b.states.size(); ++r) {
                const double prob =
                    weights[from] *
                    std::norm(b.U(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)));
                if (prob <= 0.0) {
                    continue;
                }
                const size_t to = b.states[r];
                if (space.on_top_shell(to)) {
                    untrusted += prob;
                    continue;
                }
                raw.push_back({hbar * (space.energy_tau(to) - e0), space.photons(to) - n0, prob});
            }
        }
    }
    std::sort(raw.begin(), raw.end(), [](const JointPeak& a, const JointPeak& b) {
        return a.delta_n != b.delta_n ? a.delta_n < b.delta_n : a.w < b.w;
    });

    double w_min = std::numeric_limits<double>::infinity();
    for (const auto& m : space.modes()) {
        w_min = std::min({w_min, m.omega0, m.omega_tau});
    }
    const double tol = 1e-9 * hbar * w_min;

    JointDistribution dist;
    size_t i = 0;
    while (i < raw.size()) {
        const double start = raw[i].w;
        double mass = 0.0;
        double moment = 0.0;
        size_t j = i;
        while (j < raw.size() && raw[j].delta_n == raw[i].delta_n && raw[j].w - start <= tol) {
            mass += raw[j].prob;
            moment += raw[j].prob * raw[j].w;
            ++j;
        }
        dist.peaks.push_back({moment / mass, raw[i].delta_n, mass});
        i = j;
    }
    double log_kept = 0.0;
    for (size_t k = 0; k < space.modes().size(); ++k) {
        const double q = std::exp(-beta * hbar * space.modes()[k].omega0);
        log_kept += std::log1p(-std::pow(q, space.cutoffs()[k] + 1));
    }
    dist.residual_mass = -std::expm1(log_kept) + untrusted;
    return dist;
}

cplx charfun_numeric(const JointDistribution& dist, cplx u, cplx v) {
    cplx g = 0.0;
    const cplx i(0.0, 1.0);
    for (const auto& p : dist.peaks) {
        g += p.prob * std::exp(i * (u * p.w + v * static_cast<double>(p.delta_n)));
    }
    return g;
}

JointDistribution oracle_distribution(const GaussianDynamics& dyn, const std::vector<int>& cutoffs,
                                      double beta, double hbar, const FockOptions& options) {
    dyn.validate();
    std::vector<ActiveMode> modes;
    for (int k = 0; k < dyn.modes(); ++k) {
        modes.push_back({ModeIndex{k + 1, 0, 0}, dyn.omega0[static_cast<size_t>(k)],
                         dyn.omega_tau[static_cast<size_t>(k)]});
    }
    TruncatedFockSpace space(modes, cutoffs);
    const auto evo = build_evolution(space, dyn.generator, dyn.tau, options);
    return two_point_measurement(space, evo, beta, hbar, options);
}

}  // namespace dce
