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

#include "dcework/symplectic.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "dcework/error.hpp"

namespace dce {
namespace {

constexpr double kMaxExponentNorm = 700.0;
constexpr double kSingularDeterminant = 1e-12;

nlohmann::json complex_json(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

struct FixedFactors {
    CharacteristicMatrix evolve;    // U
    CharacteristicMatrix unevolve;  // U^dag
    CharacteristicMatrix thermal;   // e^{-beta hbar H}
};

FixedFactors fixed_factors(const GaussianDynamics& dyn, double beta, double hbar) {
    const int n = dyn.modes();
    std::vector<cplx> w0(static_cast<size_t>(n));
    std::vector<cplx> thermal(static_cast<size_t>(n));
    cplx zero_point = 0.0;
    for (int k = 0; k < n; ++k) {
        w0[static_cast<size_t>(k)] = dyn.omega0[static_cast<size_t>(k)];
        thermal[static_cast<size_t>(k)] = -beta * hbar * dyn.omega0[static_cast<size_t>(k)];
        zero_point += 0.5 * dyn.omega0[static_cast<size_t>(k)];
    }
    QuadraticForm h0 = QuadraticForm::number_form(w0);
    h0.add_scalar(zero_point);
    const cplx i_tau(0.0, dyn.tau);

    FixedFactors f;
    f.evolve = compose({char_matrix(h0.scaled(-i_tau)), char_matrix(dyn.generator.scaled(-i_tau))});
    f.unevolve = compose({char_matrix(dyn.generator.scaled(i_tau)), char_matrix(h0.scaled(i_tau))});
    f.thermal = char_matrix(QuadraticForm::number_form(thermal));
    return f;
}

std::pair<CharacteristicMatrix, CharacteristicMatrix> measurement_factors(const GaussianDynamics& dyn,
                                                                          cplx u, cplx v,
                                                                          double hbar) {
    const size_t n = static_cast<size_t>(dyn.modes());
    std::vector<cplx> after(n);
    std::vector<cplx> before(n);
    const cplx i(0.0, 1.0);
    for (size_t k = 0; k < n; ++k) {
        after[k] = i * (u * hbar * dyn.omega_tau[k] + v);
        before[k] = -i * (u * hbar * dyn.omega0[k] + v);
    }
    return {char_matrix(QuadraticForm::number_form(after)),
            char_matrix(QuadraticForm::number_form(before))};
}

CharacteristicMatrix full_product(const FixedFactors& f, const GaussianDynamics& dyn, cplx u, cplx v,
                                  double hbar) {
    const auto [after, before] = measurement_factors(dyn, u, v, hbar);
    return compose({f.unevolve, after, f.evolve, before, f.thermal});
}

}  // namespace

QuadraticForm::QuadraticForm(int n) : n_(n), s_(CMatrix::Zero(2 * n, 2 * n)), scalar_(0.0) {
    if (n < 0) {
        throw DomainError("QuadraticForm: negative mode count");
    }
}

QuadraticForm::QuadraticForm(const CMatrix& s, cplx scalar)
    : n_(static_cast<int>(s.rows() / 2)), s_(0.5 * (s + s.transpose())), scalar_(scalar) {
    if (s.rows() != s.cols() || s.rows() % 2 != 0) {
        throw DomainError("QuadraticForm: S must be square with even dimension");
    }
    if (!s.allFinite()) {
        throw DomainError("QuadraticForm: S has non-finite entries");
    }
}

double QuadraticForm::commutator(int i, int j) const {
    const bool i_ann = i < n_;
    const bool j_ann = j < n_;
    if (i_ann == j_ann) {
        return 0.0;
    }
    const int ki = i_ann ? i : i - n_;
    const int kj = j_ann ? j : j - n_;
    if (ki != kj) {
        return 0.0;
    }
    return i_ann ? 1.0 : -1.0;
}

void QuadraticForm::add_term(int i, int j, cplx c) {
    if (i < 0 || j < 0 || i >= 2 * n_ || j >= 2 * n_) {
        throw DomainError("QuadraticForm::add_term: index out of range");
    }
    if (i == j) {
        s_(i, i) += 2.0 * c;
        return;
    }
    s_(i, j) += c;
    s_(j, i) += c;
    scalar_ += 0.5 * c * commutator(i, j);
}

void QuadraticForm::add_number(int k, cplx c) { add_term(creator(k), annihilator(k), c); }

QuadraticForm QuadraticForm::scaled(cplx factor) const {
    QuadraticForm out(n_);
    out.s_ = s_ * factor;
    out.scalar_ = scalar_ * factor;
    return out;
}

QuadraticForm& QuadraticForm::operator+=(const QuadraticForm& other) {
    if (other.n_ != n_) {
        throw DomainError("QuadraticForm: mode count mismatch");
    }
    s_ += other.s_;
    scalar_ += other.scalar_;
    return *this;
}

QuadraticForm QuadraticForm::phase_rotated(const std::vector<double>& theta) const {
    if (theta.size() != static_cast<size_t>(n_)) {
        throw DomainError("QuadraticForm::phase_rotated: need one phase per mode");
    }
    CVector f(2 * n_);
    for (int k = 0; k < n_; ++k) {
        f(k) = std::polar(1.0, theta[static_cast<size_t>(k)]);
        f(n_ + k) = std::polar(1.0, -theta[static_cast<size_t>(k)]);
    }
    QuadraticForm out(n_);
    out.s_ = f.asDiagonal() * s_ * f.asDiagonal();
    out.scalar_ = scalar_;
    return out;
}

QuadraticForm QuadraticForm::embedded(int total_modes, const std::vector<int>& slots) const {
    if (slots.size() != static_cast<size_t>(n_)) {
        throw DomainError("QuadraticForm::embedded: need one slot per mode");
    }
    QuadraticForm out(total_modes);
    auto target = [&](int idx) {
        const int k = idx < n_ ? idx : idx - n_;
        const int slot = slots[static_cast<size_t>(k)];
        if (slot < 0 || slot >= total_modes) {
            throw DomainError("QuadraticForm::embedded: slot out of range");
        }
        return idx < n_ ? slot : total_modes + slot;
    };
    for (int i = 0; i < 2 * n_; ++i) {
        for (int j = 0; j < 2 * n_; ++j) {
            out.s_(target(i), target(j)) += s_(i, j);
        }
    }
    out.scalar_ = scalar_;
    return out;
}

QuadraticForm QuadraticForm::number_form(const std::vector<cplx>& c) {
    QuadraticForm q(static_cast<int>(c.size()));
    for (size_t k = 0; k < c.size(); ++k) {
        q.add_number(static_cast<int>(k), c[k]);
    }
    return q;
}

CMatrix symplectic_sigma(int n) {
    CMatrix s = CMatrix::Zero(2 * n, 2 * n);
    for (int k = 0; k < n; ++k) {
        s(k, n + k) = 1.0;
        s(n + k, k) = -1.0;
    }
    return s;
}

double CharacteristicMatrix::symplectic_defect() const {
    const CMatrix sigma = symplectic_sigma(modes());
    return (M.transpose() * sigma * M - sigma).cwiseAbs().maxCoeff();
}

nlohmann::json CharacteristicMatrix::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            row.push_back(complex_json(M(i, j)));
        }
        rows.push_back(row);
    }
    return {{"modes", modes()}, {"scalar", complex_json(scalar)}, {"M", rows}};
}

CharacteristicMatrix char_matrix(const QuadraticForm& q) {
    const CMatrix a = symplectic_sigma(q.modes()) * q.S();
    const double norm = norm1(a);
    if (norm > kMaxExponentNorm) {
        std::ostringstream msg;
        msg << "char_matrix: 1-norm of sigma*S is " << norm << ", above the overflow limit "
            << kMaxExponentNorm;
        throw DivergenceError(msg.str());
    }
    return {expm(a), q.scalar()};
}

CharacteristicMatrix compose(const std::vector<CharacteristicMatrix>& ms) {
    if (ms.empty()) {
        throw DomainError("compose: empty product");
    }
    CharacteristicMatrix out = ms.front();
    for (size_t i = 1; i < ms.size(); ++i) {
        if (ms[i].M.rows() != out.M.rows()) {
            throw DomainError("compose: dimension mismatch");
        }
        out.M = out.M * ms[i].M;
        out.scalar += ms[i].scalar;
    }
    return out;
}

cplx trace_determinant(const CharacteristicMatrix& m) {
    const int n = m.modes();
    const CMatrix shifted = m.M - CMatrix::Identity(m.M.rows(), m.M.cols());
    const cplx det = shifted.partialPivLu().determinant();
    return n % 2 == 0 ? det : -det;
}

cplx trace_from_char(const CharacteristicMatrix& m) {
    const cplx d = trace_determinant(m);
    if (std::abs(d) < kSingularDeterminant) {
        throw DivergenceError("trace_from_char: det([J] - I) is singular, the trace diverges");
    }
    return std::exp(m.scalar) / std::sqrt(d);
}

cplx trace_from_char(const CharacteristicMatrix& m, cplx reference_root, cplx* root_out) {
    const cplx d = trace_determinant(m);
    if (std::abs(d) < kSingularDeterminant) {
        throw DivergenceError("trace_from_char: det([J] - I) is singular, the trace diverges");
    }
    cplx root = std::sqrt(d);
    if (std::abs(-root - reference_root) < std::abs(root - reference_root)) {
        root = -root;
    }
    if (root_out != nullptr) {
        *root_out = root;
    }
    return std::exp(m.scalar) / root;
}

void GaussianDynamics::validate() const {
    if (omega0.size() != omega_tau.size() || static_cast<int>(omega0.size()) != generator.modes()) {
        throw DomainError("GaussianDynamics: frequency lists and generator disagree on mode count");
    }
    if (tau < 0.0 || !std::isfinite(tau)) {
        throw DomainError("GaussianDynamics: tau must be finite and non-negative");
    }
    for (size_t k = 0; k < omega0.size(); ++k) {
        if (!(omega0[k] > 0.0) || !(omega_tau[k] > 0.0)) {
            throw DomainError("GaussianDynamics: frequencies must be positive");
        }
    }
}

QuadraticForm QuadraticForm::transposed() const {
    // Transposition in the number basis swaps a_k and a_k^dag and reverses
    // products; with a symmetric S the reversal is absorbed.
    QuadraticForm out(n_);
    Eigen::PermutationMatrix<Eigen::Dynamic> swap(2 * n_);
    for (int k = 0; k < n_; ++k) {
        swap.indices()(k) = n_ + k;
        swap.indices()(n_ + k) = k;
    }
    out.s_ = swap * s_ * swap.transpose();
    out.scalar_ = scalar_;
    return out;
}

GaussianDynamics reversed(const GaussianDynamics& dyn) {
    dyn.validate();
    if (dyn.omega0 != dyn.omega_tau) {
        throw DomainError("reversed: the drive must start and end at the same frequencies");
    }
    // U^T = exp(-i tau V^T) exp(-i tau H0) = exp(-i tau H0) exp(-i tau V_R) with
    // V_R = exp(i tau H0) V^T exp(-i tau H0).
    std::vector<double> theta(dyn.omega0.size());
    for (size_t k = 0; k < theta.size(); ++k) {
        theta[k] = -dyn.tau * dyn.omega0[k];
    }
    GaussianDynamics out = dyn;
    out.generator = dyn.generator.transposed().phase_rotated(theta);
    return out;
}

cplx charfun_general(const GaussianDynamics& dyn, double beta, cplx u, cplx v, double hbar,
                     const BranchOptions& options) {
    dyn.validate();
    if (!(beta > 0.0)) {
        throw DomainError("charfun_general: beta must be positive");
    }
    if (u == 0.0 && v == 0.0) {
        return 1.0;
    }
    const FixedFactors fixed = fixed_factors(dyn, beta, hbar);
    const cplx dz = trace_determinant(fixed.thermal);
    const cplx root_z = std::sqrt(dz);

    for (int steps = options.initial_steps; steps <= options.max_steps; steps *= 2) {
        cplx prev_d = dz;
        cplx prev_root = root_z;
        bool ok = true;
        CharacteristicMatrix product;
        for (int s = 1; s <= steps; ++s) {
            const double t = static_cast<double>(s) / steps;
            product = full_product(fixed, dyn, t * u, t * v, hbar);
            const cplx d = trace_determinant(product);
            if (std::abs(d) < kSingularDeterminant) {
                throw DivergenceError(
                    "charfun_general: path from (0,0) crosses a divergent trace; perturb (u, v)");
            }
            if (std::abs(std::arg(d / prev_d)) >= 0.5 * std::numbers::pi) {
                ok = false;
                break;
            }
            cplx root = std::sqrt(d);
            if (std::abs(-root - prev_root) < std::abs(root - prev_root)) {
                root = -root;
            }
            prev_root = root;
            prev_d = d;
        }
        if (ok) {
            return std::exp(product.scalar - fixed.thermal.scalar) * root_z / prev_root;
        }
    }
    throw ConvergenceError(
        "charfun_general: branch tracking did not converge; perturb the (u, v) path");
}

nlohmann::json charfun_debug_dump(const GaussianDynamics& dyn, double beta, cplx u, cplx v,
                                  double hbar) {
    dyn.validate();
    const FixedFactors fixed = fixed_factors(dyn, beta, hbar);
    const auto [after, before] = measurement_factors(dyn, u, v, hbar);
    const auto product = compose({fixed.unevolve, after, fixed.evolve, before, fixed.thermal});
    return {{"u", complex_json(u)},
            {"v", complex_json(v)},
            {"beta", beta},
            {"hbar", hbar},
            {"unevolve", fixed.unevolve.to_json()},
            {"after", after.to_json()},
            {"evolve", fixed.evolve.to_json()},
            {"before", before.to_json()},
            {"thermal", fixed.thermal.to_json()},
            {"product", product.to_json()},
            {"trace_determinant", complex_json(trace_determinant(product))}};
}

}  // namespace dce
