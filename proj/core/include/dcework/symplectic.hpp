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

#include <vector>

#include <nlohmann/json.hpp>

#include "dcework/linalg.hpp"

namespace dce {

/// The operator exp(1/2 alpha S alpha + scalar) over n bosonic modes, with
/// alpha = (a_1..a_n, a_1^dag..a_n^dag) and S complex symmetric (2n x 2n).
///
/// The same type also stores a plain quadratic operator 1/2 alpha S alpha +
/// scalar (a Hamiltonian or generator); which reading applies is up to the
/// caller. Terms are added in normal form through add_term/add_number, which
/// account for the commutator constant of the symmetric representation.
class QuadraticForm {
public:
    explicit QuadraticForm(int n = 0);
    /// Symmetrizes S on construction.
    QuadraticForm(const CMatrix& s, cplx scalar = 0.0);

    int modes() const { return n_; }
    const CMatrix& S() const { return s_; }
    cplx scalar() const { return scalar_; }

    /// Adds c * alpha_i * alpha_j (operator order as written).
    void add_term(int i, int j, cplx c);
    /// Adds c * a_k^dag a_k.
    void add_number(int k, cplx c);
    void add_scalar(cplx c) { scalar_ += c; }

    /// Index of a_k and a_k^dag inside alpha.
    int annihilator(int k) const { return k; }
    int creator(int k) const { return n_ + k; }

    QuadraticForm scaled(cplx factor) const;
    QuadraticForm& operator+=(const QuadraticForm& other);

    /// Unitary conjugation by exp(-i theta_k N_k) per mode: a_k picks up
    /// e^{i theta_k}, a_k^dag picks up e^{-i theta_k}.
    QuadraticForm phase_rotated(const std::vector<double>& theta) const;

    /// Places this form on a larger mode set; `slots[k]` is the target mode
    /// of local mode k.
    QuadraticForm embedded(int total_modes, const std::vector<int>& slots) const;

    /// The transposed operator in the number basis.
    QuadraticForm transposed() const;
    /// Commutator [alpha_i, alpha_j].
    double commutator(int i, int j) const;

    /// sum_k c_k a_k^dag a_k.
    static QuadraticForm number_form(const std::vector<cplx>& c);

private:
    int n_;
    CMatrix s_;
    cplx scalar_;
};

/// sigma = [[0, I], [-I, 0]] for n modes.
CMatrix symplectic_sigma(int n);

/// Characteristic matrix of an operator product together with its
/// accumulated scalar exponent: the operator equals e^{scalar} times the pure
/// quadratic exponential whose characteristic matrix is M.
struct CharacteristicMatrix {
    CMatrix M;
    cplx scalar = 0.0;

    int modes() const { return static_cast<int>(M.rows() / 2); }
    /// max |M^T sigma M - sigma|
    double symplectic_defect() const;
    nlohmann::json to_json() const;
};

/// exp(sigma S). Throws DivergenceError if the 1-norm of sigma S exceeds 700.
CharacteristicMatrix char_matrix(const QuadraticForm& q);

/// Left-to-right product, matching operator product order.
CharacteristicMatrix compose(const std::vector<CharacteristicMatrix>& ms);

/// (-1)^n det(M - I), the quantity whose inverse square root is the trace.
cplx trace_determinant(const CharacteristicMatrix& m);

/// Tr = e^{scalar} [(-1)^n det(M - I)]^{-1/2} on the principal square-root
/// branch. Throws DivergenceError when |det(M - I)| < 1e-12.
cplx trace_from_char(const CharacteristicMatrix& m);

/// As above, with the square-root sign chosen closest to `reference_root`
/// (a previous value of [(-1)^n det(M - I)]^{1/2} along a continuous path).
cplx trace_from_char(const CharacteristicMatrix& m, cplx reference_root, cplx* root_out);

/// Gaussian dynamics of a finite mode set: U = e^{-i tau H0} e^{-i tau V}
/// with H0 = sum omega0_k (a_k^dag a_k + 1/2). Energies are measured with
/// H = sum omega a^dag a at omega0 before and omega_tau after the drive, in
/// units of hbar.
struct GaussianDynamics {
    std::vector<double> omega0;
    std::vector<double> omega_tau;
    QuadraticForm generator;  ///< V as an operator, frequency units
    double tau = 0.0;

    int modes() const { return static_cast<int>(omega0.size()); }
    void validate() const;
};

/// Dynamics of the time-reversed drive, whose propagator is the transpose
/// of the forward one. Requires equal initial and final frequencies.
GaussianDynamics reversed(const GaussianDynamics& dyn);

struct BranchOptions {
    int initial_steps = 64;
    int max_steps = 1 << 16;
};

/// G(u, v) = Tr[U^dag e^{i u hbar H' + i v N} U e^{-i u hbar H - i v N} e^{-beta hbar H}] / Z.
///
/// Evaluated on characteristic matrices; the square-root branch is followed
/// along (t u, t v), t in [0, 1], from G(0, 0) = 1. Steps are doubled while the
/// determinant's argument jumps by pi/2 or more in one step.
cplx charfun_general(const GaussianDynamics& dyn, double beta, cplx u, cplx v, double hbar = 1.0,
                     const BranchOptions& options = {});

/// Characteristic matrices of every factor at (u, v), for debugging.
nlohmann::json charfun_debug_dump(const GaussianDynamics& dyn, double beta, cplx u, cplx v,
                                  double hbar = 1.0);

}  // namespace dce
