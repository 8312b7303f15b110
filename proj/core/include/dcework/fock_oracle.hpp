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

#include <iosfwd>
#include <vector>

#include "dcework/driving.hpp"
#include "dcework/linalg.hpp"
#include "dcework/symplectic.hpp"

namespace dce {

/// Product Fock basis |n_1 .. n_m> with 0 <= n_k <= cutoff_k, ordered
/// lexicographically with the first mode most significant.
class TruncatedFockSpace {
public:
    TruncatedFockSpace(std::vector<ActiveMode> modes, std::vector<int> cutoffs);
    TruncatedFockSpace(std::vector<ActiveMode> modes, int cutoff);

    size_t dimension() const { return dimension_; }
    int mode_count() const { return static_cast<int>(modes_.size()); }
    const std::vector<ActiveMode>& modes() const { return modes_; }
    const std::vector<int>& cutoffs() const { return cutoffs_; }

    std::vector<int> occupation(size_t index) const;
    size_t index(const std::vector<int>& occupation) const;
    bool contains(const std::vector<int>& occupation) const;

    /// sum omega0 n and sum omega_tau n (frequency units, no zero point).
    double energy0(size_t index) const;
    double energy_tau(size_t index) const;
    int photons(size_t index) const;
    /// Some mode sits at its cutoff.
    bool on_top_shell(size_t index) const;

    /// Same basis with initial and final frequencies exchanged.
    TruncatedFockSpace reversed() const;

private:
    std::vector<ActiveMode> modes_;
    std::vector<int> cutoffs_;
    std::vector<size_t> strides_;
    size_t dimension_ = 0;
};

/// Matrix elements <m|X|n> of a quadratic operator, with each two-operator
/// product applied exactly and the result projected onto the box.
struct SparseElement {
    size_t row;
    size_t col;
    cplx value;
};
std::vector<SparseElement> operator_elements(const TruncatedFockSpace& space, const QuadraticForm& q);
/// Dense version, for small spaces.
CMatrix operator_matrix(const TruncatedFockSpace& space, const QuadraticForm& q);

struct FockOptions {
    size_t block_budget = 4096;       ///< largest dense block
    double leakage_threshold = 1e-8;  ///< top-shell population after the drive
};

/// U restricted to the invariant blocks of the generator (connected
/// components of its coupling graph). states[i] is the basis index of row i.
struct EvolutionBlock {
    std::vector<size_t> states;
    CMatrix U;
};

struct Evolution {
    std::vector<EvolutionBlock> blocks;
    double unitarity_defect = 0.0;

    CMatrix dense(size_t dimension) const;
};

/// U = exp(-i tau H0) exp(-i tau V) with H0 = sum omega0 (n + 1/2), by
/// Hermitian eigendecomposition of V per block. Throws DomainError if V is
/// not Hermitian and TruncationError if a block exceeds the budget.
Evolution build_evolution(const TruncatedFockSpace& space, const QuadraticForm& V, double tau,
                          const FockOptions& options = {});

/// Evolution of the time-reversed drive (the transpose of U).
Evolution reverse_evolution(const Evolution& forward);

struct JointPeak {
    double w = 0.0;
    int delta_n = 0;
    double prob = 0.0;
};

/// Delta peaks of P(w, dN). The residual mass collects the thermal weight of
/// states outside the box and the final weight left on its top shell.
struct JointDistribution {
    std::vector<JointPeak> peaks;
    double residual_mass = 0.0;

    double total() const;
    /// Header `w,delta_n,prob`, then `# residual_mass=...`.
    void write_csv(std::ostream& out) const;
};

/// Population of top-shell states in the evolved thermal state.
double top_shell_population(const TruncatedFockSpace& space, const Evolution& evo, double beta,
                            double hbar = 1.0);

/// Two-point measurement statistics with exact (unnormalized) thermal
/// weights. Peaks are merged per dN within 1e-9 hbar omega_min. Throws
/// TruncationError if the top-shell population exceeds the leakage threshold.
JointDistribution two_point_measurement(const TruncatedFockSpace& space, const Evolution& evo,
                                        double beta, double hbar = 1.0,
                                        const FockOptions& options = {});

/// sum_peaks prob exp(i u w + i v dN)
cplx charfun_numeric(const JointDistribution& dist, cplx u, cplx v);

/// Convenience: oracle distribution of one Gaussian dynamics.
JointDistribution oracle_distribution(const GaussianDynamics& dyn, const std::vector<int>& cutoffs,
                                      double beta, double hbar = 1.0,
                                      const FockOptions& options = {});

}  // namespace dce
