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

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "dcework/fock_oracle.hpp"
#include "dcework/linalg.hpp"

namespace dce {

/// Support w = offset + m * spacing, m in [-count/2, count/2).
struct WorkLattice {
    double spacing = 1.0;
    double offset = 0.0;
    int count = 64;
};

struct WorkPeak {
    double w = 0.0;
    double prob = 0.0;
};

struct PhotonPeak {
    int delta_n = 0;
    double prob = 0.0;
};

struct InversionOptions {
    double periodicity_tol = 1e-8;
    double imaginary_tol = 1e-10;
    double negative_floor = -1e-10;
    double tail_tol = 1e-10;
    int max_count = 1 << 16;
    /// Peaks with |prob| below this are left out of the result.
    double drop_below = 1e-15;
};

/// P(w) from G(u, 0) by an exact discrete Fourier sum over one period
/// 2 pi / spacing. The grid doubles until the outer half of the index range
/// carries less than tail_tol. Throws DomainError if G is not periodic with
/// that period and ConvergenceError if probabilities come out complex or
/// negative beyond the noise floor.
std::vector<WorkPeak> extract_marginal_work(const std::function<cplx(double)>& g_of_u,
                                            WorkLattice lattice,
                                            const InversionOptions& options = {});

/// Same support, but also samples G(u + i beta, 0) so that weights at
/// negative w are recovered as exp(beta w) times the tilted coefficients.
/// Sums such as sum_w P(w) exp(-beta w) then keep full relative precision.
std::vector<WorkPeak> extract_marginal_work(const std::function<cplx(cplx)>& g_of_u, double beta,
                                            WorkLattice lattice,
                                            const InversionOptions& options = {});

/// P(dN) from G(0, v) over v in [0, 2 pi).
std::vector<PhotonPeak> extract_marginal_photons(const std::function<cplx(double)>& g_of_v,
                                                 const InversionOptions& options = {});

/// P(w, dN) by a two-dimensional discrete Fourier sum, for a fixed grid of
/// lattice.count points in u and `photon_count` points in v.
JointDistribution extract_joint(const std::function<cplx(double, double)>& g, WorkLattice lattice,
                                int photon_count, const InversionOptions& options = {});

std::vector<WorkPeak> work_marginal(const JointDistribution& dist, double merge_tol);
std::vector<PhotonPeak> photon_marginal(const JointDistribution& dist);

struct CumulativePoint {
    double w = 0.0;
    double f_exact = 0.0;  ///< running sum including this peak
    double f_gauss = 0.0;
};

struct CumulativeFit {
    std::vector<CumulativePoint> points;
    double mean = 0.0;
    double stddev = 0.0;
    double sup_distance = 0.0;
    /// Zero variance: the fit degenerates to a step at the mean.
    bool degenerate = false;
};

/// Step cumulative of a discrete marginal against a Gaussian cumulative with
/// the same mean and standard deviation. The sup distance is evaluated on
/// both sides of every jump.
CumulativeFit cumulative_and_fit(const std::vector<WorkPeak>& marginal);

/// Kolmogorov-Smirnov distance between the step cumulative of `marginal` and
/// a continuous cumulative.
double compare_classical(const std::vector<WorkPeak>& marginal,
                         const std::function<double(double)>& classical_cdf);

/// Writes `w,F_exact,F_gauss,F_classical` at each peak.
void write_cumulative_csv(std::ostream& out, const CumulativeFit& fit,
                          const std::function<double(double)>& classical_cdf);
void write_work_csv(std::ostream& out, const std::vector<WorkPeak>& peaks);
void write_photon_csv(std::ostream& out, const std::vector<PhotonPeak>& peaks);

struct VerificationReport {
    double jarzynski_lhs_re = 0.0;
    double jarzynski_lhs_im = 0.0;
    double jarzynski_rhs = 0.0;
    double abs_error = 0.0;
    std::optional<double> jarzynski_direct_error;
    double crooks_max_error = 0.0;
    std::optional<double> crooks_peak_max_error;
    std::optional<double> periodicity_max_error;
    double normalization_error = 0.0;

    struct Thresholds {
        double jarzynski = 1e-10;
        double crooks = 1e-9;
        double periodicity = 1e-10;
        double normalization = 1e-10;
        double peaks = 1e-6;
    };
    bool passed(const Thresholds& t) const;
    bool passed() const { return passed(Thresholds{}); }
    nlohmann::json to_json() const;
};

/// What the verifier needs: forward and reverse characteristic functions of
/// the complete active mode set, the grand-potential difference, and
/// optionally a u-period and forward/reverse distributions.
struct FluctuationInputs {
    std::function<cplx(cplx, cplx)> forward;
    std::function<cplx(cplx, cplx)> reverse;
    double beta = 1.0;
    double mu = 0.0;
    double delta_phi = 0.0;
    std::optional<double> period;
    /// Forward work marginal for the direct sum of exp(-beta w).
    std::optional<std::vector<WorkPeak>> forward_work;
    /// Forward and reverse joint distributions for the peakwise Crooks test.
    std::optional<JointDistribution> forward_joint;
    std::optional<JointDistribution> reverse_joint;
    int grid = 64;
    /// The (u, v) grid spans u in [-u_extent, u_extent], v in [-pi, pi].
    double u_extent = 1.0;
};

/// Jarzynski at (i beta, -i beta mu) and by direct summation, Crooks
/// G_R(-u, -v) = G_F(u + i beta, v - i beta mu) e^{beta dPhi} on a grid x grid
/// set of points, periodicity in u, and G(0, 0) = 1.
VerificationReport verify_fluctuation_theorems(const FluctuationInputs& inputs);

}  // namespace dce
