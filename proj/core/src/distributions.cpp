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

#include "dcework/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "dcework/error.hpp"
#include "dcework/format.hpp"

namespace dce {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr cplx kI(0.0, 1.0);

void require_real_probability(cplx p, const InversionOptions& options, const char* where) {
    if (std::abs(p.imag()) > options.imaginary_tol) {
        std::ostringstream msg;
        msg << where << ": inverted probability has imaginary part " << p.imag();
        throw ConvergenceError(msg.str());
    }
    if (p.real() < options.negative_floor) {
        std::ostringstream msg;
        msg << where << ": negative probability " << p.real()
            << " (inconsistent characteristic function or square-root branch)";
        throw ConvergenceError(msg.str());
    }
}

// Sup distance between a step cumulative over sorted peaks and a cumulative
// function, comparing left limits before each jump and values after it.
template <typename Cdf>
double step_sup_distance(const std::vector<WorkPeak>& sorted, const Cdf& cdf) {
    double below = 0.0;
    double worst = 0.0;
    for (const auto& p : sorted) {
        const double left = cdf(std::nextafter(p.w, -std::numeric_limits<double>::infinity()));
        const double at = cdf(p.w);
        const double above = below + p.prob;
        worst = std::max({worst, std::abs(left - below), std::abs(at - above)});
        below = above;
    }
    return worst;
}

std::vector<WorkPeak> sorted_by_w(std::vector<WorkPeak> peaks) {
    std::sort(peaks.begin(), peaks.end(),
              [](const WorkPeak& a, const WorkPeak& b) { return a.w < b.w; });
    return peaks;
}

}  // namespace

namespace {

void require_periodic(const std::function<cplx(double)>& g_of_u, double period, double offset,
                      const InversionOptions& options) {
    const cplx shift = std::exp(-kI * period * offset);
    for (int s = 0; s < 4; ++s) {
        const double u = (0.1234 + 0.377 * s) * period;
        const cplx a = g_of_u(u);
        const cplx b = g_of_u(u + period) * shift;
        if (std::abs(a - b) > options.periodicity_tol * std::max(1.0, std::abs(a))) {
            std::ostringstream msg;
            msg << "extract_marginal_work: G(u, 0) is not periodic with period " << period
                << " (mismatch " << std::abs(a - b)
                << "); the work support is not a single lattice, use the Fock oracle";
            throw DomainError(msg.str());
        }
    }
}

// Lattice weights c_m for m in [-count/2, count/2) from samples of
// sum_m c_m exp(i u (offset + m spacing)) at u_j = period * j / count.
std::vector<cplx> lattice_coefficients(const std::function<cplx(double)>& g_of_u, double period,
                                       double offset, int count) {
    std::vector<cplx> g(static_cast<size_t>(count));
    for (int j = 0; j < count; ++j) {
        g[static_cast<size_t>(j)] = g_of_u(period * j / count);
    }
    std::vector<cplx> c(static_cast<size_t>(count));
    for (int idx = 0; idx < count; ++idx) {
        const int m = idx - count / 2;
        cplx acc = 0.0;
        for (int j = 0; j < count; ++j) {
            // u_j * w = 2 pi j m / count + u_j * offset
            const double phase =
                -kTwoPi * static_cast<double>((static_cast<long long>(j) * m) % count) / count -
                period * j / count * offset;
            acc += g[static_cast<size_t>(j)] * std::polar(1.0, phase);
        }
        c[static_cast<size_t>(idx)] = acc / static_cast<double>(count);
    }
    return c;
}

int initial_count(const WorkLattice& lattice) {
    const int count = std::max(8, lattice.count);
    return count + count % 2;
}

}  // namespace

std::vector<WorkPeak> extract_marginal_work(const std::function<cplx(double)>& g_of_u,
                                            WorkLattice lattice, const InversionOptions& options) {
    if (!(lattice.spacing > 0.0)) {
        throw DomainError("extract_marginal_work: lattice spacing must be positive");
    }
    const double period = kTwoPi / lattice.spacing;
    require_periodic(g_of_u, period, lattice.offset, options);

    for (int count = initial_count(lattice); count <= options.max_count; count *= 2) {
        const auto p = lattice_coefficients(g_of_u, period, lattice.offset, count);
        double tail = 0.0;
        for (int idx = 0; idx < count; ++idx) {
            if (std::abs(idx - count / 2) >= count / 4) {
                tail += std::abs(p[static_cast<size_t>(idx)]);
            }
        }
        if (tail >= options.tail_tol) {
            continue;
        }
        std::vector<WorkPeak> out;
        for (int idx = 0; idx < count; ++idx) {
            const cplx pm = p[static_cast<size_t>(idx)];
            require_real_probability(pm, options, "extract_marginal_work");
            if (pm.real() >= options.drop_below) {
                out.push_back({lattice.offset + (idx - count / 2) * lattice.spacing, pm.real()});
            }
        }
        return out;
    }
    throw ConvergenceError("extract_marginal_work: tail mass did not fall below tolerance");
}

std::vector<WorkPeak> extract_marginal_work(const std::function<cplx(cplx)>& g_of_u, double beta,
                                            WorkLattice lattice, const InversionOptions& options) {
    if (!(lattice.spacing > 0.0) || !(beta > 0.0)) {
        throw DomainError("extract_marginal_work: lattice spacing and beta must be positive");
    }
    const double period = kTwoPi / lattice.spacing;
    const std::function<cplx(double)> plain = [&](double u) { return g_of_u(cplx(u, 0.0)); };
    const std::function<cplx(double)> tilted = [&](double u) { return g_of_u(cplx(u, beta)); };
    require_periodic(plain, period, lattice.offset, options);

    for (int count = initial_count(lattice); count <= options.max_count; count *= 2) {
        const auto p = lattice_coefficients(plain, period, lattice.offset, count);
        // q_m = p_m exp(-beta w_m) decays on the negative side, where p_m
        // alone would lose its relative precision.
        const auto q = lattice_coefficients(tilted, period, lattice.offset, count);
        double tail = 0.0;
        for (int idx = 0; idx < count; ++idx) {
            const int m = idx - count / 2;
            if (m >= count / 4) {
                tail += std::abs(p[static_cast<size_t>(idx)]);
            } else if (m <= -count / 4) {
                tail += std::abs(q[static_cast<size_t>(idx)]);
            }
        }
        if (tail >= options.tail_tol) {
            continue;
        }
        std::vector<WorkPeak> out;
        for (int idx = 0; idx < count; ++idx) {
            const double w = lattice.offset + (idx - count / 2) * lattice.spacing;
            const cplx pm = p[static_cast<size_t>(idx)];
            const cplx qm = q[static_cast<size_t>(idx)];
            require_real_probability(pm, options, "extract_marginal_work");
            require_real_probability(qm, options, "extract_marginal_work");
            if (pm.real() < options.drop_below && qm.real() < options.drop_below) {
                continue;
            }
            out.push_back({w, w >= 0.0 ? pm.real() : qm.real() * std::exp(beta * w)});
        }
        return out;
    }
    throw ConvergenceError("extract_marginal_work: tail mass did not fall below tolerance");
}

std::vector<PhotonPeak> extract_marginal_photons(const std::function<cplx(double)>& g_of_v,
                                                 const InversionOptions& options) {
    for (int count = 64; count <= options.max_count; count *= 2) {
        std::vector<cplx> g(static_cast<size_t>(count));
        for (int j = 0; j < count; ++j) {
            g[static_cast<size_t>(j)] = g_of_v(kTwoPi * j / count);
        }
        std::vector<cplx> p(static_cast<size_t>(count));
        double tail = 0.0;
        for (int idx = 0; idx < count; ++idx) {
            const int n = idx - count / 2;
            cplx acc = 0.0;
            for (int j = 0; j < count; ++j) {
                const double phase =
                    -kTwoPi * static_cast<double>((static_cast<long long>(j) * n) % count) / count;
                acc += g[static_cast<size_t>(j)] * std::polar(1.0, phase);
            }
            p[static_cast<size_t>(idx)] = acc / static_cast<double>(count);
            if (std::abs(n) >= count / 4) {
                tail += std::abs(p[static_cast<size_t>(idx)]);
            }
        }
        if (tail >= options.tail_tol) {
            continue;
        }
        std::vector<PhotonPeak> out;
        for (int idx = 0; idx < count; ++idx) {
            const cplx pn = p[static_cast<size_t>(idx)];
            require_real_probability(pn, options, "extract_marginal_photons");
            if (pn.real() >= options.drop_below) {
                out.push_back({idx - count / 2, pn.real()});
            }
        }
        return out;
    }
    throw ConvergenceError("extract_marginal_photons: tail mass did not fall below tolerance");
}

JointDistribution extract_joint(const std::function<cplx(double, double)>& g, WorkLattice lattice,
                                int photon_count, const InversionOptions& options) {
    if (!(lattice.spacing > 0.0) || lattice.count < 2 || photon_count < 2) {
        throw DomainError("extract_joint: invalid grid");
    }
    const double period = kTwoPi / lattice.spacing;
    const int mu = lattice.count;
    const int nv = photon_count;
    CMatrix values(mu, nv);
    for (int j = 0; j < mu; ++j) {
        for (int l = 0; l < nv; ++l) {
            values(j, l) = g(period * j / mu, kTwoPi * l / nv);
        }
    }
    JointDistribution out;
    for (int n_idx = 0; n_idx < nv; ++n_idx) {
        const int n = n_idx - nv / 2;
        for (int m_idx = 0; m_idx < mu; ++m_idx) {
            const int m = m_idx - mu / 2;
            cplx acc = 0.0;
            for (int j = 0; j < mu; ++j) {
                const double pu =
                    -kTwoPi * static_cast<double>((static_cast<long long>(j) * m) % mu) / mu -
                    period * j / mu * lattice.offset;
                for (int l = 0; l < nv; ++l) {
                    const double pv =
                        -kTwoPi * static_cast<double>((static_cast<long long>(l) * n) % nv) / nv;
                    acc += values(j, l) * std::polar(1.0, pu + pv);
                }
            }
            const cplx p = acc / static_cast<double>(mu * nv);
            require_real_probability(p, options, "extract_joint");
            if (p.real() >= options.drop_below) {
                out.peaks.push_back({lattice.offset + m * lattice.spacing, n, p.real()});
            }
        }
    }
    return out;
}

std::vector<WorkPeak> work_marginal(const JointDistribution& dist, double merge_tol) {
    std::vector<WorkPeak> raw;
    raw.reserve(dist.peaks.size());
    for (const auto& p : dist.peaks) {
        raw.push_back({p.w, p.prob});
    }
    raw = sorted_by_w(std::move(raw));
    std::vector<WorkPeak> out;
    size_t i = 0;
    while (i < raw.size()) {
        const double start = raw[i].w;
        double mass = 0.0;
        double moment = 0.0;
        size_t j = i;
        while (j < raw.size() && raw[j].w - start <= merge_tol) {
            mass += raw[j].prob;
            moment += raw[j].prob * raw[j].w;
            ++j;
        }
        out.push_back({mass > 0.0 ? moment / mass : start, mass});
        i = j;
    }
    return out;
}

std::vector<PhotonPeak> photon_marginal(const JointDistribution& dist) {
    std::map<int, double> acc;
    for (const auto& p : dist.peaks) {
        acc[p.delta_n] += p.prob;
    }
    std::vector<PhotonPeak> out;
    for (const auto& [n, prob] : acc) {
        out.push_back({n, prob});
    }
    return out;
}

CumulativeFit cumulative_and_fit(const std::vector<WorkPeak>& marginal) {
    if (marginal.empty()) {
        throw DomainError("cumulative_and_fit: empty marginal");
    }
    const auto sorted = sorted_by_w(marginal);
    CumulativeFit fit;
    double total = 0.0;
    for (const auto& p : sorted) {
        fit.mean += p.prob * p.w;
        total += p.prob;
    }
    fit.mean /= total;
    double var = 0.0;
    for (const auto& p : sorted) {
        var += p.prob * (p.w - fit.mean) * (p.w - fit.mean);
    }
    var /= total;
    fit.stddev = std::sqrt(std::max(var, 0.0));
    fit.degenerate = !(fit.stddev > 0.0);

    const double mean = fit.mean;
    const double sd = fit.stddev;
    const bool degenerate = fit.degenerate;
    auto gauss = [mean, sd, degenerate](double w) {
        if (degenerate) {
            return w < mean ? 0.0 : (w > mean ? 1.0 : 0.5);
        }
        return 0.5 * std::erfc(-(w - mean) / (sd * std::numbers::sqrt2));
    };
    double running = 0.0;
    for (const auto& p : sorted) {
        running += p.prob;
        fit.points.push_back({p.w, running, gauss(p.w)});
    }
    fit.sup_distance = step_sup_distance(sorted, gauss);
    return fit;
}

double compare_classical(const std::vector<WorkPeak>& marginal,
                         const std::function<double(double)>& classical_cdf) {
    return step_sup_distance(sorted_by_w(marginal), classical_cdf);
}

void write_cumulative_csv(std::ostream& out, const CumulativeFit& fit,
                          const std::function<double(double)>& classical_cdf) {
    out << "w,F_exact,F_gauss,F_classical\n";
    for (const auto& p : fit.points) {
        out << format_real(p.w) << ',' << format_real(p.f_exact) << ',' << format_real(p.f_gauss)
            << ',';
        if (classical_cdf) {
            out << format_real(classical_cdf(p.w));
        } else {
            out << "nan";
        }
        out << '\n';
    }
}

void write_work_csv(std::ostream& out, const std::vector<WorkPeak>& peaks) {
    out << "w,prob\n";
    for (const auto& p : peaks) {
        out << format_real(p.w) << ',' << format_real(p.prob) << '\n';
    }
}

void write_photon_csv(std::ostream& out, const std::vector<PhotonPeak>& peaks) {
    out << "delta_n,prob\n";
    for (const auto& p : peaks) {
        out << p.delta_n << ',' << format_real(p.prob) << '\n';
    }
}

bool VerificationReport::passed(const Thresholds& t) const {
    bool ok = abs_error <= t.jarzynski && crooks_max_error <= t.crooks &&
              normalization_error <= t.normalization;
    if (jarzynski_direct_error) {
        ok = ok && *jarzynski_direct_error <= t.jarzynski;
    }
    if (periodicity_max_error) {
        ok = ok && *periodicity_max_error <= t.periodicity;
    }
    if (crooks_peak_max_error) {
        ok = ok && *crooks_peak_max_error <= t.peaks;
    }
    return ok;
}

nlohmann::json VerificationReport::to_json() const {
    nlohmann::json j;
    j["jarzynski_lhs"] = {jarzynski_lhs_re, jarzynski_lhs_im};
    j["jarzynski_rhs"] = jarzynski_rhs;
    j["abs_error"] = abs_error;
    j["jarzynski_direct_error"] =
        jarzynski_direct_error ? nlohmann::json(*jarzynski_direct_error) : nlohmann::json();
    j["crooks_max_error"] = crooks_max_error;
    j["crooks_peak_max_error"] =
        crooks_peak_max_error ? nlohmann::json(*crooks_peak_max_error) : nlohmann::json();
    j["periodicity_max_error"] =
        periodicity_max_error ? nlohmann::json(*periodicity_max_error) : nlohmann::json();
    j["normalization_error"] = normalization_error;
    j["passed"] = passed();
    return j;
}

VerificationReport verify_fluctuation_theorems(const FluctuationInputs& in) {
    if (!in.forward || !in.reverse) {
        throw DomainError("verify_fluctuation_theorems: forward and reverse functions required");
    }
    if (!(in.beta > 0.0) || in.grid < 2) {
        throw DomainError("verify_fluctuation_theorems: need beta > 0 and grid >= 2");
    }
    VerificationReport rep;
    const double beta = in.beta;
    rep.normalization_error = std::abs(in.forward(0.0, 0.0) - 1.0);

    const cplx lhs = in.forward(kI * beta, -kI * beta * in.mu);
    rep.jarzynski_lhs_re = lhs.real();
    rep.jarzynski_lhs_im = lhs.imag();
    rep.jarzynski_rhs = std::exp(-beta * in.delta_phi);
    rep.abs_error = std::abs(lhs - rep.jarzynski_rhs);

    if (in.forward_work) {
        double sum = 0.0;
        for (const auto& p : *in.forward_work) {
            sum += p.prob * std::exp(-beta * p.w);
        }
        rep.jarzynski_direct_error = std::abs(sum - rep.jarzynski_rhs);
    }

    const double crooks_factor = std::exp(beta * in.delta_phi);
    double crooks = 0.0;
    double periodic = 0.0;
    for (int a = 0; a < in.grid; ++a) {
        const double u = -in.u_extent + 2.0 * in.u_extent * a / (in.grid - 1);
        for (int b = 0; b < in.grid; ++b) {
            const double v = -std::numbers::pi + kTwoPi * b / in.grid;
            const cplx left = in.reverse(-u, -v);
            const cplx right = in.forward(u + kI * beta, v - kI * beta * in.mu) * crooks_factor;
            crooks = std::max(crooks, std::abs(left - right));
            if (in.period && b % 8 == 0) {
                periodic = std::max(periodic, std::abs(in.forward(u + *in.period, v) - in.forward(u, v)));
            }
        }
    }
    rep.crooks_max_error = crooks;
    if (in.period) {
        rep.periodicity_max_error = periodic;
    }

    if (in.forward_joint && in.reverse_joint) {
        std::map<int, std::vector<JointPeak>> reverse_by_n;
        for (const auto& p : in.reverse_joint->peaks) {
            reverse_by_n[p.delta_n].push_back(p);
        }
        for (auto& [n, list] : reverse_by_n) {
            std::sort(list.begin(), list.end(),
                      [](const JointPeak& x, const JointPeak& y) { return x.w < y.w; });
        }
        double worst = 0.0;
        for (const auto& p : in.forward_joint->peaks) {
            if (p.prob <= 1e-10) {
                continue;
            }
            const auto it = reverse_by_n.find(-p.delta_n);
            if (it == reverse_by_n.end()) {
                continue;
            }
            const auto& list = it->second;
            const double target = -p.w;
            auto pos = std::lower_bound(list.begin(), list.end(), target,
                                        [](const JointPeak& x, double w) { return x.w < w; });
            const double tol = 1e-8 * (1.0 + std::abs(target));
            const JointPeak* match = nullptr;
            for (auto cand = pos == list.begin() ? pos : pos - 1;
                 cand != list.end() && cand->w <= target + tol; ++cand) {
                if (std::abs(cand->w - target) <= tol) {
                    match = &*cand;
                    break;
                }
            }
            if (match == nullptr || match->prob <= 1e-10) {
                continue;
            }
            const double expected = std::exp(beta * (p.w - in.mu * p.delta_n - in.delta_phi));
            worst = std::max(worst, std::abs(p.prob / match->prob / expected - 1.0));
        }
        rep.crooks_peak_max_error = worst;
    }
    return rep;
}

}  // namespace dce
