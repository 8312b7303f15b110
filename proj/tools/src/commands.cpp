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

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dcework/distributions.hpp"
#include "dcework/error.hpp"
#include "dcework/format.hpp"
#include "model.hpp"

namespace dce::cli {
namespace {

/// A check that ran to completion and failed; maps to exit code 1.
class CheckFailed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Routes {
    bool oracle = false;
    bool symplectic = false;
};

struct Marginals {
    std::vector<WorkPeak> work;
    std::vector<PhotonPeak> photons;
    std::optional<double> residual_mass;
};

InversionOptions inversion_options(const NumericsConfig& n) {
    InversionOptions o;
    o.tail_tol = n.tail_tol;
    o.periodicity_tol = n.periodicity_tol;
    return o;
}

Model load_model(const std::string& path, const EnvLookup& env) {
    RunConfig cfg = load_config(path, env);
    resolve_omega(cfg);
    return Model(std::move(cfg));
}

Marginals analytic_marginals(const Model& model, bool symplectic) {
    if (!model.static_endpoints()) {
        throw DomainError(
            "the frequencies change during the drive, so the work support is not a lattice; "
            "use --oracle");
    }
    const auto& cfg = model.config();
    const auto options = inversion_options(cfg.numerics);
    Marginals m;
    m.work = extract_marginal_work([&](cplx u) { return model.forward(u, 0.0, symplectic); }, cfg.beta,
                                   WorkLattice{model.work_quantum(), 0.0, cfg.numerics.grid}, options);
    m.photons = extract_marginal_photons([&](double v) { return model.forward(0.0, v, symplectic); },
                                         options);
    return m;
}

Marginals oracle_marginals(const Model& model) {
    const auto joint = model.oracle_forward();
    Marginals m;
    m.work = work_marginal(joint, model.config().numerics.merge_tol * model.work_quantum());
    m.photons = photon_marginal(joint);
    m.residual_mass = joint.residual_mass;
    return m;
}

/// Largest probability difference between two marginals, matching peaks by
/// lattice index and photon number.
double marginal_distance(const Marginals& a, const Marginals& b, double quantum) {
    std::map<long long, double> work;
    for (const auto& p : a.work) {
        work[std::llround(p.w / quantum)] += p.prob;
    }
    for (const auto& p : b.work) {
        work[std::llround(p.w / quantum)] -= p.prob;
    }
    std::map<int, double> photons;
    for (const auto& p : a.photons) {
        photons[p.delta_n] += p.prob;
    }
    for (const auto& p : b.photons) {
        photons[p.delta_n] -= p.prob;
    }
    double worst = 0.0;
    for (const auto& [k, d] : work) {
        worst = std::max(worst, std::abs(d));
    }
    for (const auto& [k, d] : photons) {
        worst = std::max(worst, std::abs(d));
    }
    return worst;
}

std::function<double(double)> classical_cdf_for(const Model& model) {
    if (model.case_params().size() != 1 || !model.static_endpoints() || model.coupled()) {
        return nullptr;
    }
    const auto p = model.case_params().front();
    return [p](double w) {
        return classical_work_cdf(p.variant, p.omega_p / p.omega_k, p.g_tau, p.beta, w);
    };
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& body,
                std::optional<double> residual_mass) {
    const std::filesystem::path target(path);
    if (target.has_parent_path()) {
        std::filesystem::create_directories(target.parent_path());
    }
    std::ofstream out(target, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
    body(out);
    if (residual_mass) {
        out << "# residual_mass=" << format_real(*residual_mass) << '\n';
    }
    if (!out) {
        throw std::runtime_error("error while writing '" + path + "'");
    }
}

void require_resonant(const Model& model, bool adiabatic_ok) {
    if (model.plan().cases.empty() && !adiabatic_ok) {
        throw ConfigError(
            "no mode meets a resonance condition, so the drive is adiabatic; pass --adiabatic-ok "
            "to compute the trivial distribution anyway");
    }
}

nlohmann::json complex_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

int cmd_spectrum(const std::string& path, const EnvLookup& env, std::ostream& out) {
    const RunConfig cfg = load_config(path, env);
    if (!cfg.geometry) {
        throw ConfigError("spectrum needs a [geometry] section");
    }
    if (!(cfg.max_frequency > 0.0)) {
        throw ConfigError("[geometry] max_frequency must be positive");
    }
    const auto spectrum =
        mode_spectrum(*cfg.geometry, cfg.polarization, cfg.protocol.lambda0, cfg.max_frequency);
    write_spectrum_csv(out, cfg.polarization, spectrum);
    return kSuccess;
}

int cmd_plan(const std::string& path, const EnvLookup& env, std::ostream& out, std::ostream& err) {
    const Model model = load_model(path, env);
    for (const auto& w : model.config().protocol.warnings()) {
        err << "warning: " << w << '\n';
    }
    auto doc = model.plan().to_json();
    doc["omega_drive"] = model.config().protocol.omega_drive;
    doc["work_quantum"] = model.work_quantum();
    out << doc.dump(2) << '\n';
    return kSuccess;
}

int cmd_charfun(const std::string& path, const EnvLookup& env, const Routes& routes, cplx u, cplx v,
                std::ostream& out) {
    const Model model = load_model(path, env);
    nlohmann::json doc;
    doc["u"] = complex_json(u);
    doc["v"] = complex_json(v);
    if (routes.oracle) {
        const auto joint = model.oracle_forward();
        doc["route"] = "fock_oracle";
        doc["G"] = complex_json(charfun_numeric(joint, u, v));
        doc["residual_mass"] = joint.residual_mass;
    } else {
        doc["route"] = routes.symplectic ? "symplectic" : "closed_form";
        doc["G"] = complex_json(model.forward(u, v, routes.symplectic));
    }
    out << doc.dump(2) << '\n';
    return kSuccess;
}

struct DistributionFlags {
    Routes routes;
    bool adiabatic_ok = false;
    bool freeze = false;
    std::string prefix;
};

int cmd_distribution(const std::string& path, const EnvLookup& env, const DistributionFlags& flags,
                     std::ostream& out) {
    if (flags.freeze && flags.routes.oracle) {
        throw ConfigError("--freeze checks the analytic route against the oracle; drop --oracle");
    }
    const Model model = load_model(path, env);
    require_resonant(model, flags.adiabatic_ok);

    Marginals m = flags.routes.oracle ? oracle_marginals(model)
                                      : analytic_marginals(model, flags.routes.symplectic);
    if (flags.freeze) {
        const Marginals reference = oracle_marginals(model);
        const double distance = marginal_distance(m, reference, model.work_quantum());
        const double allowed = std::max(1e-6, 3.0 * *reference.residual_mass);
        out << "oracle agreement " << format_real(distance) << " (allowed " << format_real(allowed)
            << ", residual_mass " << format_real(*reference.residual_mass) << ")\n";
        if (!(distance <= allowed)) {
            throw CheckFailed("the oracle disagrees with the analytic route; nothing was written");
        }
    }

    const std::string prefix = flags.prefix.empty() ? model.config().prefix : flags.prefix;
    const auto cdf = classical_cdf_for(model);
    const auto fit = cumulative_and_fit(m.work);
    write_file(prefix + "_work.csv", [&](std::ostream& o) { write_work_csv(o, m.work); },
               m.residual_mass);
    write_file(prefix + "_photons.csv", [&](std::ostream& o) { write_photon_csv(o, m.photons); },
               m.residual_mass);
    write_file(prefix + "_cumulative.csv",
               [&](std::ostream& o) { write_cumulative_csv(o, fit, cdf); }, m.residual_mass);
    for (const char* suffix : {"_work.csv", "_photons.csv", "_cumulative.csv"}) {
        out << prefix << suffix << '\n';
    }
    return kSuccess;
}

struct VerifyFlags {
    Routes routes;
    double perturb = 0.0;
};

int cmd_verify(const std::string& path, const EnvLookup& env, const VerifyFlags& flags,
               std::ostream& out) {
    const Model model = load_model(path, env);
    const auto& cfg = model.config();
    const bool sym = flags.routes.symplectic;
    const double scale = 1.0 + flags.perturb;

    FluctuationInputs in;
    in.forward = [&](cplx u, cplx v) { return scale * model.forward(u, v, sym); };
    in.reverse = [&](cplx u, cplx v) { return model.reverse(u, v, sym); };
    in.beta = cfg.beta;
    in.delta_phi = model.delta_phi();
    in.grid = cfg.numerics.verify_grid;
    in.u_extent = cfg.numerics.verify_u_extent;
    if (model.static_endpoints()) {
        in.period = 2.0 * std::numbers::pi / model.work_quantum();
        in.forward_work = extract_marginal_work(
            [&](cplx u) { return in.forward(u, 0.0); }, cfg.beta,
            WorkLattice{model.work_quantum(), 0.0, cfg.numerics.grid}, inversion_options(cfg.numerics));
    }
    if (flags.routes.oracle) {
        auto [fwd, rev] = model.oracle_pair();
        in.forward_joint = std::move(fwd);
        in.reverse_joint = std::move(rev);
    }
    const auto report = verify_fluctuation_theorems(in);
    out << report.to_json().dump(2) << '\n';
    return report.passed() ? kSuccess : kFailure;
}

struct MomentFlags {
    std::string sweep;
    double from = 0.0;
    double to = 0.0;
    int points = 1;
    std::string output;
};

int cmd_moments(const std::string& path, const EnvLookup& env, const MomentFlags& flags,
                std::ostream& out) {
    RunConfig base = load_config(path, env);
    resolve_omega(base);
    std::vector<double> values;
    if (flags.sweep.empty()) {
        values.push_back(0.0);
    } else {
        if (flags.sweep != "beta" && flags.sweep != "hbar") {
            throw ConfigError("--sweep must be beta or hbar");
        }
        if (!(flags.from > 0.0) || !(flags.to > 0.0) || flags.points < 1) {
            throw ConfigError("--from and --to must be positive and --points at least 1");
        }
        for (int i = 0; i < flags.points; ++i) {
            const double t = flags.points == 1 ? 0.0 : static_cast<double>(i) / (flags.points - 1);
            values.push_back(flags.from * std::pow(flags.to / flags.from, t));
        }
    }

    std::ostringstream csv;
    csv << "beta,hbar,mean,stddev\n";
    for (double value : values) {
        RunConfig cfg = base;
        if (flags.sweep == "beta") {
            cfg.beta = value;
        } else if (flags.sweep == "hbar") {
            cfg.protocol.hbar = value;
        }
        const Model model(cfg);
        if (model.coupled()) {
            throw CoupledCaseError("moments use the closed forms, which do not cover coupled groups");
        }
        double mean = 0.0;
        double variance = 0.0;
        for (const auto& p : model.case_params()) {
            const auto mo = moments(p);
            mean += mo.mean;
            variance += mo.variance;
        }
        csv << format_real(cfg.beta) << ',' << format_real(cfg.protocol.hbar) << ','
            << format_real(mean) << ',' << format_real(std::sqrt(std::max(variance, 0.0))) << '\n';
    }
    if (flags.output.empty()) {
        out << csv.str();
    } else {
        write_file(flags.output, [&](std::ostream& o) { o << csv.str(); }, std::nullopt);
        out << flags.output << '\n';
    }
    return kSuccess;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const EnvLookup& env) {
    CLI::App app("Work statistics of the dynamical Casimir effect", "dcework");
    app.footer(config_reference());
    app.require_subcommand(1);

    std::string config;
    Routes routes;
    auto add_config = [&](CLI::App* sub) {
        sub->add_option("config", config, "INI configuration file")->required();
    };
    auto add_routes = [&](CLI::App* sub) {
        auto* o = sub->add_flag("--oracle", routes.oracle, "use the truncated Fock-space oracle");
        sub->add_flag("--symplectic", routes.symplectic,
                      "use the symplectic engine (required for coupled resonances)")
            ->excludes(o);
    };

    auto* spectrum = app.add_subcommand("spectrum", "write the mode spectrum as CSV");
    add_config(spectrum);

    auto* plan = app.add_subcommand("plan", "print the resonance plan as JSON");
    add_config(plan);

    auto* charfun = app.add_subcommand("charfun", "evaluate G(u, v)");
    add_config(charfun);
    add_routes(charfun);
    double u_re = 0.0;
    double u_im = 0.0;
    double v_re = 0.0;
    double v_im = 0.0;
    charfun->add_option("--u", u_re, "real part of u");
    charfun->add_option("--u-imag", u_im, "imaginary part of u");
    charfun->add_option("--v", v_re, "real part of v");
    charfun->add_option("--v-imag", v_im, "imaginary part of v");

    auto* distribution = app.add_subcommand(
        "distribution", "write <prefix>_work.csv, <prefix>_photons.csv and <prefix>_cumulative.csv");
    add_config(distribution);
    add_routes(distribution);
    DistributionFlags dist_flags;
    distribution->add_flag("--adiabatic-ok", dist_flags.adiabatic_ok,
                           "accept a drive that meets no resonance");
    distribution->add_flag("--freeze", dist_flags.freeze,
                           "write only after the Fock oracle confirms the result");
    distribution->add_option("--prefix", dist_flags.prefix, "output path prefix");

    auto* verify = app.add_subcommand("verify", "check the fluctuation theorems; JSON report");
    add_config(verify);
    add_routes(verify);
    VerifyFlags verify_flags;
    verify->add_option("--perturb", verify_flags.perturb,
                       "scale the forward characteristic function by 1 + x (negative control)");

    auto* moments_cmd = app.add_subcommand("moments", "mean and standard deviation of work as CSV");
    add_config(moments_cmd);
    MomentFlags moment_flags;
    moments_cmd->add_option("--sweep", moment_flags.sweep, "swept variable: beta or hbar");
    moments_cmd->add_option("--from", moment_flags.from, "first sweep value");
    moments_cmd->add_option("--to", moment_flags.to, "last sweep value");
    moments_cmd->add_option("--points", moment_flags.points, "number of log-spaced points");
    moments_cmd->add_option("--output", moment_flags.output, "CSV path (default stdout)");

    try {
        std::vector<std::string> reversed_args(args.rbegin(), args.rend());
        app.parse(reversed_args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsage;
    }

    try {
        if (spectrum->parsed()) {
            return cmd_spectrum(config, env, out);
        }
        if (plan->parsed()) {
            return cmd_plan(config, env, out, err);
        }
        if (charfun->parsed()) {
            return cmd_charfun(config, env, routes, cplx(u_re, u_im), cplx(v_re, v_im), out);
        }
        if (distribution->parsed()) {
            dist_flags.routes = routes;
            return cmd_distribution(config, env, dist_flags, out);
        }
        if (verify->parsed()) {
            verify_flags.routes = routes;
            return cmd_verify(config, env, verify_flags, out);
        }
        if (moments_cmd->parsed()) {
            return cmd_moments(config, env, moment_flags, out);
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kUsage;
    } catch (const DomainError& e) {
        err << "invalid input: " << e.what() << '\n';
        return kUsage;
    } catch (const CheckFailed& e) {
        err << "check failed: " << e.what() << '\n';
        return kFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kUsage;
}

}  // namespace dce::cli
