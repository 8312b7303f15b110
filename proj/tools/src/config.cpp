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

#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "dcework/error.hpp"

namespace dce::cli {
namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"geometry", {"shape", "Lx", "Ly", "R", "axis_length", "moving_wall", "polarization",
                      "max_frequency"}},
        {"resonance", {"variant", "omega_k", "omega_p", "g_tau", "omega_k_tau", "omega_p_tau"}},
        {"protocol", {"lambda0", "lambda_tau", "epsilon", "omega", "tau", "phi", "hbar"}},
        {"thermal", {"beta"}},
        {"numerics", {"n_max", "grid", "tail_tol", "periodicity_tol", "resonance_tol",
                      "block_budget", "leakage_threshold", "branch_steps", "merge_tol",
                      "verify_grid", "verify_u_extent"}},
        {"output", {"prefix"}},
    };
    return keys;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double to_real(const std::string& where, const std::string& text) {
    const std::string t = trim(text);
    char* end = nullptr;
    const double value = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(value)) {
        throw ConfigError(where + ": expected a number, got '" + text + "'");
    }
    return value;
}

long to_integer(const std::string& where, const std::string& text) {
    const std::string t = trim(text);
    char* end = nullptr;
    const long value = std::strtol(t.c_str(), &end, 10);
    if (t.empty() || end != t.c_str() + t.size()) {
        throw ConfigError(where + ": expected an integer, got '" + text + "'");
    }
    return value;
}

std::vector<int> to_cutoffs(const std::string& where, const std::string& text) {
    std::string normalized = text;
    std::replace(normalized.begin(), normalized.end(), ',', ' ');
    std::istringstream in(normalized);
    std::vector<int> out;
    std::string item;
    while (in >> item) {
        const long n = to_integer(where, item);
        if (n < 0) {
            throw ConfigError(where + ": cutoffs must be non-negative");
        }
        out.push_back(static_cast<int>(n));
    }
    if (out.empty()) {
        throw ConfigError(where + ": empty cutoff list");
    }
    return out;
}

class Section {
public:
    Section(const pt::ptree* tree, std::string name) : tree_(tree), name_(std::move(name)) {}

    bool present() const { return tree_ != nullptr; }

    std::optional<std::string> text(const std::string& key) const {
        if (tree_ == nullptr) {
            return std::nullopt;
        }
        const auto v = tree_->get_optional<std::string>(key);
        if (!v) {
            return std::nullopt;
        }
        return trim(*v);
    }

    std::optional<double> real(const std::string& key) const {
        const auto t = text(key);
        return t ? std::optional<double>(to_real(where(key), *t)) : std::nullopt;
    }

    double real_or(const std::string& key, double fallback) const {
        return real(key).value_or(fallback);
    }

    std::string where(const std::string& key) const { return "[" + name_ + "] " + key; }

private:
    const pt::ptree* tree_;
    std::string name_;
};

void apply_numeric(NumericsConfig& n, const std::string& key, const std::string& value,
                   const std::string& where) {
    auto positive_int = [&](long v) {
        if (v <= 0) {
            throw ConfigError(where + ": must be positive");
        }
        return static_cast<int>(v);
    };
    auto positive_real = [&](double v) {
        if (!(v > 0.0)) {
            throw ConfigError(where + ": must be positive");
        }
        return v;
    };
    if (key == "n_max") {
        n.n_max = to_cutoffs(where, value);
    } else if (key == "grid") {
        n.grid = positive_int(to_integer(where, value));
    } else if (key == "tail_tol") {
        n.tail_tol = positive_real(to_real(where, value));
    } else if (key == "periodicity_tol") {
        n.periodicity_tol = positive_real(to_real(where, value));
    } else if (key == "resonance_tol") {
        n.resonance_tol = positive_real(to_real(where, value));
    } else if (key == "block_budget") {
        n.block_budget = static_cast<std::size_t>(positive_int(to_integer(where, value)));
    } else if (key == "leakage_threshold") {
        n.leakage_threshold = positive_real(to_real(where, value));
    } else if (key == "branch_steps") {
        n.branch_steps = positive_int(to_integer(where, value));
    } else if (key == "merge_tol") {
        n.merge_tol = positive_real(to_real(where, value));
    } else if (key == "verify_grid") {
        n.verify_grid = positive_int(to_integer(where, value));
    } else if (key == "verify_u_extent") {
        n.verify_u_extent = positive_real(to_real(where, value));
    }
}

GeometrySpec read_geometry(const Section& g) {
    const auto shape = g.text("shape");
    if (!shape) {
        throw ConfigError("[geometry] shape is required (rectangular, cylindrical or spherical)");
    }
    const std::string s = lower(*shape);
    if (s == "rectangular") {
        return GeometrySpec::rectangular(g.real_or("Lx", 1.0), g.real_or("Ly", 1.0));
    }
    if (s == "cylindrical") {
        const std::string wall = lower(g.text("moving_wall").value_or("longitudinal"));
        MovingWall mw;
        if (wall == "longitudinal") {
            mw = MovingWall::Longitudinal;
        } else if (wall == "radial") {
            mw = MovingWall::Radial;
        } else {
            throw ConfigError("[geometry] moving_wall must be longitudinal or radial");
        }
        return GeometrySpec::cylindrical(g.real_or("R", 1.0), g.real_or("axis_length", 1.0), mw);
    }
    if (s == "spherical") {
        return GeometrySpec::spherical();
    }
    throw ConfigError("[geometry] unknown shape '" + *shape + "'");
}

}  // namespace

std::optional<std::string> process_env(const std::string& name) {
    const char* v = std::getenv(name.c_str());
    return v == nullptr ? std::nullopt : std::optional<std::string>(v);
}

RunConfig parse_config(const std::string& text, const EnvLookup& env) {
    pt::ptree tree;
    try {
        std::istringstream in(text);
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    for (const auto& [section, body] : tree) {
        const auto known = known_keys().find(section);
        if (known == known_keys().end()) {
            throw ConfigError("config: unknown section [" + section + "]");
        }
        for (const auto& [key, value] : body) {
            if (!known->second.count(key)) {
                throw ConfigError("config: unknown key '" + key + "' in [" + section + "]");
            }
        }
    }
    auto section = [&](const std::string& name) {
        const auto child = tree.get_child_optional(name);
        return Section(child ? &*child : nullptr, name);
    };

    RunConfig cfg;
    const Section geometry = section("geometry");
    const Section resonance = section("resonance");
    const Section protocol = section("protocol");
    const Section thermal = section("thermal");

    try {
        if (geometry.present()) {
            cfg.geometry = read_geometry(geometry);
            cfg.geometry->validate();
            cfg.polarization = parse_polarization(geometry.text("polarization").value_or("TE"));
            cfg.max_frequency = geometry.real_or("max_frequency", 0.0);
        }
        if (resonance.present()) {
            DirectResonance d;
            const auto variant = resonance.text("variant");
            if (!variant) {
                throw ConfigError("[resonance] variant is required (DoF, SuF or DiF)");
            }
            d.variant = parse_variant(*variant);
            d.omega_k = resonance.real_or("omega_k", 1.0);
            d.omega_p = d.variant == ResonanceVariant::DoF ? d.omega_k
                                                           : resonance.real_or("omega_p", 2.0);
            const auto g_tau = resonance.real("g_tau");
            if (!g_tau) {
                throw ConfigError("[resonance] g_tau is required");
            }
            d.g_tau = *g_tau;
            d.omega_k_tau = resonance.real("omega_k_tau");
            d.omega_p_tau = resonance.real("omega_p_tau");
            cfg.direct = d;
        }
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    if (!cfg.geometry && !cfg.direct) {
        throw ConfigError("config: a [geometry] or a [resonance] section is required");
    }
    if (cfg.geometry && cfg.direct) {
        throw ConfigError("config: [geometry] and [resonance] are mutually exclusive");
    }

    cfg.protocol.lambda0 = protocol.real_or("lambda0", 1.0);
    if (const auto lt = protocol.real("lambda_tau")) {
        cfg.protocol.lambda_tau = *lt;
    }
    cfg.protocol.epsilon = protocol.real_or("epsilon", cfg.protocol.epsilon);
    cfg.protocol.tau = protocol.real_or("tau", cfg.direct ? 1.0 : 0.0);
    cfg.protocol.phi = protocol.real_or("phi", 0.0);
    cfg.protocol.hbar = protocol.real_or("hbar", 1.0);
    cfg.omega_expr = protocol.text("omega").value_or("");
    if (cfg.geometry && cfg.omega_expr.empty()) {
        throw ConfigError("[protocol] omega is required with a [geometry] section");
    }

    const auto beta = thermal.real("beta");
    if (!beta) {
        throw ConfigError("[thermal] beta is required");
    }
    if (!(*beta > 0.0)) {
        throw ConfigError("[thermal] beta must be positive");
    }
    cfg.beta = *beta;

    if (const auto n = tree.get_child_optional("numerics")) {
        for (const auto& [key, value] : *n) {
            apply_numeric(cfg.numerics, key, trim(value.data()), "[numerics] " + key);
        }
    }
    for (const auto& key : known_keys().at("numerics")) {
        std::string var = "DCE_NUMERICS_" + key;
        std::transform(var.begin(), var.end(), var.begin(),
                       [](unsigned char c) { return std::toupper(c); });
        if (const auto value = env(var)) {
            apply_numeric(cfg.numerics, key, *value, var);
        }
    }

    if (const auto prefix = section("output").text("prefix")) {
        cfg.prefix = *prefix;
    }
    return cfg;
}

RunConfig load_config(const std::string& path, const EnvLookup& env) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), env);
}

void resolve_omega(RunConfig& config) {
    if (config.omega_expr.empty()) {
        return;
    }
    const std::string expr = trim(config.omega_expr);
    static const std::regex number(R"(^[-+]?(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?$)");
    static const std::regex doubled(R"(^2\s*\*\s*w\(([^)]*)\)$)");
    static const std::regex pair(R"(^w\(([^)]*)\)\s*([-+])\s*w\(([^)]*)\)$)");
    if (std::regex_match(expr, number)) {
        config.protocol.omega_drive = to_real("[protocol] omega", expr);
        return;
    }
    if (!config.geometry) {
        throw ConfigError("[protocol] omega selectors need a [geometry] section");
    }
    auto freq = [&](const std::string& text) {
        try {
            return mode_frequency(*config.geometry, config.polarization, ModeIndex::parse(trim(text)),
                                  config.protocol.lambda0);
        } catch (const DomainError& e) {
            throw ConfigError("[protocol] omega: " + std::string(e.what()));
        }
    };
    std::smatch m;
    if (std::regex_match(expr, m, doubled)) {
        config.protocol.omega_drive = 2.0 * freq(m[1]);
    } else if (std::regex_match(expr, m, pair)) {
        const double a = freq(m[1]);
        const double b = freq(m[3]);
        config.protocol.omega_drive = m[2] == "+" ? a + b : std::abs(a - b);
    } else {
        throw ConfigError("[protocol] omega: cannot parse '" + expr +
                          "' (number, 2*w(a,b,c), w(a,b,c)+w(d,e,f) or w(a,b,c)-w(d,e,f))");
    }
}

std::string config_reference() {
    return R"(Configuration file (INI, `key = value` under [section] headers):

  [geometry]   shape = rectangular | cylindrical | spherical
               Lx, Ly (rectangular), R, axis_length, moving_wall = longitudinal | radial
               (cylindrical), polarization = TE | TM, max_frequency (active-mode cutoff)
  [resonance]  direct single resonance instead of [geometry]:
               variant = DoF | SuF | DiF, omega_k, omega_p, g_tau,
               omega_k_tau, omega_p_tau (frequencies after the drive)
  [protocol]   lambda0, lambda_tau, epsilon, omega (number, 2*w(a,b,c),
               w(a,b,c)+w(d,e,f) or w(a,b,c)-w(d,e,f)), tau, phi, hbar
  [thermal]    beta (required)
  [numerics]   n_max (one value or one per mode), grid, tail_tol, periodicity_tol,
               resonance_tol, block_budget, leakage_threshold, branch_steps,
               merge_tol, verify_grid, verify_u_extent
  [output]     prefix (path prefix of written CSV files)

Every [numerics] key can be overridden by the environment variable
DCE_NUMERICS_<KEY>, for example DCE_NUMERICS_N_MAX=60.

Exit codes: 0 success, 1 verification or numerical failure, 2 usage or config error.
)";
}

}  // namespace dce::cli
