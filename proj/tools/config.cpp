#include "config.hpp"

#include "dsc/errors.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <numbers>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace dsc::cli {

const std::vector<std::string>& observable_columns() {
    static const std::vector<std::string> cols{"n_virtual",      "purity",          "coherence_C",    "energy",
                                               "mp",             "theta_opt",       "phi_opt",        "fraction_0plus",
                                               "fraction_1minus", "fraction_1plus", "fraction_0minus", "solver_iterations",
                                               "wall_time_ms"};
    return cols;
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_double(const std::string& v, std::size_t line) {
    double d = 0.0;
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, d);
    if (ec != std::errc() || ptr != end || !std::isfinite(d)) throw ConfigError("'" + v + "' is not a finite number", line);
    return d;
}

std::size_t to_size(const std::string& v, std::size_t line) {
    std::size_t n = 0;
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, n);
    if (ec != std::errc() || ptr != end) throw ConfigError("'" + v + "' is not a non-negative integer", line);
    return n;
}

bool to_bool(const std::string& v, std::size_t line) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("'" + v + "' is not a boolean", line);
}

template <class E>
E parse_enum(const std::string& v, std::size_t line, std::initializer_list<std::pair<const char*, E>> opts) {
    std::string allowed;
    for (const auto& [name, val] : opts) {
        if (v == name) return val;
        allowed += allowed.empty() ? name : std::string("|") + name;
    }
    throw ConfigError("'" + v + "' is not one of " + allowed, line);
}

Coupling coupling_value(const std::string& v, std::size_t line) {
    return parse_enum<Coupling>(v, line, {{"inductive", Coupling::inductive}, {"capacitive", Coupling::capacitive}});
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <class T>
std::string join(const std::vector<T>& xs) {
    std::string s;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        if (k) s += ", ";
        if constexpr (std::is_same_v<T, double>) s += fmt(xs[k]);
        else if constexpr (std::is_same_v<T, std::string>) s += xs[k];
        else s += std::to_string(xs[k]);
    }
    return s;
}

using Setter = std::function<void(RunConfig&, const std::string&, std::size_t)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table{
        {"model.omega_r_ghz", [](RunConfig& c, const std::string& v, std::size_t l) { c.omega_r_ghz = to_double(v, l); }},
        {"model.delta_ghz", [](RunConfig& c, const std::string& v, std::size_t l) { c.delta_ghz = to_double(v, l); }},
        {"model.g_ghz", [](RunConfig& c, const std::string& v, std::size_t l) { c.g_ghz = to_double(v, l); }},
        {"model.qr_coupling", [](RunConfig& c, const std::string& v, std::size_t l) { c.qr_coupling = coupling_value(v, l); }},
        {"environment.rw_coupling", [](RunConfig& c, const std::string& v, std::size_t l) { c.rw_coupling = coupling_value(v, l); }},
        {"environment.kappa_mhz", [](RunConfig& c, const std::string& v, std::size_t l) { c.kappa_mhz = to_double(v, l); }},
        {"environment.omega_cutoff_ghz", [](RunConfig& c, const std::string& v, std::size_t l) { c.omega_cutoff_ghz = to_double(v, l); }},
        {"environment.Z_R_ohm", [](RunConfig& c, const std::string& v, std::size_t l) { c.z_r_ohm = to_double(v, l); }},
        {"environment.Z_T_ohm", [](RunConfig& c, const std::string& v, std::size_t l) { c.z_t_ohm = to_double(v, l); }},
        {"environment.L_c_nH", [](RunConfig& c, const std::string& v, std::size_t l) { c.l_c_nh = to_double(v, l); }},
        {"environment.C_c_fF", [](RunConfig& c, const std::string& v, std::size_t l) { c.c_c_ff = to_double(v, l); }},
        {"environment.mode_frequencies_ghz",
         [](RunConfig& c, const std::string& v, std::size_t l) {
             c.mode_frequencies_ghz.clear();
             for (const auto& s : split_list(v)) c.mode_frequencies_ghz.push_back(to_double(s, l));
         }},
        {"environment.mode_spacing_ghz", [](RunConfig& c, const std::string& v, std::size_t l) { c.mode_spacing_ghz = to_double(v, l); }},
        {"environment.f_mode",
         [](RunConfig& c, const std::string& v, std::size_t l) {
             c.f_mode = parse_enum<FMode>(v, l, {{"discrete_sum", FMode::discrete_sum},
                                                 {"continuum_closed_form", FMode::continuum_closed_form},
                                                 {"continuum_quadrature", FMode::continuum_quadrature}});
         }},
        {"run.backend",
         [](RunConfig& c, const std::string& v, std::size_t l) {
             c.backend = parse_enum<Backend>(v, l, {{"cvs", Backend::cvs}, {"diag", Backend::diag}, {"both", Backend::both}});
         }},
        {"run.fraction_basis",
         [](RunConfig& c, const std::string& v, std::size_t l) {
             c.fraction_basis = parse_enum<FractionBasis>(
                 v, l, {{"exact", FractionBasis::exact}, {"approximate", FractionBasis::approximate}});
         }},
        {"run.cvs_resonator_dim", [](RunConfig& c, const std::string& v, std::size_t l) { c.cvs_resonator_dim = to_size(v, l); }},
        {"run.timing", [](RunConfig& c, const std::string& v, std::size_t l) { c.timing = to_bool(v, l); }},
        {"truncation.resonator_dim", [](RunConfig& c, const std::string& v, std::size_t l) { c.resonator_dim = to_size(v, l); }},
        {"truncation.mode_dims",
         [](RunConfig& c, const std::string& v, std::size_t l) {
             c.mode_dims.clear();
             for (const auto& s : split_list(v)) c.mode_dims.push_back(to_size(s, l));
         }},
        {"sweep.variable",
         [](RunConfig& c, const std::string& v, std::size_t l) {
             c.sweep_variable = parse_enum<SweepVar>(v, l, {{"none", SweepVar::none}, {"kappa", SweepVar::kappa},
                                                            {"g", SweepVar::g}, {"L_c_nH", SweepVar::l_c},
                                                            {"C_c_fF", SweepVar::c_c}});
         }},
        {"sweep.start", [](RunConfig& c, const std::string& v, std::size_t l) { c.sweep_start = to_double(v, l); }},
        {"sweep.stop", [](RunConfig& c, const std::string& v, std::size_t l) { c.sweep_stop = to_double(v, l); }},
        {"sweep.points", [](RunConfig& c, const std::string& v, std::size_t l) { c.sweep_points = to_size(v, l); }},
        {"sweep.scale",
         [](RunConfig& c, const std::string& v, std::size_t l) {
             c.sweep_scale = parse_enum<Scale>(v, l, {{"linear", Scale::linear}, {"log", Scale::log}});
         }},
        {"outputs.observables",
         [](RunConfig& c, const std::string& v, std::size_t l) {
             c.observables = split_list(v);
             for (const auto& o : c.observables)
                 if (std::find(observable_columns().begin(), observable_columns().end(), o) == observable_columns().end())
                     throw ConfigError("unknown observable '" + o + "'", l);
         }},
    };
    return table;
}

void require(bool ok, const std::string& what, std::size_t line = 0) {
    if (!ok) throw ConfigError(what, line);
}

} // namespace

std::string_view to_string(Backend b) noexcept {
    switch (b) {
    case Backend::cvs: return "cvs";
    case Backend::diag: return "diag";
    case Backend::both: return "both";
    }
    return "?";
}

std::string_view to_string(EnvParam e) noexcept {
    switch (e) {
    case EnvParam::fixed_cutoff: return "fixed_cutoff";
    case EnvParam::circuit_family: return "circuit_family";
    case EnvParam::circuit: return "circuit";
    }
    return "?";
}

std::string_view to_string(SweepVar v) noexcept {
    switch (v) {
    case SweepVar::none: return "none";
    case SweepVar::kappa: return "kappa";
    case SweepVar::g: return "g";
    case SweepVar::l_c: return "L_c_nH";
    case SweepVar::c_c: return "C_c_fF";
    }
    return "?";
}

std::string_view to_string(Scale s) noexcept { return s == Scale::log ? "log" : "linear"; }

std::string_view to_string(FractionBasis f) noexcept { return f == FractionBasis::exact ? "exact" : "approximate"; }

Backend parse_backend(std::string_view text) {
    return parse_enum<Backend>(std::string(text), 0, {{"cvs", Backend::cvs}, {"diag", Backend::diag}, {"both", Backend::both}});
}

RunConfig parse_config(std::string_view text) {
    static const std::set<std::string> sections{"model", "environment", "run", "truncation", "sweep", "outputs"};
    RunConfig c;
    std::map<std::string, std::size_t> seen;  // key -> line
    std::string section;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        if (line.front() == '[') {
            require(line.back() == ']', "malformed section header '" + line + "'", line_no);
            section = trim(line.substr(1, line.size() - 2));
            require(sections.count(section) == 1, "unknown section [" + section + "]", line_no);
            continue;
        }
        const auto eq = line.find('=');
        require(eq != std::string::npos, "expected key = value, got '" + line + "'", line_no);
        require(!section.empty(), "key outside of any [section]", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const std::string full = section + "." + key;
        const auto it = setters().find(full);
        require(it != setters().end(), "unknown key '" + key + "' in [" + section + "]", line_no);
        require(seen.count(full) == 0, "duplicate key '" + key + "' (first on line " +
                                           (seen.count(full) ? std::to_string(seen[full]) : std::string()) + ")",
                line_no);
        require(!value.empty(), "empty value for '" + key + "'", line_no);
        it->second(c, value, line_no);
        seen[full] = line_no;
    }

    const auto line_of = [&seen](const std::string& k) { return seen.count(k) ? seen.at(k) : std::size_t{0}; };
    const auto has = [&seen](const std::string& k) { return seen.count(k) == 1; };

    for (const char* k : {"model.omega_r_ghz", "model.delta_ghz", "model.g_ghz", "environment.rw_coupling"})
        require(has(k), std::string("missing required key '") + k + "'");
    require(c.omega_r_ghz > 0.0, "omega_r_ghz must be > 0", line_of("model.omega_r_ghz"));
    require(c.delta_ghz > 0.0, "delta_ghz must be > 0", line_of("model.delta_ghz"));
    require(c.g_ghz >= 0.0, "g_ghz must be >= 0", line_of("model.g_ghz"));

    // Environment parameterization.
    const bool k = has("environment.kappa_mhz"), wc = has("environment.omega_cutoff_ghz");
    const bool zr = has("environment.Z_R_ohm"), zt = has("environment.Z_T_ohm");
    const bool lc = has("environment.L_c_nH"), cc = has("environment.C_c_fF");
    const std::size_t env_line =
        std::max({line_of("environment.kappa_mhz"), line_of("environment.omega_cutoff_ghz"), line_of("environment.L_c_nH"),
                  line_of("environment.C_c_fF")});
    if (k && (lc || cc))
        throw ConfigError("conflicting environment parameterizations: kappa_mhz together with a coupling element", env_line);
    if (wc && (zr || zt || lc || cc))
        throw ConfigError("conflicting environment parameterizations: omega_cutoff_ghz together with circuit elements", env_line);
    if (lc && cc) throw ConfigError("conflicting environment parameterizations: both L_c_nH and C_c_fF", env_line);
    if (k && wc) {
        c.env_param = EnvParam::fixed_cutoff;
        require(c.omega_cutoff_ghz > 0.0, "omega_cutoff_ghz must be > 0", line_of("environment.omega_cutoff_ghz"));
    } else if (k && zr && zt) {
        c.env_param = EnvParam::circuit_family;
    } else if (zr && zt && (lc || cc)) {
        c.env_param = EnvParam::circuit;
        if (lc) {
            require(c.rw_coupling == Coupling::inductive, "L_c_nH needs rw_coupling = inductive", line_of("environment.L_c_nH"));
            require(c.l_c_nh > 0.0, "L_c_nH must be > 0", line_of("environment.L_c_nH"));
        } else {
            require(c.rw_coupling == Coupling::capacitive, "C_c_fF needs rw_coupling = capacitive", line_of("environment.C_c_fF"));
            require(c.c_c_ff > 0.0, "C_c_fF must be > 0", line_of("environment.C_c_fF"));
        }
    } else {
        throw ConfigError("incomplete environment: give kappa_mhz + omega_cutoff_ghz, kappa_mhz + Z_R_ohm + Z_T_ohm, "
                          "or Z_R_ohm + Z_T_ohm + L_c_nH|C_c_fF");
    }
    if (k) require(c.kappa_mhz >= 0.0, "kappa_mhz must be >= 0", line_of("environment.kappa_mhz"));
    if (zr) require(c.z_r_ohm > 0.0, "Z_R_ohm must be > 0", line_of("environment.Z_R_ohm"));
    if (zt) require(c.z_t_ohm > 0.0, "Z_T_ohm must be > 0", line_of("environment.Z_T_ohm"));

    const std::size_t fl = line_of("environment.mode_frequencies_ghz");
    require(!c.mode_frequencies_ghz.empty(), "mode_frequencies_ghz is empty", fl);
    for (std::size_t i = 0; i < c.mode_frequencies_ghz.size(); ++i) {
        require(c.mode_frequencies_ghz[i] > 0.0, "mode frequencies must be > 0", fl);
        if (i) require(c.mode_frequencies_ghz[i] > c.mode_frequencies_ghz[i - 1], "mode frequencies must increase", fl);
    }
    require(c.mode_spacing_ghz >= 0.0, "mode_spacing_ghz must be >= 0", line_of("environment.mode_spacing_ghz"));
    require(c.resonator_dim >= 2, "resonator_dim must be >= 2", line_of("truncation.resonator_dim"));
    require(c.mode_dims.size() == c.mode_frequencies_ghz.size(), "mode_dims needs one entry per mode frequency",
            line_of("truncation.mode_dims"));
    for (std::size_t d : c.mode_dims) require(d >= 2, "mode dims must be >= 2", line_of("truncation.mode_dims"));
    require(c.cvs_resonator_dim == 0 || c.cvs_resonator_dim >= 2, "cvs_resonator_dim must be 0 (auto) or >= 2",
            line_of("run.cvs_resonator_dim"));

    // Sweep.
    const std::size_t sl = line_of("sweep.variable");
    if (c.sweep_variable == SweepVar::none) {
        for (const char* key : {"sweep.start", "sweep.stop", "sweep.points", "sweep.scale"})
            require(!has(key), std::string("'") + key + "' given without a sweep variable", line_of(key));
    } else {
        for (const char* key : {"sweep.start", "sweep.stop", "sweep.points"})
            require(has(key), std::string("missing required key '") + key + "'", sl);
        require(c.sweep_start > 0.0 && c.sweep_stop > 0.0, "sweep range must be positive", line_of("sweep.start"));
        require(c.sweep_points >= 1, "sweep points must be >= 1", line_of("sweep.points"));
        if (c.sweep_variable == SweepVar::kappa)
            require(c.env_param != EnvParam::circuit, "a kappa sweep needs a kappa-based environment", sl);
        if (c.sweep_variable == SweepVar::l_c)
            require(c.env_param == EnvParam::circuit && lc, "an L_c_nH sweep needs the inductive circuit parameterization", sl);
        if (c.sweep_variable == SweepVar::c_c)
            require(c.env_param == EnvParam::circuit && cc, "a C_c_fF sweep needs the capacitive circuit parameterization", sl);
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize(const RunConfig& c) {
    std::ostringstream os;
    os << "[model]\n";
    os << "omega_r_ghz = " << fmt(c.omega_r_ghz) << "\n";
    os << "delta_ghz = " << fmt(c.delta_ghz) << "\n";
    os << "g_ghz = " << fmt(c.g_ghz) << "\n";
    os << "qr_coupling = " << to_string(c.qr_coupling) << "\n";
    os << "\n[environment]\n";
    os << "rw_coupling = " << to_string(c.rw_coupling) << "\n";
    switch (c.env_param) {
    case EnvParam::fixed_cutoff:
        os << "kappa_mhz = " << fmt(c.kappa_mhz) << "\n";
        os << "omega_cutoff_ghz = " << fmt(c.omega_cutoff_ghz) << "\n";
        break;
    case EnvParam::circuit_family:
        os << "kappa_mhz = " << fmt(c.kappa_mhz) << "\n";
        os << "Z_R_ohm = " << fmt(c.z_r_ohm) << "\n";
        os << "Z_T_ohm = " << fmt(c.z_t_ohm) << "\n";
        break;
    case EnvParam::circuit:
        os << "Z_R_ohm = " << fmt(c.z_r_ohm) << "\n";
        os << "Z_T_ohm = " << fmt(c.z_t_ohm) << "\n";
        if (c.rw_coupling == Coupling::inductive) os << "L_c_nH = " << fmt(c.l_c_nh) << "\n";
        else os << "C_c_fF = " << fmt(c.c_c_ff) << "\n";
        break;
    }
    os << "mode_frequencies_ghz = " << join(c.mode_frequencies_ghz) << "\n";
    if (c.mode_spacing_ghz != 0.0) os << "mode_spacing_ghz = " << fmt(c.mode_spacing_ghz) << "\n";
    os << "f_mode = " << to_string(c.f_mode) << "\n";
    os << "\n[run]\n";
    os << "backend = " << to_string(c.backend) << "\n";
    os << "fraction_basis = " << to_string(c.fraction_basis) << "\n";
    os << "cvs_resonator_dim = " << c.cvs_resonator_dim << "\n";
    os << "timing = " << (c.timing ? "true" : "false") << "\n";
    os << "\n[truncation]\n";
    os << "resonator_dim = " << c.resonator_dim << "\n";
    os << "mode_dims = " << join(c.mode_dims) << "\n";
    if (c.sweep_variable != SweepVar::none) {
        os << "\n[sweep]\n";
        os << "variable = " << to_string(c.sweep_variable) << "\n";
        os << "start = " << fmt(c.sweep_start) << "\n";
        os << "stop = " << fmt(c.sweep_stop) << "\n";
        os << "points = " << c.sweep_points << "\n";
        os << "scale = " << to_string(c.sweep_scale) << "\n";
    }
    if (!c.observables.empty()) os << "\n[outputs]\nobservables = " << join(c.observables) << "\n";
    return os.str();
}

std::vector<double> sweep_values(const RunConfig& c) {
    switch (c.sweep_variable) {
    case SweepVar::none: return {};
    default: break;
    }
    std::vector<double> v;
    const std::size_t n = c.sweep_points;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
        if (c.sweep_scale == Scale::log)
            v.push_back(std::pow(10.0, std::log10(c.sweep_start) + t * (std::log10(c.sweep_stop) - std::log10(c.sweep_start))));
        else
            v.push_back(c.sweep_start + t * (c.sweep_stop - c.sweep_start));
    }
    if (n > 1) {
        v.front() = c.sweep_start;
        v.back() = c.sweep_stop;
    }
    return v;
}

RunConfig at_sweep_value(const RunConfig& c, double value) {
    RunConfig out = c;
    switch (c.sweep_variable) {
    case SweepVar::none: break;
    case SweepVar::kappa: out.kappa_mhz = value; break;
    case SweepVar::g: out.g_ghz = value; break;
    case SweepVar::l_c: out.l_c_nh = value; break;
    case SweepVar::c_c: out.c_c_ff = value; break;
    }
    return out;
}

Resolved resolve(const RunConfig& c) {
    Resolved r;
    r.units.omega_r_ghz = c.omega_r_ghz;
    r.model.omega_r = 1.0;
    r.model.delta = r.units.from_ghz(c.delta_ghz);
    r.model.g = r.units.from_ghz(c.g_ghz);
    r.model.qr_coupling = c.qr_coupling;
    r.model.resonator_dim = c.resonator_dim;
    r.trunc.resonator_dim = c.resonator_dim;
    r.trunc.mode_dims = c.mode_dims;

    const double unit = r.units.rad_per_s();
    double xi0 = 0.0;
    double cutoff = std::numeric_limits<double>::infinity();
    switch (c.env_param) {
    case EnvParam::fixed_cutoff:
        cutoff = r.units.from_ghz(c.omega_cutoff_ghz);
        xi0 = xi0_from_kappa(r.units.from_mhz(c.kappa_mhz), cutoff, 1.0);
        r.kappa_mhz = c.kappa_mhz;
        break;
    case EnvParam::circuit_family:
        r.kappa_mhz = c.kappa_mhz;
        if (c.kappa_mhz > 0.0) {
            const double kappa_si = 2.0 * std::numbers::pi * c.kappa_mhz * 1e6;
            const CircuitParams circ = element_for_kappa(kappa_si, unit, c.z_r_ohm, c.z_t_ohm, c.rw_coupling);
            const EnvSpectrum s = circuit_to_spectrum(circ, unit);
            xi0 = s.xi0;
            cutoff = s.omega_cutoff;
        }
        break;
    case EnvParam::circuit: {
        CircuitParams circ;
        circ.z_r_ohm = c.z_r_ohm;
        circ.z_t_ohm = c.z_t_ohm;
        circ.omega_r_rad_s = unit;
        circ.rw_coupling = c.rw_coupling;
        if (c.rw_coupling == Coupling::inductive) circ.l_c_henry = c.l_c_nh * 1e-9;
        else circ.c_c_farad = c.c_c_ff * 1e-15;
        const EnvSpectrum s = circuit_to_spectrum(circ, unit);
        xi0 = s.xi0;
        cutoff = s.omega_cutoff;
        r.kappa_mhz = r.units.to_mhz(kappa(xi0, cutoff, 1.0));
        break;
    }
    }
    std::vector<double> omegas;
    for (double f : c.mode_frequencies_ghz) omegas.push_back(r.units.from_ghz(f));
    r.env = discretize_modes(xi0, cutoff, c.rw_coupling, omegas, r.units.from_ghz(c.mode_spacing_ghz), c.mode_dims);
    return r;
}

} // namespace dsc::cli
