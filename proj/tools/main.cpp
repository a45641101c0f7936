// dsc: command-line front end.
//
//   dsc point   --config FILE [--out FILE] [--backend cvs|diag|both]
//   dsc sweep   --config FILE [--out FILE] [--backend ...] [--jobs N]
//   dsc wigner  --config FILE [--out FILE] [--backend cvs|diag] [--axis x|y|z|opt|THETA,PHI]
//               [--outcome +1|-1] [--half-width W] [--points N]
//   dsc circuit --config FILE [--out FILE]
//
// Exit status: 0 success, 1 configuration or usage error, 2 some rows failed.

#include "config.hpp"
#include "runner.hpp"

#include "dsc/errors.hpp"
#include "dsc/kernels.hpp"
#include "dsc/metrology.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

namespace {

using namespace dsc;
using namespace dsc::cli;

struct Common {
    std::string config;
    std::string out;
    std::string backend;
};

void emit(const std::string& text, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream os(out, std::ios::binary);
    if (!os) throw ConfigError("cannot write '" + out + "'");
    os << text;
}

RunConfig load(const Common& o) {
    RunConfig c = load_config(o.config);
    if (!o.backend.empty()) c.backend = parse_backend(o.backend);
    return c;
}

int default_jobs() {
    if (const char* env = std::getenv("DSC_JOBS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return kernels::max_threads();
}

MeasurementAxis parse_axis(const std::string& text) {
    constexpr double pi = std::numbers::pi;
    if (text == "x") return {pi / 2, 0.0};
    if (text == "y") return {pi / 2, pi / 2};
    if (text == "z") return {0.0, 0.0};
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw ConfigError("--axis expects x|y|z|opt|THETA,PHI, got '" + text + "'");
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

int cmd_table(const Common& o, bool sweep, int jobs) {
    RunConfig c = load(o);
    if (!sweep) c.sweep_variable = SweepVar::none;
    const SweepOutput res = run_sweep(c, jobs);
    emit(res.csv, o.out);
    if (res.failures) {
        std::cerr << "dsc: " << res.failures << " of " << res.rows << " rows failed\n";
        return 2;
    }
    return 0;
}

int cmd_wigner(const Common& o, const std::string& axis_text, int outcome, double half_width, std::size_t points) {
    RunConfig c = load(o);
    c.sweep_variable = SweepVar::none;
    const Backend which = c.backend == Backend::diag ? Backend::diag : Backend::cvs;
    const PointState st = evaluate(c, which);
    if (!st.rho_qr) {
        std::cerr << "dsc: " << st.row.error << "\n";
        return 2;
    }
    const MeasurementAxis axis = axis_text == "opt" ? optimize_axis(*st.rho_qr).axis : parse_axis(axis_text);
    const auto outcomes = qubit_measure(*st.rho_qr, axis);
    const Outcome& chosen = outcomes[outcome > 0 ? 0 : 1];
    if (!chosen.state) {
        std::cerr << "dsc: outcome " << outcome << " has vanishing probability\n";
        return 2;
    }
    if (!(half_width > 0.0)) half_width = std::abs(st.alpha) + 3.0;
    const WignerGrid grid = wigner_grid(*chosen.state, half_width, points);
    std::ostringstream os;
    os << "# dsc wigner\n";
    os << "# backend = " << to_string(which) << "\n";
    os << "# axis_theta = " << fmt(axis.theta) << "\n";
    os << "# axis_phi = " << fmt(axis.phi) << "\n";
    os << "# outcome = " << outcome << "\n";
    os << "# probability = " << fmt(chosen.probability) << "\n";
    os << "# mp = " << fmt(metrological_power(*chosen.state)) << "\n";
    std::istringstream cfg(serialize(c));
    std::string line;
    while (std::getline(cfg, line)) os << (line.empty() ? "#" : "# " + line) << "\n";
    write_wigner_csv(os, grid);
    emit(os.str(), o.out);
    return 0;
}

int cmd_circuit(const Common& o) {
    const RunConfig c = load(o);
    if (c.z_r_ohm <= 0.0 || c.z_t_ohm <= 0.0) throw ConfigError("circuit table needs Z_R_ohm and Z_T_ohm");
    const bool inductive = c.rw_coupling == Coupling::inductive;
    std::vector<double> values;
    if (c.sweep_variable == SweepVar::l_c || c.sweep_variable == SweepVar::c_c) {
        values = sweep_values(c);
    } else {
        const double lo = inductive ? 0.01 : 0.1;  // nH or fF, four decades
        for (int i = 0; i <= 40; ++i) values.push_back(lo * std::pow(10.0, i / 10.0));
    }
    const UnitSystem units{c.omega_r_ghz};
    std::ostringstream os;
    os << "# dsc circuit\n";
    os << "# rw_coupling = " << to_string(c.rw_coupling) << "\n";
    os << "# Z_R_ohm = " << fmt(c.z_r_ohm) << "\n";
    os << "# Z_T_ohm = " << fmt(c.z_t_ohm) << "\n";
    os << "# omega_r_ghz = " << fmt(c.omega_r_ghz) << "\n";
    os << (inductive ? "L_c_nH" : "C_c_fF") << ",xi0,omega_cutoff_ghz,kappa_mhz\n";
    for (double v : values) {
        CircuitParams circ;
        circ.z_r_ohm = c.z_r_ohm;
        circ.z_t_ohm = c.z_t_ohm;
        circ.omega_r_rad_s = units.rad_per_s();
        circ.rw_coupling = c.rw_coupling;
        if (inductive) circ.l_c_henry = v * 1e-9;
        else circ.c_c_farad = v * 1e-15;
        const EnvSpectrum s = circuit_to_spectrum(circ, units.rad_per_s());
        os << fmt(v) << "," << fmt(s.xi0) << "," << fmt(units.to_ghz(s.omega_cutoff)) << ","
           << fmt(units.to_mhz(kappa(s.xi0, s.omega_cutoff, 1.0))) << "\n";
    }
    emit(os.str(), o.out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ground states of a deep-strong-coupled qubit-resonator system in a waveguide"};
    app.require_subcommand(1);
    Common o;
    int jobs = default_jobs();
    std::string axis = "x";
    int outcome = -1;
    double half_width = 0.0;
    std::size_t points = 201;

    const auto add_common = [&o](CLI::App* sub) {
        sub->add_option("--config", o.config, "configuration file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", o.out, "output file (default: stdout)");
        sub->add_option("--backend", o.backend, "cvs|diag|both (overrides [run] backend)")
            ->check(CLI::IsMember({"cvs", "diag", "both"}));
    };
    auto* point = app.add_subcommand("point", "evaluate the configured point (sweep ignored)");
    add_common(point);
    auto* sweep = app.add_subcommand("sweep", "evaluate the configured sweep");
    add_common(sweep);
    sweep->add_option("--jobs", jobs, "worker threads (default: DSC_JOBS or the OpenMP maximum)")->check(CLI::PositiveNumber);
    auto* wig = app.add_subcommand("wigner", "Wigner function of a qubit-conditioned resonator state");
    add_common(wig);
    wig->add_option("--axis", axis, "x|y|z|opt|THETA,PHI (default x)");
    wig->add_option("--outcome", outcome, "+1 or -1 (default -1)")->check(CLI::IsMember({-1, 1}));
    wig->add_option("--half-width", half_width, "grid half-width (default |alpha| + 3)");
    wig->add_option("--points", points, "points per axis (default 201)")->check(CLI::Range(2, 2001));
    auto* circ = app.add_subcommand("circuit", "coupling element to xi0, cutoff and kappa table");
    add_common(circ);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    try {
        if (*point) return cmd_table(o, false, jobs);
        if (*sweep) return cmd_table(o, true, jobs);
        if (*wig) return cmd_wigner(o, axis, outcome, half_width, points);
        if (*circ) return cmd_circuit(o);
    } catch (const ConfigError& e) {
        std::cerr << "dsc: config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "dsc: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
