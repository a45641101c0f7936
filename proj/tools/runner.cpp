#include "runner.hpp"

#include "dsc/errors.hpp"
#include "dsc/metrology.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <sstream>

namespace dsc::cli {

namespace {

const std::vector<StateLabel>& fraction_labels() {
    static const std::vector<StateLabel> labels{{0, Sign::plus}, {0, Sign::minus}, {1, Sign::minus}, {1, Sign::plus}};
    return labels;
}

void fill_fractions(ResultRow& row, const Fractions& f) {
    row.fraction_0plus = f.at({0, Sign::plus});
    row.fraction_0minus = f.at({0, Sign::minus});
    row.fraction_1minus = f.at({1, Sign::minus});
    row.fraction_1plus = f.at({1, Sign::plus});
}

void fill_metrology(ResultRow& row, const DensityMatrix& rho_qr) {
    const MetrologyReport rep = optimize_axis(rho_qr);
    row.mp = rep.mp;
    if (rep.degenerate) return;  // no preferred axis
    row.theta_opt = rep.axis.theta;
    row.phi_opt = rep.axis.phi;
}

std::string error_tag(const std::exception& e) {
    std::string kind = "error";
    if (dynamic_cast<const SolverError*>(&e)) kind = "solver_error";
    else if (dynamic_cast<const SizeError*>(&e)) kind = "size_error";
    else if (dynamic_cast<const DomainError*>(&e)) kind = "domain_error";
    std::string msg = kind + ": " + e.what();
    for (char& ch : msg)
        if (ch == '"' || ch == ',' || ch == '\n') ch = ' ';
    return msg;
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

} // namespace

PointState evaluate(const RunConfig& c, Backend which) {
    PointState st;
    st.row.backend = which;
    st.row.g_ghz = c.g_ghz;
    st.row.kappa_mhz = c.kappa_mhz;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        const Resolved r = resolve(c);
        st.row.kappa_mhz = r.kappa_mhz;
        if (which == Backend::cvs) {
            const CvsProblem prob{r.model, r.env, c.f_mode};
            const CvsSolution sol = solve(prob);
            const double a = std::abs(sol.alpha_bar);
            const std::size_t dim = c.cvs_resonator_dim ? c.cvs_resonator_dim : std::max<std::size_t>(30, recommended_dim(a));
            DensityMatrix rho = build_zts(sol.alpha_bar, sol.coherence_C, dim);
            st.row.n_virtual = a * a;
            st.row.purity = 0.5 * (1.0 + sol.coherence_C * sol.coherence_C);
            st.row.coherence_C = sol.coherence_C;
            st.row.energy = r.units.to_ghz(sol.energy);
            st.row.solver_iterations = sol.iterations;
            fill_metrology(st.row, rho);
            fill_fractions(st.row, excited_fractions(rho, sol.alpha_bar, fraction_labels()));
            st.alpha = sol.alpha_bar;
            st.rho_qr = std::move(rho);
        } else {
            const Operator h = assemble_total(r.model, r.env, r.trunc);
            const GroundState gs = ground_state(h);
            DensityMatrix rho = reduce_to_qr(gs.ground);
            const Operator n_op = embed(number_op(r.trunc.resonator_dim), rho.space());
            st.row.n_virtual = rho.expectation(n_op).real();
            st.row.purity = rho.purity();
            st.row.energy = r.units.to_ghz(gs.energy);
            fill_metrology(st.row, rho);
            const Fractions f = c.fraction_basis == FractionBasis::exact
                                    ? exact_fractions(rho, r.model, fraction_labels())
                                    : excited_fractions(rho, r.model.g / r.model.omega_r, fraction_labels());
            fill_fractions(st.row, f);
            if (gs.near_degenerate) st.row.error = "warning: near-degenerate ground state; fractions are basis-dependent";
            st.alpha = r.model.g / r.model.omega_r;
            st.rho_qr = std::move(rho);
        }
    } catch (const std::exception& e) {
        const double g = st.row.g_ghz, k = st.row.kappa_mhz;
        st.row = ResultRow{};
        st.row.backend = which;
        st.row.g_ghz = g;
        st.row.kappa_mhz = k;
        st.row.error = error_tag(e);
        st.rho_qr.reset();
    }
    if (c.timing)
        st.row.wall_time_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return st;
}

std::vector<ResultRow> run_point(const RunConfig& c) {
    std::vector<ResultRow> rows;
    if (c.backend != Backend::diag) rows.push_back(evaluate(c, Backend::cvs).row);
    if (c.backend != Backend::cvs) rows.push_back(evaluate(c, Backend::diag).row);
    return rows;
}

std::vector<std::string> csv_columns(const RunConfig& c) {
    std::vector<std::string> cols{"g_ghz", "kappa_mhz", "backend"};
    const auto& obs = c.observables.empty() ? observable_columns() : c.observables;
    for (const auto& name : observable_columns())
        if (std::find(obs.begin(), obs.end(), name) != obs.end()) cols.push_back(name);
    cols.push_back("error");
    return cols;
}

std::string csv_preamble(const RunConfig& c, const std::string& title) {
    std::ostringstream os;
    os << "# " << title << "\n";
    std::istringstream cfg(serialize(c));
    std::string line;
    while (std::getline(cfg, line)) os << (line.empty() ? "#" : "# " + line) << "\n";
    const auto cols = csv_columns(c);
    for (std::size_t k = 0; k < cols.size(); ++k) os << (k ? "," : "") << cols[k];
    os << "\n";
    return os.str();
}

std::string format_row(const ResultRow& r, const std::vector<std::string>& columns) {
    const auto opt = [](const std::optional<double>& v) { return v ? fmt_double(*v) : std::string(); };
    std::string out;
    for (std::size_t k = 0; k < columns.size(); ++k) {
        const std::string& col = columns[k];
        std::string cell;
        if (col == "g_ghz") cell = fmt_double(r.g_ghz);
        else if (col == "kappa_mhz") cell = fmt_double(r.kappa_mhz);
        else if (col == "backend") cell = std::string(to_string(r.backend));
        else if (col == "n_virtual") cell = opt(r.n_virtual);
        else if (col == "purity") cell = opt(r.purity);
        else if (col == "coherence_C") cell = opt(r.coherence_C);
        else if (col == "energy") cell = opt(r.energy);
        else if (col == "mp") cell = opt(r.mp);
        else if (col == "theta_opt") cell = opt(r.theta_opt);
        else if (col == "phi_opt") cell = opt(r.phi_opt);
        else if (col == "fraction_0plus") cell = opt(r.fraction_0plus);
        else if (col == "fraction_1minus") cell = opt(r.fraction_1minus);
        else if (col == "fraction_1plus") cell = opt(r.fraction_1plus);
        else if (col == "fraction_0minus") cell = opt(r.fraction_0minus);
        else if (col == "solver_iterations") cell = r.solver_iterations ? std::to_string(*r.solver_iterations) : "";
        else if (col == "wall_time_ms") cell = opt(r.wall_time_ms);
        else if (col == "error") cell = r.error;
        out += (k ? "," : "") + cell;
    }
    return out + "\n";
}

SweepOutput run_sweep(const RunConfig& c, int jobs) {
    std::vector<double> values = sweep_values(c);
    const bool swept = !values.empty();
    if (!swept) values.push_back(0.0);
    const auto n = static_cast<std::int64_t>(values.size());
    std::vector<std::vector<ResultRow>> rows(values.size());
    const int workers = std::max(1, jobs);
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        rows[idx] = run_point(swept ? at_sweep_value(c, values[idx]) : c);
    }
    SweepOutput out;
    const auto cols = csv_columns(c);
    out.csv = csv_preamble(c, swept ? "dsc sweep" : "dsc point");
    for (const auto& point : rows)
        for (const auto& r : point) {
            out.csv += format_row(r, cols);
            ++out.rows;
            if (r.failed()) ++out.failures;
        }
    return out;
}

} // namespace dsc::cli
