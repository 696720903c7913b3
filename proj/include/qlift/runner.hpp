#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "qlift/cavity_analytic.hpp"
#include "qlift/core.hpp"
#include "qlift/effective_propagation.hpp"
#include "qlift/master_equation.hpp"
#include "qlift/qubit_analytic.hpp"
#include "qlift/scenario.hpp"

namespace qlift {

/// One executed scenario: observable rows plus run metadata. Flagged rows are
/// those whose state failed a health check (trace drift or support crowding
/// the cavity truncation); they stay in the output but comparisons skip them.
struct RunReport {
    std::string scenario_name;
    Method method = Method::Expm;
    std::vector<std::string> columns;  // leading "t"
    std::vector<std::vector<double>> rows;
    std::vector<char> row_flagged;
    bool trace_flag = false;
    bool truncation_warning = false;
    double wall_seconds = 0.0;
    std::vector<std::string> notes;
};

namespace detail {

inline std::vector<double> time_grid(const TimeGrid& g) {
    std::vector<double> ts(g.points);
    const double dt = (g.stop - g.start) / (g.points - 1);
    for (int i = 0; i < g.points; ++i) {
        ts[i] = g.start + dt * i;
    }
    ts.back() = g.stop;
    return ts;
}

// States at each grid time, by whichever propagation the method asks for.
// All three treat the initial state as living at absolute time 0.
inline std::vector<Matrix> evolve_grid(const Scenario& sc, Method method,
                                       const std::vector<double>& ts, const Tolerances& tol) {
    std::vector<Matrix> states;
    states.reserve(ts.size());

    if (method == Method::Analytic) {
        if (sc.kind == ModelKind::Qubit) {
            for (double t : ts) {
                states.push_back(evolve_qubit(sc.initial_state, sc.qubit, t));
            }
        } else if (sc.kind == ModelKind::Cavity) {
            for (double t : ts) {
                states.push_back(fock_solution(sc.initial_state, sc.cavity, t, nullptr, tol));
            }
        } else {
            throw DomainError("run: analytic method is not available for generic models");
        }
        return states;
    }

    const MasterEquation model = scenario_model(sc, tol);

    if (method == Method::Expm) {
        const double dt = (sc.grid.stop - sc.grid.start) / (sc.grid.points - 1);
        Vector v = vectorize(sc.initial_state).amplitudes;
        if (sc.grid.start > 0.0) {
            v = propagator_matrix(model, sc.grid.start) * v;
        }
        const Matrix step = propagator_matrix(model, dt);
        states.push_back(devectorize(v));
        for (std::size_t i = 1; i < ts.size(); ++i) {
            v = step * v;
            states.push_back(devectorize(v));
        }
        return states;
    }

    // RK4: integrate sequentially from t = 0, splitting the step budget over
    // the segments in proportion to their length.
    const double span = sc.grid.stop;
    auto steps_for = [&](double len) {
        if (len <= 0.0) return 0;
        const double share = static_cast<double>(sc.rk4_steps) * len / span;
        return std::max(1, static_cast<int>(std::llround(share)));
    };
    Matrix rho = sc.initial_state;
    double t_now = 0.0;
    for (double t : ts) {
        const double len = t - t_now;
        if (len > 0.0) {
            rho = rk4_evolve(model, rho, len, steps_for(len));
            t_now = t;
        }
        states.push_back(rho);
    }
    return states;
}

inline double observable_value(const ObservableSpec& spec, const Matrix& rho, bool imag_part) {
    switch (spec.kind) {
        case ObservableSpec::Population:
            return rho(spec.row, spec.col).real();
        case ObservableSpec::Coherence: {
            const Complex v = rho(spec.row, spec.col);
            return imag_part ? v.imag() : v.real();
        }
        case ObservableSpec::Trace:
            return rho.trace().real();
        case ObservableSpec::Purity:
            return (rho * rho).trace().real();
        default: {  // MinEigenvalue, of the Hermitian part
            const Matrix herm = 0.5 * (rho + rho.adjoint());
            Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
            return es.eigenvalues().minCoeff();
        }
    }
}

inline std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

}  // namespace detail

/// Execute a scenario. method_override, when given, wins over the scenario's
/// own method field.
inline RunReport run(const Scenario& sc, std::optional<Method> method_override = std::nullopt,
                     const Tolerances& tol = default_tolerances()) {
    const auto t0 = std::chrono::steady_clock::now();
    const Method method = method_override.value_or(sc.method);
    if (method == Method::Analytic && sc.kind == ModelKind::Generic) {
        throw DomainError("run: analytic method is not available for generic models");
    }

    RunReport report;
    report.scenario_name = sc.name;
    report.method = method;
    report.columns.push_back("t");
    for (const auto& spec : sc.observables) {
        if (spec.kind == ObservableSpec::Coherence) {
            report.columns.push_back(spec.label + ":re");
            report.columns.push_back(spec.label + ":im");
        } else {
            report.columns.push_back(spec.label);
        }
    }

    const std::vector<double> ts = detail::time_grid(sc.grid);
    const std::vector<Matrix> states = detail::evolve_grid(sc, method, ts, tol);

    const bool cavity = sc.kind == ModelKind::Cavity;
    const int safe_top = cavity ? reliable_levels(sc.cavity, tol.truncation_buffer) : 0;
    if (cavity && max_support_level(sc.initial_state, tol.kernel) > safe_top) {
        report.truncation_warning = true;
        report.notes.push_back("initial state support within " +
                               std::to_string(tol.truncation_buffer) +
                               " levels of the truncation edge");
    }

    for (std::size_t i = 0; i < states.size(); ++i) {
        const Matrix& rho = states[i];
        bool flagged = false;

        const double trace_defect = std::abs(rho.trace() - Complex(1.0, 0.0));
        if (trace_defect > tol.trace_flag) {
            flagged = true;
            if (!report.trace_flag) {
                report.trace_flag = true;
                report.notes.push_back("trace deviates from 1 by " +
                                       detail::format_value(trace_defect) + " at t=" +
                                       detail::format_value(ts[i]));
            }
        }
        if (cavity && max_support_level(rho, tol.kernel) > safe_top) {
            flagged = true;
            report.truncation_warning = true;
        }

        std::vector<double> row;
        row.reserve(report.columns.size());
        row.push_back(ts[i]);
        for (const auto& spec : sc.observables) {
            if (spec.kind == ObservableSpec::Coherence) {
                row.push_back(detail::observable_value(spec, rho, false));
                row.push_back(detail::observable_value(spec, rho, true));
            } else {
                row.push_back(detail::observable_value(spec, rho, false));
            }
        }
        for (double v : row) {
            if (!std::isfinite(v)) {
                throw NumericalRangeError("run: non-finite value in " + to_string(method) +
                                          " output at t=" + detail::format_value(ts[i]));
            }
        }
        report.rows.push_back(std::move(row));
        report.row_flagged.push_back(flagged ? 1 : 0);
    }

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

/// CSV serialization: header row, then one line per grid point, 15
/// significant digits. Metadata intentionally stays out of the stream so a
/// rerun is byte-identical.
inline std::string to_csv(const RunReport& report) {
    std::string out;
    for (std::size_t c = 0; c < report.columns.size(); ++c) {
        if (c) out += ',';
        out += report.columns[c];
    }
    out += '\n';
    for (const auto& row : report.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += detail::format_value(row[c]);
        }
        out += '\n';
    }
    return out;
}

/// Cross-method deviation table. Rows flagged in any participating run are
/// excluded from the pass/fail verdict.
struct ComparisonReport {
    std::string scenario_name;
    std::vector<RunReport> runs;
    std::vector<std::string> columns;      // observable columns, no "t"
    std::vector<double> max_deviation;     // per column, over unflagged rows
    double overall_max = 0.0;
    double tolerance = 1e-8;
    int excluded_rows = 0;
    bool pass = true;
};

inline ComparisonReport compare(const Scenario& sc, const std::vector<Method>& methods,
                                double tolerance = 1e-8,
                                const Tolerances& tol = default_tolerances()) {
    if (methods.size() < 2) {
        throw DomainError("compare: need at least two methods");
    }
    ComparisonReport cmp;
    cmp.scenario_name = sc.name;
    cmp.tolerance = tolerance;
    for (Method m : methods) {
        cmp.runs.push_back(run(sc, m, tol));
    }

    const RunReport& first = cmp.runs.front();
    cmp.columns.assign(first.columns.begin() + 1, first.columns.end());
    cmp.max_deviation.assign(cmp.columns.size(), 0.0);

    const std::size_t n_rows = first.rows.size();
    for (std::size_t r = 0; r < n_rows; ++r) {
        bool excluded = false;
        for (const auto& rep : cmp.runs) {
            if (rep.row_flagged[r]) excluded = true;
        }
        if (excluded) {
            ++cmp.excluded_rows;
            continue;
        }
        for (std::size_t c = 1; c < first.columns.size(); ++c) {
            for (std::size_t a = 0; a + 1 < cmp.runs.size(); ++a) {
                for (std::size_t b = a + 1; b < cmp.runs.size(); ++b) {
                    const double d = std::abs(cmp.runs[a].rows[r][c] - cmp.runs[b].rows[r][c]);
                    cmp.max_deviation[c - 1] = std::max(cmp.max_deviation[c - 1], d);
                }
            }
        }
    }
    for (double d : cmp.max_deviation) {
        cmp.overall_max = std::max(cmp.overall_max, d);
    }
    cmp.pass = cmp.overall_max <= tolerance;
    return cmp;
}

inline std::string to_json(const ComparisonReport& cmp) {
    nlohmann::json j;
    j["scenario"] = cmp.scenario_name;
    j["tolerance"] = cmp.tolerance;
    j["pass"] = cmp.pass;
    j["overall_max_deviation"] = cmp.overall_max;
    j["excluded_rows"] = cmp.excluded_rows;
    nlohmann::json methods = nlohmann::json::array();
    for (const auto& rep : cmp.runs) {
        nlohmann::json m;
        m["method"] = to_string(rep.method);
        m["wall_seconds"] = rep.wall_seconds;
        m["trace_flag"] = rep.trace_flag;
        m["truncation_warning"] = rep.truncation_warning;
        m["notes"] = rep.notes;
        methods.push_back(std::move(m));
    }
    j["methods"] = std::move(methods);
    nlohmann::json devs = nlohmann::json::object();
    for (std::size_t c = 0; c < cmp.columns.size(); ++c) {
        devs[cmp.columns[c]] = cmp.max_deviation[c];
    }
    j["max_deviation"] = std::move(devs);
    return j.dump(2) + "\n";
}

}  // namespace qlift
