#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qlift/cavity_analytic.hpp"
#include "qlift/core.hpp"
#include "qlift/master_equation.hpp"
#include "qlift/operator_algebra.hpp"
#include "qlift/qubit_analytic.hpp"

namespace qlift {

/// Scenario file problem. what() names the offending field.
struct ScenarioError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class ModelKind { Qubit, Cavity, Generic };
enum class Method { Analytic, Expm, Rk4 };

inline std::string to_string(Method m) {
    switch (m) {
        case Method::Analytic: return "analytic";
        case Method::Expm: return "expm";
        default: return "rk4";
    }
}

inline Method method_from_string(const std::string& s) {
    if (s == "analytic") return Method::Analytic;
    if (s == "expm") return Method::Expm;
    if (s == "rk4") return Method::Rk4;
    throw ScenarioError("method: unknown value '" + s + "' (expected analytic, expm or rk4)");
}

/// One requested output column.
struct ObservableSpec {
    enum Kind { Population, Coherence, Trace, Purity, MinEigenvalue } kind = Trace;
    int row = 0;
    int col = 0;
    std::string label;
};

struct TimeGrid {
    double start = 0.0;
    double stop = 0.0;
    int points = 2;
};

struct Scenario {
    std::string name;
    ModelKind kind = ModelKind::Generic;
    Method method = Method::Expm;

    QubitParams qubit;
    CavityParams cavity;
    // Generic models carry the Hermitian part and channels explicitly.
    Matrix generic_h0;
    std::vector<JumpChannel> generic_channels;

    Matrix initial_state;
    TimeGrid grid;
    std::vector<ObservableSpec> observables;
    int rk4_steps = 4000;
};

inline Index scenario_dim(const Scenario& sc) {
    switch (sc.kind) {
        case ModelKind::Qubit: return 2;
        case ModelKind::Cavity: return sc.cavity.n_max + 1;
        default: return sc.generic_h0.rows();
    }
}

namespace detail {

using nlohmann::json;

inline const json& field(const json& j, const std::string& key, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) {
        throw ScenarioError(path + key + ": missing required field");
    }
    return *it;
}

inline double number_at(const json& j, const std::string& key, const std::string& path) {
    const json& v = field(j, key, path);
    if (!v.is_number()) {
        throw ScenarioError(path + key + ": expected a number");
    }
    return v.get<double>();
}

inline int integer_at(const json& j, const std::string& key, const std::string& path) {
    const json& v = field(j, key, path);
    if (!v.is_number_integer()) {
        throw ScenarioError(path + key + ": expected an integer");
    }
    return v.get<int>();
}

// Matrix entries are plain numbers or [re, im] pairs.
inline Complex parse_entry(const json& v, const std::string& path) {
    if (v.is_number()) {
        return Complex(v.get<double>(), 0.0);
    }
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        return Complex(v[0].get<double>(), v[1].get<double>());
    }
    throw ScenarioError(path + ": expected a number or an [re, im] pair");
}

inline Matrix parse_matrix(const json& v, const std::string& path) {
    if (!v.is_array() || v.empty()) {
        throw ScenarioError(path + ": expected a nonempty array of rows");
    }
    const Index rows = static_cast<Index>(v.size());
    Index cols = -1;
    Matrix out;
    for (Index r = 0; r < rows; ++r) {
        const json& row = v[static_cast<std::size_t>(r)];
        if (!row.is_array()) {
            throw ScenarioError(path + "[" + std::to_string(r) + "]: expected an array");
        }
        if (cols < 0) {
            cols = static_cast<Index>(row.size());
            out.resize(rows, cols);
        }
        if (static_cast<Index>(row.size()) != cols) {
            throw ScenarioError(path + "[" + std::to_string(r) + "]: ragged row");
        }
        for (Index c = 0; c < cols; ++c) {
            out(r, c) = parse_entry(row[static_cast<std::size_t>(c)],
                                    path + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
        }
    }
    return out;
}

inline Matrix named_initial_state(const std::string& name, ModelKind kind, Index dim,
                                  const std::string& path) {
    if (kind == ModelKind::Qubit) {
        // basis (excited, ground)
        if (name == "excited") {
            Matrix rho = Matrix::Zero(2, 2);
            rho(0, 0) = 1.0;
            return rho;
        }
        if (name == "ground") {
            Matrix rho = Matrix::Zero(2, 2);
            rho(1, 1) = 1.0;
            return rho;
        }
        if (name == "plus") {
            Matrix rho(2, 2);
            rho << 0.5, 0.5, 0.5, 0.5;
            return rho;
        }
        throw ScenarioError(path + ": unknown qubit state '" + name +
                            "' (expected excited, ground or plus)");
    }
    if (kind == ModelKind::Cavity) {
        const int n_max = static_cast<int>(dim) - 1;
        if (name.rfind("fock:", 0) == 0) {
            int n = 0;
            try {
                n = std::stoi(name.substr(5));
            } catch (const std::exception&) {
                throw ScenarioError(path + ": malformed fock level in '" + name + "'");
            }
            if (n < 0 || n > n_max) {
                throw ScenarioError(path + ": fock level " + std::to_string(n) +
                                    " outside [0, " + std::to_string(n_max) + "]");
            }
            return fock_projector(n, n_max);
        }
        if (name.rfind("coherent:", 0) == 0) {
            const std::string body = name.substr(9);
            const auto comma = body.find(',');
            try {
                const double re = std::stod(body.substr(0, comma));
                const double im =
                    comma == std::string::npos ? 0.0 : std::stod(body.substr(comma + 1));
                const Vector ket = coherent_state(Complex(re, im), n_max);
                return ket * ket.adjoint();
            } catch (const std::exception&) {
                throw ScenarioError(path + ": malformed coherent amplitude in '" + name + "'");
            }
        }
        if (name.rfind("thermal:", 0) == 0) {
            double beta = 0.0;
            try {
                beta = std::stod(name.substr(8));
            } catch (const std::exception&) {
                throw ScenarioError(path + ": malformed thermal beta in '" + name + "'");
            }
            if (!(beta > 0.0)) {
                throw ScenarioError(path + ": thermal beta must be positive");
            }
            return thermal_state(beta, n_max);
        }
        throw ScenarioError(path + ": unknown cavity state '" + name +
                            "' (expected fock:n, coherent:re[,im] or thermal:beta)");
    }
    throw ScenarioError(path + ": generic models need an explicit matrix initial state");
}

inline ObservableSpec parse_observable(const std::string& text, Index dim,
                                       const std::string& path) {
    auto parse_index = [&](const std::string& s) {
        int v = 0;
        try {
            v = std::stoi(s);
        } catch (const std::exception&) {
            throw ScenarioError(path + ": malformed index in '" + text + "'");
        }
        if (v < 0 || v >= static_cast<int>(dim)) {
            throw ScenarioError(path + ": index " + std::to_string(v) + " outside [0, " +
                                std::to_string(dim - 1) + "]");
        }
        return v;
    };
    ObservableSpec spec;
    if (text == "trace") {
        spec.kind = ObservableSpec::Trace;
        spec.label = "trace";
        return spec;
    }
    if (text == "purity") {
        spec.kind = ObservableSpec::Purity;
        spec.label = "purity";
        return spec;
    }
    if (text == "min_eigenvalue") {
        spec.kind = ObservableSpec::MinEigenvalue;
        spec.label = "min_eigenvalue";
        return spec;
    }
    if (text.rfind("population:", 0) == 0) {
        spec.kind = ObservableSpec::Population;
        spec.row = spec.col = parse_index(text.substr(11));
        spec.label = "population:" + std::to_string(spec.row);
        return spec;
    }
    if (text.rfind("coherence:", 0) == 0) {
        const std::string body = text.substr(10);
        const auto comma = body.find(',');
        if (comma == std::string::npos) {
            throw ScenarioError(path + ": coherence needs two indices, got '" + text + "'");
        }
        spec.row = parse_index(body.substr(0, comma));
        spec.col = parse_index(body.substr(comma + 1));
        spec.kind = ObservableSpec::Coherence;
        spec.label = "coherence:" + std::to_string(spec.row) + ":" + std::to_string(spec.col);
        return spec;
    }
    throw ScenarioError(path + ": unknown observable '" + text +
                        "' (expected population:n, coherence:m,n, trace, purity or "
                        "min_eigenvalue)");
}

}  // namespace detail

/// Parse and validate a scenario document. Throws ScenarioError with the
/// offending field named in the message.
inline Scenario parse_scenario(const std::string& text) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ScenarioError(std::string("scenario: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ScenarioError("scenario: top level must be an object");
    }

    Scenario sc;
    sc.name = doc.value("name", std::string("scenario"));

    const json& mj = detail::field(doc, "model", "");
    if (!mj.is_object()) {
        throw ScenarioError("model: expected an object with a kind field");
    }
    const std::string kind = detail::field(mj, "kind", "model.").get<std::string>();
    if (kind == "qubit") {
        sc.kind = ModelKind::Qubit;
        sc.qubit.rabi = detail::number_at(mj, "rabi", "model.");
        sc.qubit.gamma = detail::number_at(mj, "gamma", "model.");
        const bool has_nbar = mj.contains("nbar");
        const bool has_bath = mj.contains("omega") || mj.contains("temperature");
        if (has_nbar && has_bath) {
            throw ScenarioError("model.nbar: give either nbar or (omega, temperature), not both");
        }
        if (has_nbar) {
            sc.qubit.nbar = detail::number_at(mj, "nbar", "model.");
        } else if (has_bath) {
            const double omega = detail::number_at(mj, "omega", "model.");
            const double temperature = detail::number_at(mj, "temperature", "model.");
            try {
                sc.qubit.nbar = bose_occupation(omega, temperature);
            } catch (const DomainError& e) {
                throw ScenarioError(std::string("model.temperature: ") + e.what());
            }
        } else {
            sc.qubit.nbar = 0.0;
        }
        try {
            validate_params(sc.qubit);
        } catch (const DomainError& e) {
            throw ScenarioError(std::string("model: ") + e.what());
        }
    } else if (kind == "cavity") {
        sc.kind = ModelKind::Cavity;
        sc.cavity.omega_f = detail::number_at(mj, "omega_f", "model.");
        sc.cavity.kappa = detail::number_at(mj, "kappa", "model.");
        sc.cavity.n_max = detail::integer_at(mj, "n_max", "model.");
        try {
            validate_params(sc.cavity);
        } catch (const DomainError& e) {
            throw ScenarioError(std::string("model: ") + e.what());
        }
    } else if (kind == "generic") {
        sc.kind = ModelKind::Generic;
        const Index dim = detail::integer_at(mj, "dim", "model.");
        if (dim < 1) {
            throw ScenarioError("model.dim: must be positive");
        }
        sc.generic_h0 =
            detail::parse_matrix(detail::field(mj, "hamiltonian", "model."), "model.hamiltonian");
        if (sc.generic_h0.rows() != dim || sc.generic_h0.cols() != dim) {
            throw ScenarioError("model.hamiltonian: must be " + std::to_string(dim) + "x" +
                                std::to_string(dim) + " to match model.dim");
        }
        const json& chans = detail::field(mj, "channels", "model.");
        if (!chans.is_array()) {
            throw ScenarioError("model.channels: expected an array");
        }
        for (std::size_t i = 0; i < chans.size(); ++i) {
            const std::string path = "model.channels[" + std::to_string(i) + "].";
            const json& cj = chans[i];
            JumpChannel ch;
            ch.rate = detail::number_at(cj, "rate", path);
            if (!(ch.rate >= 0.0)) {
                throw ScenarioError(path + "rate: must be nonnegative");
            }
            ch.op = detail::parse_matrix(detail::field(cj, "operator", path), path + "operator");
            if (ch.op.rows() != dim || ch.op.cols() != dim) {
                throw ScenarioError(path + "operator: must be " + std::to_string(dim) + "x" +
                                    std::to_string(dim) + " to match model.dim");
            }
            sc.generic_channels.push_back(std::move(ch));
        }
    } else {
        throw ScenarioError("model.kind: unknown kind '" + kind +
                            "' (expected qubit, cavity or generic)");
    }
    const Index dim = scenario_dim(sc);

    if (doc.contains("method")) {
        const json& mv = doc["method"];
        if (!mv.is_string()) {
            throw ScenarioError("method: expected a string");
        }
        sc.method = method_from_string(mv.get<std::string>());
    }
    if (sc.method == Method::Analytic && sc.kind == ModelKind::Generic) {
        throw ScenarioError("method: analytic is not available for generic models");
    }

    const json& init = detail::field(doc, "initial_state", "");
    if (init.is_string()) {
        sc.initial_state =
            detail::named_initial_state(init.get<std::string>(), sc.kind, dim, "initial_state");
    } else if (init.is_array()) {
        sc.initial_state = detail::parse_matrix(init, "initial_state");
        if (sc.initial_state.rows() != dim || sc.initial_state.cols() != dim) {
            throw ScenarioError("initial_state: must be " + std::to_string(dim) + "x" +
                                std::to_string(dim) + " for this model");
        }
    } else {
        throw ScenarioError("initial_state: expected a state name or a matrix");
    }
    const double tr_err = std::abs(sc.initial_state.trace() - Complex(1.0, 0.0));
    if (tr_err > 1e-6) {
        throw ScenarioError("initial_state: trace differs from 1 by " + std::to_string(tr_err));
    }

    const json& grid = detail::field(doc, "times", "");
    sc.grid.start = detail::number_at(grid, "start", "times.");
    sc.grid.stop = detail::number_at(grid, "stop", "times.");
    sc.grid.points = detail::integer_at(grid, "points", "times.");
    if (grid.contains("spacing") && grid["spacing"] != "linear") {
        throw ScenarioError("times.spacing: only linear grids are supported");
    }
    if (!(sc.grid.start >= 0.0) || !std::isfinite(sc.grid.start)) {
        throw ScenarioError("times.start: must be finite and nonnegative");
    }
    if (!(sc.grid.stop > sc.grid.start) || !std::isfinite(sc.grid.stop)) {
        throw ScenarioError("times.stop: must exceed times.start");
    }
    if (sc.grid.points < 2) {
        throw ScenarioError("times.points: need at least 2");
    }

    const json& obs = detail::field(doc, "observables", "");
    if (!obs.is_array() || obs.empty()) {
        throw ScenarioError("observables: expected a nonempty array");
    }
    for (std::size_t i = 0; i < obs.size(); ++i) {
        if (!obs[i].is_string()) {
            throw ScenarioError("observables[" + std::to_string(i) + "]: expected a string");
        }
        sc.observables.push_back(detail::parse_observable(
            obs[i].get<std::string>(), dim, "observables[" + std::to_string(i) + "]"));
    }

    if (doc.contains("rk4_steps")) {
        sc.rk4_steps = detail::integer_at(doc, "rk4_steps", "");
        if (sc.rk4_steps < 1) {
            throw ScenarioError("rk4_steps: must be positive");
        }
    }
    return sc;
}

/// The converted-generator model for any scenario kind.
inline MasterEquation scenario_model(const Scenario& sc,
                                     const Tolerances& tol = default_tolerances()) {
    switch (sc.kind) {
        case ModelKind::Qubit:
            return from_standard_form(qubit_standard_form(sc.qubit), tol);
        case ModelKind::Cavity:
            return from_standard_form(cavity_standard_form(sc.cavity), tol);
        default: {
            StandardForm sf;
            sf.h0 = sc.generic_h0;
            for (const auto& ch : sc.generic_channels) {
                sf.lowering.push_back(ch);
            }
            try {
                return from_standard_form(sf, tol);
            } catch (const DomainError& e) {
                throw ScenarioError(std::string("model.hamiltonian: ") + e.what());
            }
        }
    }
}

}  // namespace qlift
