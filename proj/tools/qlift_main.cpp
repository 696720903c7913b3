// qlift: solve Lindblad dynamics by lifting the density matrix to a doubled
// state space and exponentiating the resulting generator, with analytic and
// RK4 reference paths.
//
// Exit codes: 0 success, 2 parse/validation problem, 3 numerical failure,
// 4 comparison beyond tolerance.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qlift/qlift.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitComparison = 4;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw qlift::ScenarioError("cannot open scenario file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void print_metadata(const qlift::RunReport& report) {
    std::cerr << "# scenario: " << report.scenario_name << "\n"
              << "# method: " << qlift::to_string(report.method) << "\n"
              << "# points: " << report.rows.size() << "\n"
              << "# wall_seconds: " << report.wall_seconds << "\n"
              << "# trace_flag: " << (report.trace_flag ? "yes" : "no") << "\n"
              << "# truncation_warning: " << (report.truncation_warning ? "yes" : "no") << "\n";
    for (const auto& note : report.notes) {
        std::cerr << "# note: " << note << "\n";
    }
}

std::vector<qlift::Method> parse_method_list(const std::string& text) {
    std::vector<qlift::Method> methods;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            methods.push_back(qlift::method_from_string(item));
        }
    }
    return methods;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lindblad dynamics via a lifted, exponentiated generator"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_path;
    std::string methods_text;
    double tol_solve = 1e-10;
    double tol_compare = 1e-8;

    auto* solve = app.add_subcommand("solve", "Run a scenario and emit a CSV time series");
    solve->add_option("scenario", scenario_path, "Scenario JSON file")->required();
    solve->add_option("--out", out_path, "Write CSV here instead of stdout");
    solve->add_option("--tol", tol_solve, "Trace-drift flag threshold (default 1e-10)");

    auto* compare = app.add_subcommand("compare", "Run several methods and report deviations");
    compare->add_option("scenario", scenario_path, "Scenario JSON file")->required();
    compare->add_option("--methods", methods_text, "Comma-separated: expm,rk4,analytic")
        ->required();
    compare->add_option("--tol", tol_compare, "Max allowed deviation (default 1e-8)");

    auto* validate = app.add_subcommand("validate", "Parse and validate a scenario file");
    validate->add_option("scenario", scenario_path, "Scenario JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        const qlift::Scenario sc = qlift::parse_scenario(read_file(scenario_path));

        if (validate->parsed()) {
            const qlift::MasterEquation model = qlift::scenario_model(sc);
            for (const auto& note : model.diagnostics) {
                std::cerr << "# note: " << note << "\n";
            }
            std::cout << "ok: " << sc.name << " (dim " << qlift::scenario_dim(sc) << ", method "
                      << qlift::to_string(sc.method) << ", " << sc.grid.points << " points)\n";
            return kExitOk;
        }

        if (solve->parsed()) {
            qlift::Tolerances tol = qlift::default_tolerances();
            tol.trace_flag = tol_solve;
            const qlift::RunReport report = qlift::run(sc, std::nullopt, tol);
            print_metadata(report);
            const std::string csv = qlift::to_csv(report);
            if (out_path.empty()) {
                std::cout << csv;
            } else {
                std::ofstream out(out_path, std::ios::binary);
                if (!out) {
                    std::cerr << "error: cannot write " << out_path << "\n";
                    return kExitUsage;
                }
                out << csv;
            }
            return kExitOk;
        }

        // compare
        const std::vector<qlift::Method> methods = parse_method_list(methods_text);
        if (methods.size() < 2) {
            std::cerr << "error: --methods needs at least two entries\n";
            return kExitUsage;
        }
        const qlift::ComparisonReport cmp = qlift::compare(sc, methods, tol_compare);
        std::cout << qlift::to_json(cmp);
        return cmp.pass ? kExitOk : kExitComparison;
    } catch (const qlift::ScenarioError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const qlift::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const qlift::DimensionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const qlift::StepSizeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const qlift::NumericalRangeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
