#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "telecert/json_io.hpp"

namespace {

constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitSolver = 4;

telecert::SdpOptions solver_options() {
    telecert::SdpOptions opts;
    if (const char* env = std::getenv("TELECERT_SOLVER_TOL")) {
        char* end = nullptr;
        const double tol = std::strtod(env, &end);
        if (end != env && tol > 0.0) opts.gap_tol = tol;
    }
    return opts;
}

telecert::SweepGrid parse_grid(const std::string& text) {
    telecert::SweepGrid grid;
    const auto a = text.find(':');
    const auto b = text.find(':', a == std::string::npos ? a : a + 1);
    if (a == std::string::npos || b == std::string::npos)
        throw std::invalid_argument("grid must be start:stop:step");
    try {
        grid.start = std::stod(text.substr(0, a));
        grid.stop = std::stod(text.substr(a + 1, b - a - 1));
        grid.step = std::stod(text.substr(b + 1));
    } catch (const std::exception&) {
        throw std::invalid_argument("grid must be start:stop:step");
    }
    return grid;
}

telecert::ComplexMatrix load_validated_process(const std::string& path) {
    const telecert::ComplexMatrix chi = telecert::load_matrix(path);
    telecert::validate_process(chi, 1e-6, 1e-6);
    return chi;
}

int run_bound(bool as_json) {
    telecert::Certifier certifier(solver_options());
    const auto& t = certifier.thresholds();
    if (as_json) {
        std::cout << telecert::bound_to_json(t) << '\n';
        return 0;
    }
    // Six significant digits on the human-readable report.
    char line[80];
    std::snprintf(line, sizeof(line), "F_CT = %.6g  F_avg = %.6g\n", t.f_ct, t.f_avg);
    std::cout << line;
    return 0;
}

int run_certify(const std::string& input) {
    const telecert::ComplexMatrix chi = load_validated_process(input);
    telecert::Certifier certifier(solver_options());
    std::cout << telecert::report_to_json(certifier.certify(chi)) << '\n';
    return 0;
}

int run_sweep(const std::string& grid_text, std::optional<long long> shots,
              std::uint64_t seed, const std::string& out_path) {
    const telecert::SweepGrid grid = parse_grid(grid_text);
    telecert::Certifier certifier(solver_options());
    std::optional<telecert::ShotSpec> shot_spec;
    if (shots) shot_spec = telecert::ShotSpec{*shots, seed};
    const auto rows = certifier.werner_sweep(grid, shot_spec);
    std::ofstream out(out_path);
    if (!out) throw telecert::JsonError("cannot write " + out_path);
    out << telecert::sweep_to_csv(rows);
    std::cerr << "wrote " << rows.size() << " rows to " << out_path << '\n';
    return 0;
}

int run_classify(const std::string& input) {
    std::ifstream in(input);
    if (!in) throw telecert::JsonError("cannot open " + input);
    std::ostringstream os;
    os << in.rdbuf();
    const auto entries = telecert::experiments_from_json(os.str());
    telecert::Certifier certifier(solver_options());
    const auto classified = telecert::classify(entries, certifier.thresholds());

    size_t width = 10;
    for (const auto& c : classified) width = std::max(width, c.name.size());
    std::cout << std::left << std::setw(static_cast<int>(width) + 2) << "experiment"
              << std::setw(18) << "process fidelity" << "GQT\n";
    for (const auto& c : classified)
        std::cout << std::left << std::setw(static_cast<int>(width) + 2) << c.name
                  << std::setw(18) << telecert::format_number(c.f_process)
                  << (c.gqt ? "yes" : "no") << '\n';
    return 0;
}

int run_simulate(const std::string& resource_path, std::optional<long long> shots,
                 std::uint64_t seed, const std::string& out_path) {
    const telecert::ComplexMatrix raw = telecert::load_matrix(resource_path);
    telecert::ComplexMatrix resource = raw.hermitized();
    if (raw.rows() != 4 || raw.cols() != 4 || raw.hermiticity_error() > 1e-6 ||
        std::abs(raw.trace().real() - 1.0) > 1e-6)
        throw std::invalid_argument("resource state must be 4x4 Hermitian with unit trace");
    resource = resource * telecert::Complex(1.0 / resource.trace().real());

    telecert::ProcessMatrix chi = telecert::resource_to_process(resource);
    if (shots) chi = telecert::simulate_process_tomography(chi, *shots, seed).chi;
    telecert::save_matrix(out_path, chi);
    std::cerr << "wrote " << out_path << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"certification toolkit for genuine quantum teleportation"};
    app.require_subcommand(1);

    auto* bound = app.add_subcommand("bound", "print the classical-teleportation bound");
    bool bound_json = false;
    bound->add_flag("--json", bound_json, "machine-readable output");

    auto* certify = app.add_subcommand("certify", "certify a process matrix file");
    std::string certify_input;
    certify->add_option("--input", certify_input, "process matrix JSON")->required();

    auto* sweep = app.add_subcommand("sweep", "Werner noise sweep to CSV");
    std::string family = "werner", grid_text = "0:1:0.01", sweep_out;
    std::optional<long long> sweep_shots;
    std::uint64_t sweep_seed = 0;
    sweep->add_option("--family", family, "state family (werner)");
    sweep->add_option("--grid", grid_text, "start:stop:step (default 0:1:0.01)");
    sweep->add_option("--shots", sweep_shots, "simulated tomography shots per setting");
    sweep->add_option("--seed", sweep_seed, "master RNG seed");
    sweep->add_option("--out", sweep_out, "output CSV path")->required();

    auto* classify_cmd = app.add_subcommand("classify", "classify reported experiment fidelities");
    std::string classify_input;
    classify_cmd->add_option("--input", classify_input, "experiments JSON")->required();

    auto* simulate = app.add_subcommand("simulate", "teleportation process from a resource state");
    std::string resource_path, simulate_out;
    std::optional<long long> simulate_shots;
    std::uint64_t simulate_seed = 0;
    simulate->add_option("--resource", resource_path, "two-qubit state JSON")->required();
    simulate->add_option("--shots", simulate_shots, "simulated tomography shots per setting");
    simulate->add_option("--seed", simulate_seed, "master RNG seed");
    simulate->add_option("--out", simulate_out, "output process JSON path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*bound) return run_bound(bound_json);
        if (*certify) return run_certify(certify_input);
        if (*sweep) {
            if (family != "werner") {
                std::cerr << "unknown family: " << family << '\n';
                return kExitParse;
            }
            return run_sweep(grid_text, sweep_shots, sweep_seed, sweep_out);
        }
        if (*classify_cmd) return run_classify(classify_input);
        if (*simulate) return run_simulate(resource_path, simulate_shots, simulate_seed,
                                           simulate_out);
    } catch (const telecert::JsonError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const telecert::SolverFailure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitSolver;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        // Grid and kind-tag problems are parse errors; matrix-content
        // problems are validation errors.
        const std::string what = e.what();
        if (what.find("grid") != std::string::npos || what.find("kind") != std::string::npos)
            return kExitParse;
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitSolver;
    }
    return 0;
}
