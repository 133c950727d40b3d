// twvort: twisted-vortex profiles of the two-component Ginzburg-Landau model
// by minimization of the reduced radial energy, with residual and decay-rate
// verification tooling.

#include "twvort/ini.hpp"
#include "twvort/runner.hpp"
#include "twvort/version.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct CommonArgs {
    std::string config_path;
    std::optional<std::string> out_prefix;
    std::optional<std::string> method;
    std::optional<double> grad_tol;
    std::optional<long> max_iter;
    bool pin_a_end = false;
    bool safeguard_truncate = false;
};

twvort::RunConfig load_with_overrides(const CommonArgs& args, const CLI::App& cmd) {
    twvort::RunConfig cfg = twvort::load_run_config(args.config_path);
    if (args.out_prefix) cfg.output_prefix = *args.out_prefix;
    if (args.method) cfg.solver.method = twvort::method_from_string(*args.method);
    if (args.grad_tol) cfg.solver.grad_tol = *args.grad_tol;
    if (args.max_iter) cfg.solver.max_iter = *args.max_iter;
    if (cmd.count("--pin-a-end")) cfg.solver.pin_a_end = args.pin_a_end;
    if (cmd.count("--safeguard-truncate"))
        cfg.solver.safeguard_truncate = args.safeguard_truncate;
    return cfg;
}

int effective_jobs(int flag_jobs) {
    if (const char* env = std::getenv("TWVORT_JOBS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) return static_cast<int>(v);
        std::cerr << "ignoring invalid TWVORT_JOBS='" << env << "'\n";
    }
    return flag_jobs;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"twisted-vortex solver for the two-component Ginzburg-Landau model"};
    app.set_version_flag("--version", twvort::kToolVersion);
    app.require_subcommand(1);

    CommonArgs args;
    int jobs = 1;
    std::string profile_path;
    double x_max = 2.0, y_max = 2.0;
    int resolution = 512;
    bool full_arrays = false;
    bool print_schema = false;

    const auto add_common = [&](CLI::App* cmd, bool solver_flags) {
        cmd->add_option("-c,--config", args.config_path, "INI run configuration")
            ->required();
        if (solver_flags) {
            cmd->add_option("--out-prefix", args.out_prefix, "output path prefix");
            cmd->add_option("--method", args.method,
                            "nonlinear_cg or gradient_descent");
            cmd->add_option("--grad-tol", args.grad_tol, "gradient sup-norm target");
            cmd->add_option("--max-iter", args.max_iter, "iteration cap");
            cmd->add_flag("--pin-a-end", args.pin_a_end, "pin a(r_max) = 1/e1");
            cmd->add_flag("--safeguard-truncate", args.safeguard_truncate,
                          "clamp a and f into their bounds after each step");
        }
    };

    CLI::App* solve = app.add_subcommand("solve", "minimize and write profile/summary");
    add_common(solve, true);
    solve->add_flag("--schema", print_schema, "print the summary JSON schema and exit");

    CLI::App* scan = app.add_subcommand("scan", "solve across a parameter sweep");
    add_common(scan, true);
    scan->add_option("-j,--jobs", jobs, "parallel workers (default 1, deterministic)");

    CLI::App* checkpot = app.add_subcommand("check-potential",
                                            "critical point and sign scan of V");
    add_common(checkpot, false);
    checkpot->add_option("--x-max", x_max, "scan domain bound in x = f^2");
    checkpot->add_option("--y-max", y_max, "scan domain bound in y = g^2");
    checkpot->add_option("--resolution", resolution, "lattice intervals per axis");

    CLI::App* checkode = app.add_subcommand("check-ode",
                                            "strong-form residuals of a profile CSV");
    add_common(checkode, false);
    checkode->add_option("--profile", profile_path, "profile CSV path")->required();
    checkode->add_flag("--full", full_arrays, "include residual arrays in the JSON");

    CLI::App* fitdecay = app.add_subcommand("fit-decay",
                                            "origin/far-field decay fits of a profile CSV");
    add_common(fitdecay, false);
    fitdecay->add_option("--profile", profile_path, "profile CSV path")->required();

    CLI::App* gradcheck = app.add_subcommand("grad-check",
                                             "finite-difference check of the gradient");
    add_common(gradcheck, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed() && print_schema) {
            std::cout << twvort::summary_schema().dump(2) << '\n';
            return twvort::kExitOk;
        }
        if (solve->parsed())
            return twvort::run_solve(load_with_overrides(args, *solve), std::cout,
                                     std::cerr);
        if (scan->parsed())
            return twvort::run_scan(load_with_overrides(args, *scan),
                                    effective_jobs(jobs), std::cout, std::cerr);
        if (checkpot->parsed())
            return twvort::run_check_potential(load_with_overrides(args, *checkpot),
                                               x_max, y_max, resolution, std::cout,
                                               std::cerr);
        if (checkode->parsed())
            return twvort::run_check_ode(load_with_overrides(args, *checkode),
                                         profile_path, full_arrays, std::cout,
                                         std::cerr);
        if (fitdecay->parsed())
            return twvort::run_fit_decay(load_with_overrides(args, *fitdecay),
                                         profile_path, std::cout, std::cerr);
        if (gradcheck->parsed())
            return twvort::run_grad_check(load_with_overrides(args, *gradcheck),
                                          std::cout, std::cerr);
    } catch (const twvort::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return twvort::kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        const std::string what = e.what();
        return what.find("invalid parameters") != std::string::npos
                   ? twvort::kExitValidation
                   : twvort::kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return twvort::kExitConfig;
    }
    return twvort::kExitConfig;
}
