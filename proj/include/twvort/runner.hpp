#pragma once

#include "twvort/asymptotics.hpp"
#include "twvort/ini.hpp"
#include "twvort/mesh.hpp"
#include "twvort/minimizer.hpp"
#include "twvort/odecheck.hpp"
#include "twvort/params.hpp"
#include "twvort/potential.hpp"

#include <json.hpp>

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace twvort {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;        // malformed config / I/O problem
inline constexpr int kExitValidation = 2;    // invalid parameters
inline constexpr int kExitNoConvergence = 3; // solver or check failed

struct GridSpec {
    double r_max = 30.0;
    int cells = 3000;
    Grading grading = Grading::geometric;
    double ratio = 1.0012;  // first cell ~1e-3 for the default 3000-cell grid

    RadialGrid build() const;
};

struct SolverSpec {
    Method method = Method::nonlinear_cg;
    double grad_tol = 1e-8;
    long max_iter = 200000;
    double armijo_c = 1e-4;
    double backtrack_ratio = 0.5;
    bool safeguard_truncate = false;
    bool pin_a_end = false;

    MinimizeOpts opts() const;
};

struct ScanSpec {
    std::string key;  // a ParameterSet field name
    std::vector<double> values;
};

// Parsed run description: [params], [grid], [solver], [output], [scan]
// sections of the INI config plus the verbatim parameter strings for echoing
// into summaries.
struct RunConfig {
    ParameterSet params;
    std::map<std::string, std::string> params_echo;
    GridSpec grid;
    SolverSpec solver;
    std::string output_prefix;
    std::optional<ScanSpec> scan;
};

RunConfig run_config_from_ini(const IniFile& ini);
RunConfig load_run_config(const std::string& path);

// Sets a parameter field by config-key name (beta1, beta2, beta_prime, alpha,
// e1, e2, N, M, omega). Integer fields require integral values.
void set_param_by_key(ParameterSet& p, const std::string& key, double value);

// Documented stable layout of the solve summary; leaf values name the types.
nlohmann::json summary_schema();

nlohmann::json fit_entry_json(const FitEntry& entry);
nlohmann::json decay_json(const DecayReport& report);
nlohmann::json potential_json(const CriticalPointReport& cp, const SignScan& scan);
nlohmann::json residual_json(const ResidualReport& report, bool include_arrays);
nlohmann::json params_json(const ParameterSet& p);

// Full solve summary (energy, convergence, emergent limits, decay fits,
// potential analysis), ready to serialize.
nlohmann::json build_summary(const RunConfig& cfg, const RadialGrid& grid,
                             const SolveResult& result);

// Finite-difference check of the analytic gradient. Per-DOF error is
// normalized by the largest sampled central-difference entry, so dead
// directions do not divide by noise.
struct GradCheckResult {
    double max_rel_error = 0.0;
    int dofs_checked = 0;
    int configs_checked = 0;
};

GradCheckResult gradient_fd_check(const ParameterSet& p, const RadialGrid& grid,
                                  const FieldConfiguration& base, int n_dofs,
                                  int n_perturbations, double fd_step,
                                  unsigned rng_seed);

// Subcommand drivers; return process exit codes.
int run_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_scan(const RunConfig& cfg, int jobs, std::ostream& out, std::ostream& err);
int run_check_potential(const RunConfig& cfg, double x_max, double y_max,
                        int resolution, std::ostream& out, std::ostream& err);
int run_check_ode(const RunConfig& cfg, const std::string& profile_csv,
                  bool include_arrays, std::ostream& out, std::ostream& err);
int run_fit_decay(const RunConfig& cfg, const std::string& profile_csv,
                  std::ostream& out, std::ostream& err);
int run_grad_check(const RunConfig& cfg, std::ostream& out, std::ostream& err);

} // namespace twvort
