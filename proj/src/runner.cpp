#include "twvort/runner.hpp"

#include "twvort/csvio.hpp"
#include "twvort/energy.hpp"
#include "twvort/version.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

namespace twvort {

namespace fs = std::filesystem;
using nlohmann::json;

RadialGrid GridSpec::build() const { return build_grid(r_max, cells, grading, ratio); }

MinimizeOpts SolverSpec::opts() const {
    MinimizeOpts o;
    o.method = method;
    o.grad_tol = grad_tol;
    o.max_iter = max_iter;
    o.line_search.armijo_c = armijo_c;
    o.line_search.backtrack_ratio = backtrack_ratio;
    o.safeguard_truncate = safeguard_truncate;
    return o;
}

namespace {

std::vector<double> parse_value_list(const std::string& text) {
    std::vector<double> values;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        std::istringstream cell(item);
        double v;
        if (!(cell >> v))
            throw std::runtime_error("bad scan value '" + item + "'");
        values.push_back(v);
    }
    return values;
}

void ensure_writable_prefix(const std::string& prefix) {
    const fs::path parent = fs::path(prefix).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
    const std::string probe = prefix + ".writetest";
    {
        std::ofstream out(probe);
        if (!out)
            throw std::runtime_error("output prefix not writable: " + prefix);
    }
    fs::remove(probe);
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

} // namespace

void set_param_by_key(ParameterSet& p, const std::string& key, double value) {
    const auto as_int = [&](const char* what) {
        const double rounded = std::nearbyint(value);
        if (rounded != value)
            throw std::runtime_error(std::string(what) + " must be integral, got " +
                                     std::to_string(value));
        return static_cast<int>(rounded);
    };
    if (key == "beta1") p.beta1 = value;
    else if (key == "beta2") p.beta2 = value;
    else if (key == "beta_prime") p.beta_prime = value;
    else if (key == "alpha") p.alpha = value;
    else if (key == "e1") p.e1 = value;
    else if (key == "e2") p.e2 = value;
    else if (key == "N") p.n_wind = as_int("N");
    else if (key == "M") p.m_wind = as_int("M");
    else if (key == "omega") p.omega = value;
    else
        throw std::runtime_error("unknown parameter key '" + key +
                                 "' (expected beta1, beta2, beta_prime, alpha, e1, "
                                 "e2, N, M, omega)");
}

RunConfig run_config_from_ini(const IniFile& ini) {
    RunConfig cfg;

    static const char* kParamKeys[] = {"beta1", "beta2", "beta_prime", "alpha",
                                       "e1", "e2", "N", "M", "omega"};
    if (ini.sections.count("params")) {
        for (const auto& [key, value] : ini.sections.at("params")) {
            set_param_by_key(cfg.params, key, parse_double(value, "[params] " + key));
            cfg.params_echo[key] = value;
        }
    }
    // Echo the effective values for keys the config leaves at defaults.
    for (const char* key : kParamKeys)
        if (!cfg.params_echo.count(key)) {
            ParameterSet defaults = cfg.params;
            double v = 0.0;
            if (std::string(key) == "N") v = defaults.n_wind;
            else if (std::string(key) == "M") v = defaults.m_wind;
            else {
                ParameterSet probe = defaults;
                // pull the current value back out via a lookup table
                if (std::string(key) == "beta1") v = probe.beta1;
                else if (std::string(key) == "beta2") v = probe.beta2;
                else if (std::string(key) == "beta_prime") v = probe.beta_prime;
                else if (std::string(key) == "alpha") v = probe.alpha;
                else if (std::string(key) == "e1") v = probe.e1;
                else if (std::string(key) == "e2") v = probe.e2;
                else if (std::string(key) == "omega") v = probe.omega;
            }
            cfg.params_echo[key] = format_g17(v);
        }

    cfg.grid.r_max = parse_double(ini.get_or("grid", "r_max", "30"), "[grid] r_max");
    cfg.grid.cells = static_cast<int>(parse_long(ini.get_or("grid", "cells", "3000"),
                                                 "[grid] cells"));
    const std::string grading = ini.get_or("grid", "grading", "geometric");
    if (grading == "uniform") cfg.grid.grading = Grading::uniform;
    else if (grading == "geometric") cfg.grid.grading = Grading::geometric;
    else throw std::runtime_error("unknown grading '" + grading + "'");
    cfg.grid.ratio = parse_double(ini.get_or("grid", "ratio", "1.0012"), "[grid] ratio");

    cfg.solver.method = method_from_string(
        ini.get_or("solver", "method", "nonlinear_cg"));
    cfg.solver.grad_tol =
        parse_double(ini.get_or("solver", "grad_tol", "1e-8"), "[solver] grad_tol");
    cfg.solver.max_iter =
        parse_long(ini.get_or("solver", "max_iter", "200000"), "[solver] max_iter");
    cfg.solver.armijo_c =
        parse_double(ini.get_or("solver", "armijo_c", "1e-4"), "[solver] armijo_c");
    cfg.solver.backtrack_ratio = parse_double(
        ini.get_or("solver", "backtrack_ratio", "0.5"), "[solver] backtrack_ratio");
    cfg.solver.safeguard_truncate = parse_bool(
        ini.get_or("solver", "safeguard_truncate", "false"), "[solver] safeguard_truncate");
    cfg.solver.pin_a_end =
        parse_bool(ini.get_or("solver", "pin_a_end", "false"), "[solver] pin_a_end");

    cfg.output_prefix = ini.get_or("output", "prefix", "twvort_run");

    if (ini.sections.count("scan")) {
        ScanSpec scan;
        scan.key = ini.get("scan", "key");
        scan.values = parse_value_list(ini.get("scan", "values"));
        // Reject unknown keys now, not at solve time.
        ParameterSet probe = cfg.params;
        set_param_by_key(probe, scan.key, scan.values.empty() ? 0.0 : scan.values.front());
        cfg.scan = std::move(scan);
    }
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    return run_config_from_ini(load_ini(path));
}

json params_json(const ParameterSet& p) {
    return json{{"beta1", p.beta1},   {"beta2", p.beta2},
                {"beta_prime", p.beta_prime}, {"alpha", p.alpha},
                {"e1", p.e1},         {"e2", p.e2},
                {"N", p.n_wind},      {"M", p.m_wind},
                {"omega", p.omega}};
}

json fit_entry_json(const FitEntry& e) {
    json j{{"fittable", e.fittable},
           {"window", {e.r_lo, e.r_hi}},
           {"points", e.points}};
    if (e.fittable) {
        j["value"] = e.value;
        j["r_squared"] = e.r_squared;
        j["target"] = e.target;
        j["deviation"] = e.deviation;
        j["epsilon_slack"] = e.epsilon_slack;
    } else {
        j["value"] = nullptr;
        j["note"] = e.note;
    }
    return j;
}

json decay_json(const DecayReport& rep) {
    const auto dev = [](const FitEntry& e) {
        return e.fittable ? json(e.deviation) : json(nullptr);
    };
    const auto eps = [](const FitEntry& e) {
        return e.fittable ? json(e.epsilon_slack) : json(nullptr);
    };
    return json{
        {"origin",
         {{"a", fit_entry_json(rep.origin.a)},
          {"b", fit_entry_json(rep.origin.b)},
          {"f", fit_entry_json(rep.origin.f)},
          {"g", fit_entry_json(rep.origin.g)}}},
        {"infinity",
         {{"a", fit_entry_json(rep.infinity.a)},
          {"b", fit_entry_json(rep.infinity.b)},
          {"f", fit_entry_json(rep.infinity.f)},
          {"g", fit_entry_json(rep.infinity.g)}}},
        {"targets",
         {{"a_origin", rep.targets.a_origin},
          {"b_origin", rep.targets.b_origin},
          {"f_origin", rep.targets.f_origin},
          {"g_origin", rep.targets.g_origin},
          {"a_inf", rep.targets.a_inf},
          {"b_inf", rep.targets.b_inf},
          {"f_inf",
           {{"linearized", rep.targets.f_inf_linearized},
            {"literal", rep.targets.f_inf_literal}}},
          {"g_inf", rep.targets.g_inf}}},
        {"deviations",
         {{"origin_a", dev(rep.origin.a)},
          {"origin_b", dev(rep.origin.b)},
          {"origin_f", dev(rep.origin.f)},
          {"origin_g", dev(rep.origin.g)},
          {"inf_a", dev(rep.infinity.a)},
          {"inf_b", dev(rep.infinity.b)},
          {"inf_f", dev(rep.infinity.f)},
          {"inf_g", dev(rep.infinity.g)}}},
        {"epsilon_slack",
         {{"origin_a", eps(rep.origin.a)},
          {"origin_b", eps(rep.origin.b)},
          {"origin_f", eps(rep.origin.f)},
          {"origin_g", eps(rep.origin.g)},
          {"inf_a", eps(rep.infinity.a)},
          {"inf_b", eps(rep.infinity.b)},
          {"inf_f", eps(rep.infinity.f)},
          {"inf_g", eps(rep.infinity.g)}}},
        {"f_inf_supported", rep.f_inf_supported}};
}

json potential_json(const CriticalPointReport& cp, const SignScan& scan) {
    return json{
        {"critical_point",
         {{"x0", cp.x0},
          {"y0", cp.y0},
          {"value_at_cp", cp.value_at_cp},
          {"closed_form_value", cp.closed_form_value},
          {"closed_form_matches", cp.closed_form_matches},
          {"hessian",
           {{cp.hessian[0][0], cp.hessian[0][1]},
            {cp.hessian[1][0], cp.hessian[1][1]}}}}},
        {"classification", to_string(cp.classification)},
        {"landscape_min", scan.landscape_min},
        {"landscape_argmin", {scan.argmin_x, scan.argmin_y}},
        {"nonneg_over_domain", scan.nonneg_over_domain}};
}

json residual_json(const ResidualReport& rep, bool include_arrays) {
    const auto norms = [](const ResidualNorms& n) {
        return json{{"l2_weighted", n.l2_weighted}, {"sup_interior", n.sup_interior}};
    };
    json j{{"norms",
            {{"a", norms(rep.norms_a)},
             {"b", norms(rep.norms_b)},
             {"f", norms(rep.norms_f)},
             {"g", norms(rep.norms_g)}}}};
    if (include_arrays) {
        j["res_a"] = rep.res_a;
        j["res_b"] = rep.res_b;
        j["res_f"] = rep.res_f;
        j["res_g"] = rep.res_g;
    }
    return j;
}

json summary_schema() {
    return json{
        {"version", kToolVersion},
        {"schema_version", kSummarySchemaVersion},
        {"params", "object: beta1, beta2, beta_prime, alpha, e1, e2, N, M, omega"},
        {"params_echo", "object: verbatim config strings for the same keys"},
        {"grid", "object: r_max, cells, grading, ratio"},
        {"energy",
         {{"total", "number"},
          {"terms",
           "object: gauge_a, gauge_b, grad_f, grad_g, cov_a_f, cov_a_g, twist, "
           "potential"},
          {"alpha_term", "number"}}},
        {"convergence",
         {{"iterations", "integer"},
          {"grad_inf_norm", "number"},
          {"converged", "boolean"}}},
        {"emergent", {{"a_end", "number"}, {"b_origin", "number"}}},
        {"decay",
         "object: origin/infinity fit entries per field, targets, deviations, "
         "epsilon_slack, f_inf_supported"},
        {"potential",
         "object: critical_point, classification, landscape_min, "
         "landscape_argmin, nonneg_over_domain"}};
}

json build_summary(const RunConfig& cfg, const RadialGrid& grid,
                   const SolveResult& result) {
    const DecayReport decay = analyze_decay(cfg.params, result.config, grid);
    const CriticalPointReport cp = critical_point(cfg.params);
    const double span = 2.0 * std::max({1.0, cp.x0, cp.y0});
    const SignScan scan = scan_sign(cfg.params, span, span, 256);

    return json{
        {"version", kToolVersion},
        {"schema_version", kSummarySchemaVersion},
        {"params", params_json(cfg.params)},
        {"params_echo", cfg.params_echo},
        {"grid",
         {{"r_max", grid.r_max},
          {"cells", grid.cells()},
          {"grading", to_string(grid.grading)},
          {"ratio", grid.ratio}}},
        {"energy",
         {{"total", result.energy.total},
          {"terms",
           {{"gauge_a", result.energy.terms.gauge_a},
            {"gauge_b", result.energy.terms.gauge_b},
            {"grad_f", result.energy.terms.grad_f},
            {"grad_g", result.energy.terms.grad_g},
            {"cov_a_f", result.energy.terms.cov_a_f},
            {"cov_a_g", result.energy.terms.cov_a_g},
            {"twist", result.energy.terms.twist},
            {"potential", result.energy.terms.potential}}},
          {"alpha_term", result.energy.terms.alpha_term}}},
        {"convergence",
         {{"iterations", result.iterations},
          {"grad_inf_norm", result.grad_inf_norm},
          {"converged", result.converged},
          {"diagnostic", result.diagnostic}}},
        {"emergent",
         {{"a_end", result.emergent.a_end}, {"b_origin", result.emergent.b_origin}}},
        {"decay", decay_json(decay)},
        {"potential", potential_json(cp, scan)}};
}

GradCheckResult gradient_fd_check(const ParameterSet& p, const RadialGrid& grid,
                                  const FieldConfiguration& base, int n_dofs,
                                  int n_perturbations, double fd_step,
                                  unsigned rng_seed) {
    const DofMap dof = DofMap::build(base.node_count(), base.pin_a_end);
    std::mt19937 rng(rng_seed);
    std::uniform_int_distribution<int> pick(0, dof.n_free - 1);
    std::normal_distribution<double> noise(0.0, 0.05);

    GradCheckResult out;
    for (int cfg_idx = 0; cfg_idx <= n_perturbations; ++cfg_idx) {
        FieldConfiguration c = base;
        if (cfg_idx > 0) {
            std::vector<double> x = gather_free(c, dof);
            for (double& v : x) v += noise(rng);
            set_free(c, dof, x);
        }
        const std::vector<double> grad = energy_gradient(p, grid, c, dof);

        std::vector<int> sample(n_dofs);
        for (int& s : sample) s = pick(rng);

        std::vector<double> fd(n_dofs);
        double scale = 0.0;
        FieldConfiguration work = c;
        std::vector<double> x = gather_free(c, dof);
        for (int s = 0; s < n_dofs; ++s) {
            const int k = sample[s];
            const double saved = x[k];
            x[k] = saved + fd_step;
            set_free(work, dof, x);
            const double ep = total_energy_value(p, grid, work);
            x[k] = saved - fd_step;
            set_free(work, dof, x);
            const double em = total_energy_value(p, grid, work);
            x[k] = saved;
            set_free(work, dof, x);
            fd[s] = (ep - em) / (2.0 * fd_step);
            scale = std::max(scale, std::abs(fd[s]));
        }
        scale = std::max(scale, 1e-300);
        for (int s = 0; s < n_dofs; ++s) {
            const double err = std::abs(grad[sample[s]] - fd[s]) / scale;
            out.max_rel_error = std::max(out.max_rel_error, err);
        }
        out.dofs_checked += n_dofs;
        ++out.configs_checked;
    }
    out.configs_checked = n_perturbations + 1;
    return out;
}

namespace {

int validation_exit(const ParameterSet& p, std::ostream& err) {
    const ValidationReport report = validate(p);
    if (report.valid) return kExitOk;
    err << "parameter validation failed:\n";
    for (const auto& v : report.violations)
        err << "  " << v.inequality << " violated (" << v.detail << ")\n";
    return kExitValidation;
}

struct SingleRunOutput {
    SolveResult result;
    DecayReport decay;
    bool ok = false;
};

SingleRunOutput solve_one(const RunConfig& cfg, const RadialGrid& grid,
                          const FieldConfiguration& seed, const std::string& prefix) {
    SingleRunOutput out;
    out.result = minimize(cfg.params, grid, seed, cfg.solver.opts());
    out.decay = analyze_decay(cfg.params, out.result.config, grid);
    write_profile_csv(prefix + "_profile.csv", grid, out.result.config);
    write_history_csv(prefix + "_history.csv", out.result.history);
    write_json_file(prefix + "_summary.json", build_summary(cfg, grid, out.result));
    out.ok = out.result.converged;
    return out;
}

} // namespace

int run_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const int bad = validation_exit(cfg.params, err);
    if (bad != kExitOk) return bad;
    ensure_writable_prefix(cfg.output_prefix);

    const RadialGrid grid = cfg.grid.build();
    FieldConfiguration seed = initial_profile(cfg.params, grid);
    seed.pin_a_end = cfg.solver.pin_a_end;
    seed.apply_pins(cfg.params);

    const SingleRunOutput run = solve_one(cfg, grid, seed, cfg.output_prefix);
    out << (run.result.converged ? "converged" : "NOT converged") << " after "
        << run.result.iterations << " iterations, energy " << run.result.energy.total
        << ", grad sup-norm " << run.result.grad_inf_norm << "\n"
        << "wrote " << cfg.output_prefix << "_{profile.csv,history.csv,summary.json}\n";
    if (!run.result.converged && !run.result.diagnostic.empty())
        err << "diagnostic: " << run.result.diagnostic << "\n";
    return run.result.converged ? kExitOk : kExitNoConvergence;
}

int run_scan(const RunConfig& cfg, int jobs, std::ostream& out, std::ostream& err) {
    if (!cfg.scan) {
        err << "scan mode requires a [scan] section (key, values)\n";
        return kExitConfig;
    }
    ensure_writable_prefix(cfg.output_prefix);
    const ScanSpec& scan = *cfg.scan;
    const std::size_t n = scan.values.size();

    std::vector<RunConfig> entries(n, cfg);
    bool any_invalid = false;
    for (std::size_t i = 0; i < n; ++i) {
        set_param_by_key(entries[i].params, scan.key, scan.values[i]);
        entries[i].params_echo[scan.key] = format_g17(scan.values[i]);
        if (!validate(entries[i].params).valid) any_invalid = true;
    }

    const RadialGrid grid = cfg.grid.build();
    std::vector<SingleRunOutput> results(n);
    std::vector<std::string> prefixes(n);
    for (std::size_t i = 0; i < n; ++i) {
        char tag[32];
        std::snprintf(tag, sizeof(tag), "_s%03zu", i);
        prefixes[i] = cfg.output_prefix + tag;
    }

    const auto run_entry = [&](std::size_t i) {
        const int bad = validation_exit(entries[i].params, err);
        if (bad != kExitOk) return;
        FieldConfiguration seed = initial_profile(entries[i].params, grid);
        seed.pin_a_end = entries[i].solver.pin_a_end;
        seed.apply_pins(entries[i].params);
        results[i] = solve_one(entries[i], grid, seed, prefixes[i]);
    };

    jobs = std::max(1, jobs);
    if (jobs == 1) {
        // Serial scans warm-start each entry from the previous converged
        // profile; parallel scans run independent cold starts.
        FieldConfiguration warm;
        bool have_warm = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (!validate(entries[i].params).valid) {
                validation_exit(entries[i].params, err);
                continue;
            }
            FieldConfiguration seed =
                have_warm ? warm : initial_profile(entries[i].params, grid);
            seed.pin_a_end = entries[i].solver.pin_a_end;
            seed.apply_pins(entries[i].params);
            results[i] = solve_one(entries[i], grid, seed, prefixes[i]);
            warm = results[i].result.config;
            have_warm = true;
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        const std::size_t n_workers = std::min<std::size_t>(jobs, std::max<std::size_t>(n, 1));
        for (std::size_t w = 0; w < n_workers; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= n) return;
                    run_entry(i);
                }
            });
        for (auto& t : pool) t.join();
    }

    // Aggregate, one row per value in input order.
    const std::string agg_path = cfg.output_prefix + "_scan.csv";
    std::ofstream agg(agg_path, std::ios::binary);
    agg << "index," << scan.key
        << ",converged,energy,a_end,b_origin,origin_a,origin_b,origin_f,origin_g,"
           "inf_a,inf_b,inf_f,inf_g\n";
    const auto cell = [](const FitEntry& e) {
        return e.fittable ? format_g17(e.value) : std::string("nan");
    };
    bool any_failed = false;
    for (std::size_t i = 0; i < n; ++i) {
        const SolveResult& r = results[i].result;
        if (!r.converged) any_failed = true;
        agg << i << ',' << format_g17(scan.values[i]) << ',' << (r.converged ? 1 : 0)
            << ',' << format_g17(r.energy.total) << ',' << format_g17(r.emergent.a_end)
            << ',' << format_g17(r.emergent.b_origin) << ','
            << cell(results[i].decay.origin.a) << ',' << cell(results[i].decay.origin.b)
            << ',' << cell(results[i].decay.origin.f) << ','
            << cell(results[i].decay.origin.g) << ',' << cell(results[i].decay.infinity.a)
            << ',' << cell(results[i].decay.infinity.b) << ','
            << cell(results[i].decay.infinity.f) << ','
            << cell(results[i].decay.infinity.g) << '\n';
    }
    out << "scan of " << scan.key << " over " << n << " values; aggregate in "
        << agg_path << "\n";
    if (any_invalid) return kExitValidation;
    return any_failed ? kExitNoConvergence : kExitOk;
}

int run_check_potential(const RunConfig& cfg, double x_max, double y_max,
                        int resolution, std::ostream& out, std::ostream& err) {
    const int bad = validation_exit(cfg.params, err);
    if (bad != kExitOk) return bad;
    const CriticalPointReport cp = critical_point(cfg.params);
    const SignScan scan = scan_sign(cfg.params, x_max, y_max, resolution);
    json j = potential_json(cp, scan);
    j["version"] = kToolVersion;
    j["params"] = params_json(cfg.params);
    out << j.dump(2) << '\n';
    return kExitOk;
}

int run_check_ode(const RunConfig& cfg, const std::string& profile_csv,
                  bool include_arrays, std::ostream& out, std::ostream& err) {
    const int bad = validation_exit(cfg.params, err);
    if (bad != kExitOk) return bad;
    const auto [grid, config] = read_profile_csv(profile_csv);
    const ResidualReport rep = residuals(cfg.params, grid, config);
    json j = residual_json(rep, include_arrays);
    j["version"] = kToolVersion;
    j["params"] = params_json(cfg.params);
    j["profile"] = profile_csv;
    out << j.dump(2) << '\n';
    return kExitOk;
}

int run_fit_decay(const RunConfig& cfg, const std::string& profile_csv,
                  std::ostream& out, std::ostream& err) {
    const int bad = validation_exit(cfg.params, err);
    if (bad != kExitOk) return bad;
    const auto [grid, config] = read_profile_csv(profile_csv);
    const DecayReport rep = analyze_decay(cfg.params, config, grid);
    json j = decay_json(rep);
    j["version"] = kToolVersion;
    j["params"] = params_json(cfg.params);
    j["profile"] = profile_csv;
    out << j.dump(2) << '\n';
    return kExitOk;
}

int run_grad_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const int bad = validation_exit(cfg.params, err);
    if (bad != kExitOk) return bad;
    const RadialGrid grid = cfg.grid.build();
    FieldConfiguration seed = initial_profile(cfg.params, grid);
    seed.pin_a_end = cfg.solver.pin_a_end;
    seed.apply_pins(cfg.params);
    const GradCheckResult check =
        gradient_fd_check(cfg.params, grid, seed, 50, 5, 1e-6, 0x5eed);
    out << "max relative gradient error " << check.max_rel_error << " over "
        << check.dofs_checked << " sampled DOFs in " << check.configs_checked
        << " configurations\n";
    return check.max_rel_error < 1e-6 ? kExitOk : kExitNoConvergence;
}

} // namespace twvort
