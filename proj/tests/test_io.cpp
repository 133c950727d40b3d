#include "twvort/csvio.hpp"
#include "twvort/ini.hpp"
#include "twvort/runner.hpp"
#include "twvort/version.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

using namespace twvort;
using nlohmann::json;

namespace {

std::filesystem::path temp_dir() {
    const auto dir = std::filesystem::temp_directory_path() / "twvort_io_tests";
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

const char* kBaselineIni = R"(# baseline run
[params]
beta1 = 2
beta2 = 2
beta_prime = 1
alpha = 1
e1 = 1
e2 = 1
N = 1
M = 2
omega = 1

[grid]
r_max = 20
cells = 200
grading = geometric
ratio = 1.01

[solver]
grad_tol = 1e-7

[output]
prefix = unused
)";

} // namespace

TEST_SUITE("io") {

TEST_CASE("ini parsing: sections, comments, verbatim values") {
    const IniFile ini = parse_ini("[a]\nx = 1.5 ; tail\n# comment\n[b]\ny= hello\n");
    CHECK(ini.get("a", "x") == "1.5");
    CHECK(ini.get("b", "y") == "hello");
    CHECK(ini.get_or("b", "missing", "fallback") == "fallback");
    CHECK_FALSE(ini.has("a", "y"));
}

TEST_CASE("ini parse errors carry line numbers") {
    try {
        parse_ini("[ok]\nx = 1\nbogus line\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line == 3);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_ini("x = 1\n"), ConfigError);       // key before section
    CHECK_THROWS_AS(parse_ini("[open\nx = 1\n"), ConfigError);
}

TEST_CASE("run config from ini picks up every section") {
    const RunConfig cfg = run_config_from_ini(parse_ini(kBaselineIni));
    CHECK(cfg.params.beta1 == 2.0);
    CHECK(cfg.params.m_wind == 2);
    CHECK(cfg.grid.r_max == 20.0);
    CHECK(cfg.grid.cells == 200);
    CHECK(cfg.grid.grading == Grading::geometric);
    CHECK(cfg.grid.ratio == 1.01);
    CHECK(cfg.solver.grad_tol == 1e-7);
    CHECK(cfg.solver.max_iter == 200000);
    CHECK(cfg.output_prefix == "unused");
    CHECK(cfg.params_echo.at("beta1") == "2");
    CHECK_FALSE(cfg.scan.has_value());
}

TEST_CASE("scan block requires a known parameter key") {
    const std::string good = std::string(kBaselineIni) +
                             "\n[scan]\nkey = omega\nvalues = 1.0, 1.1, 1.25\n";
    const RunConfig cfg = run_config_from_ini(parse_ini(good));
    REQUIRE(cfg.scan.has_value());
    CHECK(cfg.scan->key == "omega");
    REQUIRE(cfg.scan->values.size() == 3);
    CHECK(cfg.scan->values[2] == 1.25);

    const std::string bad =
        std::string(kBaselineIni) + "\n[scan]\nkey = gamma\nvalues = 1\n";
    CHECK_THROWS(run_config_from_ini(parse_ini(bad)));
}

TEST_CASE("profile CSV round-trips bit-exactly") {
    const ParameterSet p;
    const RadialGrid grid = build_grid(17.0, 150, Grading::geometric, 1.013);
    FieldConfiguration c = initial_profile(p, grid);
    std::mt19937 rng(6);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    for (int i = 0; i < grid.node_count(); ++i) c.b[i] = val(rng);

    const auto path = temp_dir() / "roundtrip.csv";
    write_profile_csv(path.string(), grid, c);
    const auto [grid2, c2] = read_profile_csv(path.string());

    REQUIRE(grid2.node_count() == grid.node_count());
    CHECK(grid2.grading == Grading::geometric);
    for (int i = 0; i < grid.node_count(); ++i) {
        CHECK(grid2.nodes[i] == grid.nodes[i]);
        CHECK(c2.a[i] == c.a[i]);
        CHECK(c2.b[i] == c.b[i]);
        CHECK(c2.f[i] == c.f[i]);
        CHECK(c2.g[i] == c.g[i]);
    }
}

TEST_CASE("identical writes are byte-identical") {
    const ParameterSet p;
    const RadialGrid grid = build_grid(9.0, 80, Grading::uniform);
    const FieldConfiguration c = initial_profile(p, grid);
    const auto p1 = temp_dir() / "det1.csv";
    const auto p2 = temp_dir() / "det2.csv";
    write_profile_csv(p1.string(), grid, c);
    write_profile_csv(p2.string(), grid, c);
    CHECK(slurp(p1) == slurp(p2));
}

TEST_CASE("summary schema exposes the documented keys and the tool version") {
    const json schema = summary_schema();
    CHECK(schema.contains("params"));
    CHECK(schema.contains("grid"));
    CHECK(schema["energy"].contains("total"));
    CHECK(schema["energy"].contains("alpha_term"));
    CHECK(schema["convergence"].contains("grad_inf_norm"));
    CHECK(schema["emergent"].contains("a_end"));
    CHECK(schema["emergent"].contains("b_origin"));
    CHECK(schema.contains("decay"));
    CHECK(schema.contains("potential"));
    CHECK(schema["version"] == kToolVersion);
}

TEST_CASE("solve summary round-trips energy.total bit-exactly through JSON text") {
    RunConfig cfg = run_config_from_ini(parse_ini(kBaselineIni));
    const RadialGrid grid = cfg.grid.build();
    FieldConfiguration seed = initial_profile(cfg.params, grid);
    const SolveResult res = minimize(cfg.params, grid, seed, cfg.solver.opts());
    REQUIRE(res.converged);

    const json summary = build_summary(cfg, grid, res);
    CHECK(summary["version"] == kToolVersion);
    CHECK(summary["emergent"].contains("b_origin"));
    CHECK(summary["params_echo"]["beta1"] == "2");

    const std::string text = summary.dump();
    const json parsed = json::parse(text);
    const double total = parsed["energy"]["total"].get<double>();
    CHECK(total == res.energy.total);  // bit-exact decimal round-trip
}

TEST_CASE("format_g17 round-trips doubles through text") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> val(-1e3, 1e3);
    for (int k = 0; k < 1000; ++k) {
        const double v = val(rng) * std::pow(10.0, static_cast<int>(rng() % 17) - 8);
        CHECK(std::stod(format_g17(v)) == v);
    }
}

TEST_CASE("set_param_by_key rejects fractional windings") {
    ParameterSet p;
    CHECK_THROWS(set_param_by_key(p, "N", 1.5));
    set_param_by_key(p, "M", 3.0);
    CHECK(p.m_wind == 3);
    CHECK_THROWS(set_param_by_key(p, "nonsense", 1.0));
}

} // TEST_SUITE
