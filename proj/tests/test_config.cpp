#include <doctest.h>

#include <clocale>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ccs/commands.hpp"
#include "ccs/numeric_io.hpp"

using namespace ccs;
namespace fs = std::filesystem;

namespace {

const char* kMinimalSolveConfig =
    "# minimal interval run\n"
    "domain = interval\n"
    "a = 0\n"
    "b = 1\n"
    "n = 201\n"
    "chi = 1\n"
    "vstar = 1\n"
    "mass = 0.7\n";

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const char* name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("config parsing: minimal solve config and comments") {
    const RunConfig cfg = parse_config_text(kMinimalSolveConfig);
    CHECK(cfg.geometry.kind == GeometryKind::interval);
    CHECK(cfg.n == 201);
    CHECK(cfg.chi == 1.0);
    CHECK(cfg.vstar == 1.0);
    CHECK(cfg.mass_target == 0.7);
    CHECK(!cfg.alpha);
    cfg.validate_solve();
}

TEST_CASE("config parsing: rejections") {
    CHECK_THROWS_AS(parse_config_text("domain = interval\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("domain = pyramid\na=0\nb=1\nn=5\nchi=1\nvstar=1\n"),
                    ConfigError);
    CHECK_THROWS_AS(
        parse_config_text("domain=interval\na=0\nb=1\nn=5\nchi=1\nvstar=1\nbogus=3\n"),
        ConfigError);
    CHECK_THROWS_AS(
        parse_config_text("domain=interval\na=0\nb=1\nn=5\nchi=1\nvstar=1\nn=7\n"),
        ConfigError);
    CHECK_THROWS_AS(
        parse_config_text("domain=interval\na=0\nb=1\nn=five\nchi=1\nvstar=1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("domain=interval\na=0\nb=1\nn=5\nchi=-1\nvstar=1\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config_text("domain=radial\nd=2\nR=1\nn=5\nchi=1\nvstar_left=1\n"),
                    ConfigError);

    // both mass and alpha is an ambiguous parameterization
    const RunConfig both = parse_config_text(
        "domain=interval\na=0\nb=1\nn=5\nchi=1\nvstar=1\nmass=1\nalpha=1\n");
    CHECK_THROWS_AS(both.validate_solve(), ConfigError);
    const RunConfig neither =
        parse_config_text("domain=interval\na=0\nb=1\nn=5\nchi=1\nvstar=1\n");
    CHECK_THROWS_AS(neither.validate_solve(), ConfigError);
}

TEST_CASE("alpha_list parsing: plain, logspace, mixed") {
    const auto plain = parse_alpha_list("0,0.5,1");
    CHECK(plain == std::vector<double>{0.0, 0.5, 1.0});

    const auto log = parse_alpha_list("logspace(1,100,3)");
    REQUIRE(log.size() == 3);
    CHECK(log[0] == doctest::Approx(1.0));
    CHECK(log[1] == doctest::Approx(10.0));
    CHECK(log[2] == doctest::Approx(100.0));

    const auto mixed = parse_alpha_list("0,logspace(1,10,2)");
    REQUIRE(mixed.size() == 3);
    CHECK(mixed[0] == 0.0);
    CHECK(mixed[1] == doctest::Approx(1.0));
    CHECK(mixed[2] == doctest::Approx(10.0));

    CHECK_THROWS_AS(parse_alpha_list("logspace(1,10"), ConfigError);
    CHECK_THROWS_AS(parse_alpha_list("logspace(10,1,5)"), ConfigError);
}

TEST_CASE("format_double: 17-digit round trip, locale independence") {
    for (double x : {0.1, 1.0 / 3.0, 0.7, 1e-300, 1e300, -2.5e-8, 0.0, 123456789.123456}) {
        const std::string s = format_double(x);
        CHECK(std::strtod(s.c_str(), nullptr) == x);
        CHECK(s.find(',') == std::string::npos);
    }
    // decimal point stays '.' regardless of the global locale, if one exists
    if (std::setlocale(LC_NUMERIC, "de_DE.UTF-8") != nullptr) {
        CHECK(format_double(0.5) == "0.5");
        std::setlocale(LC_NUMERIC, "C");
    }
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("run_solve: fields.csv shape and summary round trip") {
    const fs::path dir = fresh_dir("ccsteady_test_solve");
    RunConfig cfg = parse_config_text(kMinimalSolveConfig);
    cfg.out_dir = dir.string();
    std::ostringstream info;
    run_solve(cfg, info);

    const CsvTable fields = read_csv((dir / "fields.csv").string());
    REQUIRE(fields.header == std::vector<std::string>{"x", "u", "v"});
    REQUIRE(fields.columns[0].size() == 201);

    double m = 0.0; // trapezoid of the u column as an external reader would
    for (size_t i = 0; i + 1 < fields.columns[0].size(); ++i) {
        const double dx = fields.columns[0][i + 1] - fields.columns[0][i];
        m += 0.5 * dx * (fields.columns[1][i] + fields.columns[1][i + 1]);
    }
    CHECK(std::abs(m - 0.7) <= 1e-8);

    const std::string summary = slurp(dir / "summary.txt");
    const size_t pos = summary.find("achieved_mass: ");
    REQUIRE(pos != std::string::npos);
    const double achieved = std::strtod(summary.c_str() + pos + 15, nullptr);
    CHECK(std::abs(achieved - 0.7) <= 1e-8);
}

TEST_CASE("run_solve with alpha = 0: zero density, harmonic signal") {
    const fs::path dir = fresh_dir("ccsteady_test_solve0");
    RunConfig cfg = parse_config_text(
        "domain=interval\na=0\nb=1\nn=11\nchi=1\nvstar=2\nalpha=0\n");
    cfg.out_dir = dir.string();
    std::ostringstream info;
    run_solve(cfg, info);
    const CsvTable fields = read_csv((dir / "fields.csv").string());
    for (double u : fields.columns[1]) CHECK(u == 0.0);
    for (double v : fields.columns[2]) CHECK(v == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("identical configs produce byte-identical outputs") {
    const fs::path d1 = fresh_dir("ccsteady_test_det1");
    const fs::path d2 = fresh_dir("ccsteady_test_det2");
    RunConfig cfg = parse_config_text(kMinimalSolveConfig);
    std::ostringstream sink;
    cfg.out_dir = d1.string();
    run_solve(cfg, sink);
    cfg.out_dir = d2.string();
    run_solve(cfg, sink);
    CHECK(slurp(d1 / "fields.csv") == slurp(d2 / "fields.csv"));
    CHECK(slurp(d1 / "summary.txt") == slurp(d2 / "summary.txt"));
}

TEST_CASE("run_sweep: header, first row, monotone mass, sector chain") {
    const fs::path dir = fresh_dir("ccsteady_test_sweep");
    RunConfig cfg = parse_config_text(
        "domain=radial\nd=2\nR=1\nn=101\nchi=1\nvstar=1\n"
        "alpha_list = 0,logspace(1,100,3)\n");
    cfg.out_dir = dir.string();
    std::ostringstream info;
    run_sweep(cfg, info);

    const std::string text = slurp(dir / "sweep.csv");
    CHECK(text.rfind("alpha,m,m_prime,m_lower,sector_bound\n", 0) == 0);
    CHECK(text.find("\n0,0,") != std::string::npos); // alpha = 0 row has m = 0

    const CsvTable t = read_csv((dir / "sweep.csv").string());
    const auto& m = t.columns[1];
    const auto& ml = t.columns[3];
    const auto& sb = t.columns[4];
    for (size_t i = 1; i < m.size(); ++i) CHECK(m[i] > m[i - 1]);
    for (size_t i = 0; i < m.size(); ++i) {
        CHECK(m[i] >= ml[i] - 1e-9);
        CHECK(ml[i] >= sb[i] - 1e-8);
    }
}

TEST_CASE("run_sweep on an interval leaves the sector column empty") {
    const fs::path dir = fresh_dir("ccsteady_test_sweep1d");
    RunConfig cfg = parse_config_text(
        "domain=interval\na=0\nb=1\nn=51\nchi=1\nvstar=1\nalpha_list=0,1\n");
    cfg.out_dir = dir.string();
    std::ostringstream info;
    run_sweep(cfg, info);
    const std::string text = slurp(dir / "sweep.csv");
    std::istringstream lines(text);
    std::string line;
    std::getline(lines, line); // header
    while (std::getline(lines, line)) CHECK(line.back() == ',');

    // the reader maps the empty column to NaN
    const CsvTable t = read_csv((dir / "sweep.csv").string());
    for (double sb : t.columns[4]) CHECK(std::isnan(sb));
    for (double m : t.columns[1]) CHECK(std::isfinite(m));
}

TEST_CASE("run_validate: equilibrium persistence and conserved mass column") {
    const fs::path dir = fresh_dir("ccsteady_test_validate");
    RunConfig cfg = parse_config_text(
        "domain=interval\na=0\nb=1\nn=101\nchi=1\nvstar=1\nmass=0.7\n"
        "validate_init = steady\ndt = 1e-3\nT = 0.3\nrecord_stride = 50\n");
    cfg.out_dir = dir.string();
    std::ostringstream info;
    run_validate(cfg, info);

    const CsvTable t = read_csv((dir / "timeseries.csv").string());
    REQUIRE(t.header == std::vector<std::string>{"t", "dist_u", "dist_v", "mass_u"});
    CHECK(t.columns[0].back() >= 0.3 - 1e-9);
    CHECK(t.columns[1].back() <= 1e-6);
    for (double mu : t.columns[3])
        CHECK(std::abs(mu - t.columns[3].front()) <= 1e-10 * t.columns[3].front());
}

TEST_CASE("run_validate accepts a previously written fields file") {
    const fs::path dir = fresh_dir("ccsteady_test_validate_in");
    RunConfig solve_cfg = parse_config_text(kMinimalSolveConfig);
    solve_cfg.n = 101;
    solve_cfg.out_dir = dir.string();
    std::ostringstream sink;
    run_solve(solve_cfg, sink);

    RunConfig cfg = parse_config_text(
        "domain=interval\na=0\nb=1\nn=101\nchi=1\nvstar=1\n"
        "validate_init = steady\ndt = 1e-3\nT = 0.05\n");
    cfg.fields_in = (dir / "fields.csv").string();
    cfg.out_dir = (dir / "out").string();
    run_validate(cfg, sink);
    const CsvTable t = read_csv((dir / "out" / "timeseries.csv").string());
    CHECK(t.columns[1].back() <= 1e-6);
}

TEST_CASE("run_sweep records per-row failures and keeps going") {
    const fs::path dir = fresh_dir("ccsteady_test_sweep_fail");
    RunConfig cfg = parse_config_text(
        "domain=interval\na=0\nb=1\nn=51\nchi=1\nvstar=1\nalpha_list=1,2\n"
        "residual_tol=1e-30\n"); // below the evaluation floor: every solve fails
    cfg.out_dir = dir.string();
    std::ostringstream info;
    run_sweep(cfg, info);
    const std::string text = slurp(dir / "sweep.csv");
    CHECK(text.find("1,failed:nonconvergence,") != std::string::npos);
    CHECK(text.find("2,failed:nonconvergence,") != std::string::npos);
}
