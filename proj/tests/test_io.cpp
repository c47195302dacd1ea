// test_io.cpp - config parsing, result serialization, mode orchestration
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

#include "cbs3/io.hpp"

using namespace cbs3;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("cbs3_io_test_" + std::to_string(static_cast<unsigned>(::getpid())));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("mode and format names round trip") {
    for (RunMode m : {RunMode::Spectrum, RunMode::ElasticSweep, RunMode::PerturbativeCheck,
                      RunMode::OracleCheck, RunMode::Diagrams})
        CHECK(run_mode_from_string(to_string(m)) == m);
    for (OutputFormat f : {OutputFormat::Csv, OutputFormat::Json, OutputFormat::Both})
        CHECK(format_from_string(to_string(f)) == f);
    CHECK_THROWS_AS(run_mode_from_string("spectrumm"), ConfigError);
    CHECK_THROWS_AS(format_from_string("yaml"), ConfigError);
}

TEST_CASE("empty config yields the defaults") {
    RunConfig cfg = parse_config_text("{}");
    CHECK(cfg == RunConfig{});
    CHECK_FALSE(cfg.has_grid_bounds());
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("config parsing reports bad input") {
    CHECK_THROWS_AS(parse_config_text("{"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"rabbi": 1.0})"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"rabi": "strong"})"), ConfigError);
    // key name appears in the message
    try {
        parse_config_text(R"({"rabbi": 1.0})");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("rabbi") != std::string::npos);
    }
}

TEST_CASE("config validation names the offending field") {
    RunConfig cfg;
    cfg.gamma = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    cfg = RunConfig{};
    cfg.rel_tol = 1e-2;  // outside the supported quadrature range
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    cfg = RunConfig{};
    cfg.nu_points = 1;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    cfg = RunConfig{};
    cfg.nu_min = 2.0;
    cfg.nu_max = -2.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    cfg = RunConfig{};
    cfg.oracle_type = "L3";
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("emit and parse round trip") {
    RunConfig cfg;
    cfg.mode = RunMode::ElasticSweep;
    cfg.rabi = 0.4;
    cfg.detuning = -0.3;
    cfg.rel_tol = 1e-6;
    cfg.rabi_points = 7;
    cfg.format = OutputFormat::Json;
    RunConfig back = parse_config_text(emit_config(cfg));
    CHECK(back == cfg);

    // unset grid bounds stay unset through the round trip
    RunConfig plain;
    CHECK_FALSE(parse_config_text(emit_config(plain)).has_grid_bounds());
    RunConfig bounded;
    bounded.nu_min = -1.0;
    bounded.nu_max = 1.0;
    CHECK(parse_config_text(emit_config(bounded)).has_grid_bounds());
}

TEST_CASE("serialized tables are deterministic and parseable") {
    TableData t;
    t.columns = {"nu", "value"};
    t.rows = {{0.0, 1.0 / 3.0}, {-0.5, 2e-17}};
    Metadata meta = {{"version", kVersion}, {"note", "fixture"}};

    std::string csv1 = csv_text(t, meta);
    std::string csv2 = csv_text(t, meta);
    CHECK(csv1 == csv2);
    CHECK(csv1.find("# version: 1.0.0") != std::string::npos);
    CHECK(csv1.find("nu,value") != std::string::npos);
    // %.17g keeps full double precision
    CHECK(csv1.find("0.33333333333333331") != std::string::npos);

    std::string js = json_text(t, meta);
    CHECK(js == json_text(t, meta));
    auto parsed = nlohmann::json::parse(js);
    CHECK(parsed["metadata"]["version"] == "1.0.0");
    REQUIRE(parsed["columns"].size() == 2);
    CHECK(parsed["columns"][1] == "value");
    REQUIRE(parsed["data"].size() == 2);
    CHECK(parsed["data"][1][0] == doctest::Approx(-0.5));
}

TEST_CASE("diagram audit mode writes its report") {
    TempDir tmp;
    RunConfig cfg;
    cfg.mode = RunMode::Diagrams;
    cfg.out_dir = tmp.path.string();
    CHECK(run(cfg) == 0);

    auto parsed = nlohmann::json::parse(slurp(tmp.path / "diagrams.json"));
    CHECK(parsed["valid"] == true);
    CHECK(parsed["types"]["C1"]["counts-ok"] == true);
    CHECK(parsed["types"]["C1"]["raw"] == 45);
    CHECK(parsed["types"]["C1"]["allowed"] == 32);
    CHECK(parsed["types"]["C1"]["forbidden"].size() == 13);
    CHECK(parsed["types"]["C2"]["forbidden"].size() == 8);
    CHECK(parsed["types"]["L2"]["allowed"] == 68);
}

TEST_CASE("elastic sweep writes consistent tables") {
    TempDir tmp;
    RunConfig cfg;
    cfg.mode = RunMode::ElasticSweep;
    cfg.detuning = 0.5;
    cfg.rabi_min = 0.01;
    cfg.rabi_max = 0.02;
    cfg.rabi_points = 2;
    cfg.rel_tol = 1e-6;
    cfg.out_dir = tmp.path.string();
    cfg.format = OutputFormat::Both;
    REQUIRE(run(cfg) == 0);

    std::string csv = slurp(tmp.path / "elastic_sweep.csv");
    CHECK(csv.find("rabi,L1,L2,C1,C2") != std::string::npos);

    auto parsed = nlohmann::json::parse(slurp(tmp.path / "elastic_sweep.json"));
    REQUIRE(parsed["data"].size() == 2);
    double rabi0 = parsed["data"][0][0].get<double>();
    double l1 = parsed["data"][0][1].get<double>();
    CHECK(rabi0 == doctest::Approx(0.01));
    // the small-drive point must sit on the closed form
    double x = 1.0 + 0.25;  // 1 + detuning^2
    double want = 3.0 * 1e-4 / (32.0 * x * x * x) - 27.0 * 1e-8 / (32.0 * x * x * x * x);
    CHECK(l1 == doctest::Approx(want).epsilon(2e-3));
}

TEST_CASE("numerical failure surfaces as exit three") {
    TempDir tmp;
    RunConfig cfg;
    cfg.mode = RunMode::Spectrum;
    cfg.nu_min = 0.0;
    cfg.nu_max = 1.0;
    cfg.nu_points = 2;
    cfg.max_intervals = 1;  // starves the adaptive integrator
    cfg.rel_tol = 1e-8;
    cfg.out_dir = tmp.path.string();
    CHECK(run(cfg) == 3);
}
