#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>

#include "obslab/io/config.hpp"
#include "obslab/io/expr.hpp"
#include "obslab/io/field_io.hpp"
#include "obslab/io/reports.hpp"

using namespace obslab;
using nlohmann::json;

namespace {

std::string tmp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("expression language") {
    const Vec x(2, 0.5, -0.25);
    CHECK(parse_expression("1 + 2*3")(x) == doctest::Approx(7.0));
    CHECK(parse_expression("x1 - x2")(x) == doctest::Approx(0.75));
    CHECK(parse_expression("r^2")(x) == doctest::Approx(0.3125));
    CHECK(parse_expression("-x1^2")(x) == doctest::Approx(-0.25));
    CHECK(parse_expression("2^3^2")(x) == doctest::Approx(512.0));  // right assoc
    CHECK(parse_expression("abs(x2)")(x) == doctest::Approx(0.25));
    CHECK(parse_expression("sqrt(x1)")(x) == doctest::Approx(std::sqrt(0.5)));
    CHECK(parse_expression("max(x1, x2)")(x) == doctest::Approx(0.5));
    CHECK(parse_expression("min(1, x1*4)")(x) == doctest::Approx(1.0));
    CHECK(parse_expression("step(x1)")(x) == 1.0);
    CHECK(parse_expression("step(x2)")(x) == 0.0);
    CHECK(parse_expression("pow(2, 10)")(x) == doctest::Approx(1024.0));
    CHECK(parse_expression("pospow(x2, 1.5)")(x) == 0.0);
    CHECK(parse_expression("pospow(x1 - 0.25, 1.5)")(x) ==
          doctest::Approx(std::pow(0.25, 1.5)));
    CHECK(parse_expression("(1 + x1) * (1 - x1)")(x) == doctest::Approx(0.75));

    CHECK_THROWS_AS(parse_expression("x4"), std::invalid_argument);
    CHECK_THROWS_AS(parse_expression("1 +"), std::invalid_argument);
    CHECK_THROWS_AS(parse_expression("foo(1)"), std::invalid_argument);
    CHECK_THROWS_AS(parse_expression("(1 + 2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_expression(""), std::invalid_argument);
}

TEST_CASE("field round trip is bit exact") {
    auto dom = std::make_shared<GridDomain>(build_domain(2, 1.0 / 16.0, 1.0));
    GridField f = sample([](const Vec& x) { return std::sin(7.0 * x[0]) + x[1]; }, dom);
    const std::string path = tmp_path("obslab_roundtrip.bin");
    write_field(path, f, 1.5);
    const LoadedField back = read_field(path);
    CHECK(back.gamma == 1.5);
    CHECK(back.field.domain().same_layout(*dom));
    for (int64_t lin = 0; lin < dom->box_size(); ++lin)
        if (dom->is_stored(lin)) CHECK(back.field[lin] == f[lin]);
    std::filesystem::remove(path);
}

TEST_CASE("malformed field files are rejected") {
    const std::string path = tmp_path("obslab_truncated.bin");
    {
        auto dom = std::make_shared<GridDomain>(build_domain(1, 0.25, 1.0));
        GridField f(dom, 1.0);
        write_field(path, f, 0.0);
    }
    // truncate the payload
    std::filesystem::resize_file(path, std::filesystem::file_size(path) - 8);
    CHECK_THROWS_AS(read_field(path), std::invalid_argument);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(read_field(tmp_path("obslab_missing.bin")), std::invalid_argument);
}

TEST_CASE("csv and manifest") {
    const std::string csv = tmp_path("obslab_test.csv");
    write_csv(csv, {"a", "b"}, {{1.0, 2.0}, {0.5, -0.25}});
    std::ifstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "a,b");
    std::getline(in, line);
    CHECK(line == "1,2");
    CHECK_THROWS_AS(write_csv(csv, {"a", "b"}, {{1.0}}), std::invalid_argument);

    // fnv1a reference vectors
    CHECK(fnv1a("", 0) == 0xcbf29ce484222325ULL);
    CHECK(fnv1a("a", 1) == 0xaf63dc4c8601ec8cULL);

    const std::string man = tmp_path("obslab_manifest.json");
    write_manifest(man, json{{"k", 1}}, {csv}, {{"solve", 1.25}});
    std::ifstream mi(man);
    json doc = json::parse(mi);
    CHECK(doc["files"].size() == 1);
    CHECK(doc["files"][0]["fnv1a"] == checksum_file(csv));
    CHECK(doc["timings"][0]["stage"] == "solve");
    std::filesystem::remove(csv);
    std::filesystem::remove(man);
}

TEST_CASE("config parsing with defaults") {
    const json j = {
        {"problem",
         {{"gamma", 1.0},
          {"operator", {{"kind", "trace"}}},
          {"obstacle", "0.5 - r^2"},
          {"source", 1.0},
          {"boundary", 0.3},
          {"alpha", 1.0}}},
        {"grid", {{"dim", 2}, {"h", 0.0625}, {"radius", 1.0}, {"levels", 2}}},
    };
    const ExperimentConfig cfg = parse_config(j);
    CHECK(cfg.problem.gamma == 1.0);
    CHECK(cfg.problem.op->kind() == OperatorKind::Trace);
    CHECK(cfg.problem.obstacle(Vec(2, 0.0, 0.0)) == doctest::Approx(0.5));
    CHECK(cfg.problem.source(Vec(2, 0.3, 0.3)) == doctest::Approx(1.0));
    CHECK(cfg.grid.levels == 2);
    CHECK(cfg.solver.dt_safety == doctest::Approx(0.45));  // default
    CHECK(cfg.output_dir == "out");
    CHECK(cfg.measure.rho == doctest::Approx(0.5));
}

TEST_CASE("config rejects bad documents") {
    json j = {
        {"problem",
         {{"gamma", 1.0},
          {"operator", {{"kind", "trace"}}},
          {"obstacle", "0"},
          {"source", 1.0},
          {"boundary", 1.0},
          {"alpha", 1.0}}},
        {"grid", {{"dim", 2}, {"h", 0.0625}, {"radius", 1.0}}},
    };
    CHECK_NOTHROW(parse_config(j));

    json bad = j;
    bad["problem"]["gamma"] = -0.5;
    CHECK_THROWS_AS(parse_config(bad), std::invalid_argument);
    bad = j;
    bad["problem"]["operator"]["kind"] = "biharmonic";
    CHECK_THROWS_AS(parse_config(bad), std::invalid_argument);
    bad = j;
    bad["grid"]["dim"] = 5;
    CHECK_THROWS_AS(parse_config(bad), std::invalid_argument);
    bad = j;
    bad["solver"] = {{"backend", "quantum"}};
    CHECK_THROWS_AS(parse_config(bad), std::invalid_argument);
    bad = j;
    bad["grid"]["levels"] = 0;
    CHECK_THROWS_AS(parse_config(bad), std::invalid_argument);
}

TEST_CASE("operator descriptors") {
    CHECK(parse_operator({{"kind", "pucci_minus"}, {"lambda", 0.5}, {"Lambda", 2.0}})
              ->kind() == OperatorKind::PucciMinus);
    CHECK(parse_operator({{"kind", "p_laplacian"}, {"p", 3.0}})->needs_gradient());
    // tables are flat row-major arrays of n^2 entries
    const auto bel = parse_operator(
        {{"kind", "bellman"},
         {"tables", {{1.0, 0.0, 0.0, 1.0}, {0.5, 0.0, 0.0, 1.5}}}});
    CHECK(bel->kind() == OperatorKind::Bellman);
    // asymmetric table is rejected
    CHECK_THROWS_AS(
        parse_operator({{"kind", "bellman"}, {"tables", {{1.0, 0.3, 0.1, 1.0}}}}),
        std::invalid_argument);
}

TEST_CASE("catalog scalar functions") {
    const ScalarFn v = parse_scalar_fn(
        {{"catalog", "radial_v"}, {"gamma", 1.0}, {"r", 0.5}, {"dim", 2}});
    CHECK(v(Vec(2, 0.8, 0.0)) == doctest::Approx(std::pow(0.3, 1.5)));
    const ScalarFn c = parse_scalar_fn(2.5);
    CHECK(c(Vec(2, 0.1, 0.2)) == 2.5);
    CHECK_THROWS_AS(parse_scalar_fn({{"catalog", "unknown"}}), std::invalid_argument);
}
