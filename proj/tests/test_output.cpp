// test_output.cpp — number formatting and CSV/JSON writers
#include "wqed/errors.hpp"
#include "wqed/output.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>

using namespace wqed;

TEST_CASE("numbers round-trip through 17 significant digits") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 10000; ++i) {
        const double v = u(rng) * std::pow(10.0, static_cast<int>(u(rng) * 300));
        const std::string s = format_number(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(1.0) == "1");
    CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("CSV layout") {
    Table t{{"k", "omega_k", "R"}, {}};
    t.add({0.0, -2.0, 1.0});
    t.add({0.5, -1.7551651237807455, 0.25});
    CHECK(to_csv(t) == "k,omega_k,R\r\n0,-2,1\r\n0.5,-1.7551651237807455,0.25\r\n");
    CHECK_THROWS_AS(t.add({1.0}), ParameterError);
}

TEST_CASE("JSON document echoes parameters and reparses exactly") {
    Table t{{"x", "y"}, {}};
    t.add({1.0 / 3.0, std::numeric_limits<double>::quiet_NaN()});
    t.add({-2.5e-300, 6.02214076e23});
    Meta m;
    m.subcommand = "demo";
    m.params = ModelParams{0.1, -0.2, 1.5, 0.3, 0.01, 0.02};
    m.tolerances = {{"quadrature", 1e-10}};
    m.warnings = {"a \"quoted\" note"};
    const auto doc = nlohmann::json::parse(to_json(t, m));
    CHECK(doc["meta"]["subcommand"] == "demo");
    CHECK(doc["meta"]["version"] == kVersion);
    CHECK(doc["meta"]["params"]["delta"].get<double>() == 0.1);
    CHECK(doc["meta"]["params"]["epsilon"].get<double>() == -0.2);
    CHECK(doc["meta"]["params"]["J"].get<double>() == 1.5);
    CHECK(doc["meta"]["params"]["g"].get<double>() == 0.3);
    CHECK(doc["meta"]["params"]["gamma_e"].get<double>() == 0.01);
    CHECK(doc["meta"]["params"]["gamma_c"].get<double>() == 0.02);
    CHECK(doc["meta"]["tolerances"]["quadrature"].get<double>() == 1e-10);
    CHECK(doc["meta"]["warnings"][0] == "a \"quoted\" note");
    CHECK(doc["data"][0]["x"].get<double>() == 1.0 / 3.0);
    CHECK(doc["data"][0]["y"].is_null());
    CHECK(doc["data"][1]["x"].get<double>() == -2.5e-300);
    CHECK(doc["data"][1]["y"].get<double>() == 6.02214076e23);
}

TEST_CASE("format parsing and unwritable paths") {
    CHECK(parse_format("csv") == Format::csv);
    CHECK(parse_format("json") == Format::json);
    CHECK_THROWS_AS(parse_format("xml"), ParameterError);
    Table t{{"a"}, {}};
    CHECK_THROWS_AS(write_output(t, Meta{}, Format::csv, "/nonexistent-dir/out.csv"), ParameterError);
}
