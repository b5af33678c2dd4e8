#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "zrs/io.hpp"

using namespace zrs;

TEST_CASE("explicit configuration") {
    const auto s = load_scatterers(R"({"points": [[0,0,0],[1,0,0]], "weights": [2, -2]})");
    CHECK(s.size() == 2);
    CHECK(s.weight(1) == -2.0);
    CHECK_FALSE(s.is_truncation());
}

TEST_CASE("family configuration from a file") {
    const std::string path = "zrs_io_test_config.json";
    {
        std::ofstream out(path);
        out << R"({"family": {"kind": "clustering", "params": {"p": 2, "q": 6}, "n": 10}})";
    }
    const auto s = load_scatterers(path);
    std::remove(path.c_str());
    CHECK(s.size() == 10);
    CHECK(s.is_truncation());
    CHECK(s.family()->kind == FamilyKind::Clustering);
}

TEST_CASE("malformed input") {
    CHECK_THROWS_AS(load_scatterers("{not json"), BadParams);
    CHECK_THROWS_AS(load_scatterers(R"({"points": [[0,0]], "weights": [1]})"), BadParams);
    CHECK_THROWS_AS(load_scatterers(R"({"points": [[0,0,0]]})"), BadParams);
    CHECK_THROWS_AS(load_scatterers("/nonexistent/config.json"), BadParams);
    CHECK_THROWS_AS(
        load_scatterers(R"({"family": {"kind": "clustering", "params": {"p": 2, "q": 3}, "n": 5, "strict": true}})"),
        BadParams);
}

TEST_CASE("report serialisation") {
    const auto s = load_scatterers(R"({"points": [[0,0,0],[1,0,0]], "weights": [2, 2]})");
    const auto j = to_json(check_admissibility(s));
    CHECK(j.at("K0").get<double>() == doctest::Approx(1.0));
    CHECK(j.at("K1").get<double>() == doctest::Approx(1.0));
    CHECK(j.at("verdict").at("pass").get<bool>());
    CHECK(j.at("tail").size() == 2);
}
