#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "zrs/scatterers.hpp"

using namespace zrs;

TEST_CASE("separation profile on a line") {
    const auto p = separation_profile({{0, 0, 0}, {1, 0, 0}, {3, 0, 0}});
    REQUIRE(p.eta.size() == 2);
    CHECK(p.eta[0] == doctest::Approx(1.0));
    CHECK(p.eta[1] == doctest::Approx(1.0));
    CHECK(separation_profile({{0, 0, 0}, {0, 0, 2}}).eta == std::vector<double>{2.0});
}

TEST_CASE("separation profile matches brute-force scan") {
    std::vector<Vec3> pts;
    for (int m = 1; m <= 4; ++m) pts.emplace_back(1.0 / m, 0, 0);
    const auto p = separation_profile(pts);
    REQUIRE(p.eta.size() == 3);
    for (std::size_t k = 0; k < 3; ++k)
        CHECK(p.eta[k] == doctest::Approx(oracle::min_pair_distance(pts, k + 2)));
    CHECK(p.at(1) == p.at(2));

    std::mt19937_64 rng(3);
    const auto s = oracle::random_config(rng, 12);
    const auto& eta = s.separation().eta;
    for (std::size_t k = 1; k < eta.size(); ++k) CHECK(eta[k] <= eta[k - 1]);
    CHECK(eta.back() == doctest::Approx(oracle::min_pair_distance(s.points(), s.size())));
}

TEST_CASE("final separation is permutation invariant") {
    std::mt19937_64 rng(11);
    auto s = oracle::random_config(rng, 8);
    auto pts = s.points();
    std::shuffle(pts.begin(), pts.end(), rng);
    CHECK(separation_profile(pts).eta.back() == doctest::Approx(s.separation().eta.back()));
}

TEST_CASE("scatterer set validation") {
    CHECK_THROWS_AS(separation_profile({{0, 0, 0}, {0, 0, 1e-14}}), DuplicatePoint);
    CHECK_THROWS_AS(ScattererSet::create({{0, 0, 0}, {0, 0, 0}}, {1, 1}), DuplicatePoint);
    CHECK_THROWS_AS(ScattererSet::create({{0, 0, 0}}, {0.0}), BadParams);
    CHECK_THROWS_AS(ScattererSet::create({}, {}), BadParams);
    CHECK_THROWS_AS(ScattererSet::create({{0, 0, 0}}, {1.0, 2.0}), BadParams);
}

TEST_CASE("admissibility sums for small sets") {
    const auto one = ScattererSet::create({{0, 0, 0}}, {1.0});
    auto r = check_admissibility(one);
    CHECK(r.K0 == doctest::Approx(1.0));
    CHECK(r.K1 == 0.0);
    CHECK(r.verdict.pass);

    const auto two = ScattererSet::create({{0, 0, 0}, {1, 0, 0}}, {2.0, 2.0});
    r = check_admissibility(two);
    CHECK(r.K0 == doctest::Approx(1.0));
    CHECK(r.K1 == doctest::Approx(1.0));
    REQUIRE(r.tail.size() == 2);
    CHECK(r.tail[0] == doctest::Approx(0.5));
    CHECK(r.tail[1] == 0.0);
}

TEST_CASE("admissibility sums against extended-precision summation") {
    const std::size_t n = 50;
    std::vector<Vec3> pts;
    std::vector<double> ws;
    for (std::size_t m = 1; m <= n; ++m) {
        const double md = static_cast<double>(m);
        pts.emplace_back(1.0 / (md * md), 0, 0);
        ws.push_back(std::pow(md, 6));
    }
    const auto r = check_admissibility(ScattererSet::create(pts, ws));

    using oracle::mp_real;
    mp_real k0 = 0, k1 = 0;
    for (std::size_t m = 1; m <= n; ++m) {
        const mp_real md(m);
        k0 += 1 / pow(md, 6);
        // eta_m = x_{m-1} - x_m for this monotone family; eta_1 := eta_2
        const mp_real mm = m == 1 ? mp_real(2) : md;
        const mp_real eta = 1 / ((mm - 1) * (mm - 1)) - 1 / (mm * mm);
        k1 += 1 / (eta * eta * pow(md, 6));
    }
    CHECK(r.K0 == doctest::Approx(static_cast<double>(k0)).epsilon(1e-13));
    CHECK(r.K1 == doctest::Approx(static_cast<double>(k1)).epsilon(1e-12));
    for (std::size_t k = 1; k < r.tail.size(); ++k) CHECK(r.tail[k] <= r.tail[k - 1]);
}

TEST_CASE("generated families") {
    FamilySpec line{FamilyKind::UniformLine, {{"spacing", 1.0}, {"w", 2.5}}, 3, false};
    const auto s = generate_family(line);
    REQUIRE(s.size() == 3);
    CHECK(s.point(2).isApprox(Vec3(2, 0, 0)));
    CHECK(s.weight(1) == 2.5);
    CHECK(s.is_truncation());

    FamilySpec cl{FamilyKind::Clustering, {{"p", 2.0}, {"q", 6.0}}, 10, false};
    CHECK(check_admissibility(generate_family(cl)).verdict.pass);
    cl.n = 200;
    const auto big = generate_family(cl);
    const auto rep = check_admissibility(big);
    CHECK(rep.verdict.pass);
    CHECK(rep.k1_series.sufficient_data);
    for (std::size_t n : {5u, 20u, 100u}) CHECK(check_admissibility(big.prefix(n)).verdict.pass);

    cl.params = {{"p", 2.0}, {"q", 3.0}};
    cl.strict = true;
    CHECK_THROWS_AS(generate_family(cl), BadParams);
    cl.strict = false;
    cl.n = 200;
    CHECK_FALSE(check_admissibility(generate_family(cl)).verdict.pass);

    FamilySpec lat{FamilyKind::CubicLatticeBall, {{"spacing", 1.0}, {"w", 1.0}, {"q", 2.0}}, 27, false};
    const auto l = generate_family(lat);
    CHECK(l.size() == 27);
    CHECK(l.point(0).norm() == 0.0);
    CHECK(l.separation().eta.back() == doctest::Approx(1.0));

    CHECK_THROWS_AS(generate_family({FamilyKind::UniformLine, {{"bogus", 1.0}}, 3, false}), BadParams);
    CHECK_THROWS_AS(parse_family_kind("spiral"), BadParams);
}

TEST_CASE("series diagnostic") {
    std::vector<double> conv, div;
    for (int m = 1; m <= 40; ++m) {
        conv.push_back(std::pow(m, -2.0));
        div.push_back(std::pow(m, -0.5));
    }
    CHECK(diagnose_series(conv).converging);
    CHECK(diagnose_series(conv).slope == doctest::Approx(-2.0));
    CHECK_FALSE(diagnose_series(div).converging);
    CHECK_FALSE(diagnose_series({1.0, 0.5}).sufficient_data);
}

TEST_CASE("tail bound chooses the smallest contractive split") {
    std::vector<Vec3> pts;
    std::vector<double> ws;
    for (int m = 0; m < 6; ++m) {
        pts.emplace_back(2.0 * m, 0, 0);
        ws.push_back(m < 2 ? 0.01 : 100.0);
    }
    const auto s = ScattererSet::create(pts, ws);
    const auto r = check_admissibility(s, {4.0, std::nullopt});
    CHECK(r.n0 == 2);
    CHECK(r.p_tail < 1.0);
    CHECK(tail_norm_bound(s, 1, 2.0) >= 1.0);
    CHECK(tail_norm_bound(s, 6, 2.0) == 0.0);
}
