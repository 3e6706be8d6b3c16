#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pfab/quadrature.hpp"
#include "pfab/systems.hpp"

#include <cmath>
#include <random>

using namespace pfab;

TEST_CASE("make_system returns the exact parameter table") {
    auto s1 = make_system(SystemKind::S1);
    CHECK(s1.k == rat(1));
    CHECK(s1.lambda2 == rat(1, 4));
    CHECK(s1.lambda1 == rat(-1, 2));
    CHECK(s1.lambda0 == rat(1, 4));
    CHECK(s1.sigma.size() == 2);
    CHECK(s1.sigma[0].hi == -1.0);
    CHECK(s1.sigma[1].lo == 0.0);

    auto r19 = make_system(SystemKind::R19);
    CHECK(r19.k == rat(3, 2));
    CHECK(r19.lambda2 == rat(1, 128));
    CHECK(r19.lambda1 == rat(1, 128));
    CHECK(r19.lambda0 == rat(0));
    CHECK(r19.sigma[0].lo == 1.0 / 64.0);

    auto r20 = make_system(SystemKind::R20);
    CHECK(r20.k == rat(1, 2));
    CHECK(r20.lambda2 == rat(0));
    CHECK(r20.lambda1 == rat(1, 128));
    CHECK(r20.lambda0 == rat(1, 128));

    auto s2 = make_system(SystemKind::S2);
    CHECK(s2.k == rat(2));
    CHECK(s2.sigma[0].hi == 1.0);
}

TEST_CASE("hamiltonian at the centers") {
    auto s1 = make_system(SystemKind::S1);
    CHECK(hamiltonian(s1, 1.0, 0.0) == doctest::Approx(0.0));
    CHECK(hamiltonian(s1, -1.0, 0.0) == doctest::Approx(-1.0));
    auto r19 = make_system(SystemKind::R19);
    CHECK(hamiltonian(r19, 1.0, 0.0) == doctest::Approx(1.0 / 64.0));
    auto r20 = make_system(SystemKind::R20);
    CHECK(hamiltonian(r20, 1.0, 0.0) == doctest::Approx(1.0 / 64.0));
    // centers sit on the recorded boundary values
    for (auto kind : {SystemKind::S1, SystemKind::S2, SystemKind::R19, SystemKind::R20}) {
        auto sys = make_system(kind);
        for (auto [xc, hc] : sys.centers) CHECK(hamiltonian(sys, xc, 0.0) == doctest::Approx(hc));
    }
    CHECK_THROWS_AS(hamiltonian(make_system(SystemKind::R19), -1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(hamiltonian(make_system(SystemKind::S2), 0.0, 0.0), std::domain_error);
}

TEST_CASE("half_energy examples") {
    auto s1 = make_system(SystemKind::S1);
    CHECK(half_energy(s1, 1.0, 1.0) == doctest::Approx(1.0));
    auto r19 = make_system(SystemKind::R19);
    CHECK(half_energy(r19, 1.0 / 32.0, 1.0) == doctest::Approx(1.0 / 64.0));
    for (auto kind : {SystemKind::S1, SystemKind::S2, SystemKind::R19, SystemKind::R20}) {
        auto sys = make_system(kind);
        for (auto [xc, hc] : sys.centers)
            CHECK(half_energy(sys, hc, xc) == doctest::Approx(0.0).epsilon(1e-14));
    }
}

TEST_CASE("vector_field examples and first-integral property") {
    PerturbationPoly none;
    auto s1 = make_system(SystemKind::S1);
    auto [fx, fy] = vector_field(s1, Side::upper, 0.0, none, 1.0, 0.0);
    CHECK(fx == doctest::Approx(0.0));
    CHECK(fy == doctest::Approx(0.0));

    auto r19 = make_system(SystemKind::R19);
    auto [gx, gy] = vector_field(r19, Side::lower, 0.0, none, 2.0, 0.5);
    CHECK(gx == doctest::Approx(-1.0));
    CHECK(gy == doctest::Approx(-0.75 * 0.25 + 4.0 / 256.0 - 2.0 / 256.0));

    auto s2 = make_system(SystemKind::S2);
    auto [hx, hy] = vector_field(s2, Side::upper, 0.0, none, 2.0, 1.0);
    CHECK(hx == doctest::Approx(std::sqrt(2.0) / 2.0 * 2.0));
    CHECK(hy == doctest::Approx(std::sqrt(2.0) / 2.0 * (2.0 - 4.0 + 1.0)));

    // grad H . F = 0 on each annulus at random oval points
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(0.1, 0.9);
    for (auto kind : {SystemKind::S1, SystemKind::S2, SystemKind::R19, SystemKind::R20}) {
        auto sys = make_system(kind);
        for (size_t br = 0; br < sys.sigma.size(); ++br) {
            double h = kind == SystemKind::S1 && br == 0 ? -1.0 - U(rng)
                       : kind == SystemKind::S2          ? U(rng)
                                                         : 1.0 / 64.0 + U(rng);
            auto g = oval_endpoints(sys, h);
            for (int t = 0; t < 12; ++t) {
                double x = g.x1 + (g.x2 - g.x1) * U(rng);
                double y = std::sqrt(std::max(0.0, 2.0 * half_energy(sys, h, x)));
                if (t % 2) y = -y;
                auto [px, py] = vector_field(sys, Side::upper, 0.0, none, x, y);
                double d = 1e-6 * std::max(1.0, std::abs(x));
                double hxd = (hamiltonian(sys, x + d, y) - hamiltonian(sys, x - d, y)) / (2 * d);
                double hyd = (hamiltonian(sys, x, y + d) - hamiltonian(sys, x, y - d)) / (2 * d);
                CHECK(std::abs(hxd * px + hyd * py) < 1e-7 * (std::abs(px) + std::abs(py) + 1));
            }
        }
    }
}

TEST_CASE("oval x-sign per branch") {
    auto s1 = make_system(SystemKind::S1);
    auto gneg = oval_endpoints(s1, -2.0);
    CHECK(gneg.x2 < 0.0);
    auto gpos = oval_endpoints(s1, 2.0);
    CHECK(gpos.x1 > 0.0);
    for (auto kind : {SystemKind::S2, SystemKind::R19, SystemKind::R20}) {
        auto sys = make_system(kind);
        double h = kind == SystemKind::S2 ? 0.5 : 0.1;
        CHECK(oval_endpoints(sys, h).x1 > 0.0);
    }
}

TEST_CASE("perturbation indices, smoothness and JSON") {
    PerturbationPoly p;
    p.n = 2;
    p.set('a', true, 1, 1, 0.5);
    p.set('b', false, 0, 2, -1.25);
    CHECK_THROWS(p.set('a', true, 2, 1, 1.0));
    CHECK(!p.is_smooth());
    std::string js = p.to_json();
    PerturbationPoly q = PerturbationPoly::from_json(js);
    CHECK(q.n == 2);
    CHECK(q.get('a', true, 1, 1) == 0.5);
    CHECK(q.get('b', false, 0, 2) == -1.25);
    CHECK(q.get('b', true, 0, 0) == 0.0);

    PerturbationPoly s;
    s.n = 1;
    s.set('a', true, 1, 0, 0.25);
    s.set('a', false, 1, 0, 0.25);
    CHECK(s.is_smooth());
    // missing entries are zero: JSON with only n
    PerturbationPoly z = PerturbationPoly::from_json("{\"n\": 3}");
    CHECK(z.n == 3);
    CHECK(z.is_smooth());
}
