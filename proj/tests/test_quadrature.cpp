#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pfab/quadrature.hpp"

#include <cmath>
#include <random>

using namespace pfab;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }
const auto S1 = make_system(SystemKind::S1);
const auto S2 = make_system(SystemKind::S2);
const auto R19 = make_system(SystemKind::R19);
const auto R20 = make_system(SystemKind::R20);
}  // namespace

TEST_CASE("oval endpoints: closed forms and identities") {
    // r19: x1 = (64h - sqrt(4096h^2-1))^2, x2 the conjugate; x1*x2 = 1
    for (double h : {0.02, 0.05, 0.3}) {
        auto g = oval_endpoints(R19, h);
        double r = std::sqrt(4096 * h * h - 1);
        CHECK(rel(g.x1, (64 * h - r) * (64 * h - r)) < 1e-12);
        CHECK(rel(g.x2, (64 * h + r) * (64 * h + r)) < 1e-12);
        CHECK(std::abs(g.x1 * g.x2 - 1.0) <= 1e-10 * g.x2);
    }
    // S1, h>0: x1*x2 = 1, x1+x2 = 4h+2 (quadratic formula for phi = 0)
    for (double h : {0.2, 1.0, 5.0}) {
        auto g = oval_endpoints(S1, h);
        CHECK(rel(g.x1 * g.x2, 1.0) < 1e-12);
        CHECK(rel(g.x1 + g.x2, 4 * h + 2) < 1e-12);
    }
    // oval collapses to the center as h approaches the center level
    auto g = oval_endpoints(R19, 1.0 / 64.0 + 1e-7);
    CHECK(g.x2 - g.x1 < 2e-2);
    CHECK(g.x1 < 1.0);
    CHECK(g.x2 > 1.0);
    // phi positive strictly inside, zero at the ends
    for (double t : {0.25, 0.5, 0.75}) {
        double x = g.x1 + (g.x2 - g.x1) * t;
        CHECK(half_energy(R19, 1.0 / 64.0 + 1e-7, x) > 0.0);
    }
    CHECK_THROWS_AS(oval_endpoints(S2, 1.5), std::domain_error);
    CHECK_THROWS_AS(oval_endpoints(R19, 1.0 / 64.0 + 1e-12), std::domain_error);
}

TEST_CASE("S1 closed-form integrals") {
    // I_{0,0}(h) = 4 sqrt(h^2+h) on (0,inf)  [x^{-2} integral with x1 x2 = 1]
    for (double h : {0.3, 1.0, 2.5}) {
        double S = std::sqrt(h * h + h);
        CHECK(rel(integral_I(S1, h, IntegralIndex::of(0, 0)), 4 * S) < 1e-11);
    }
    CHECK(rel(integral_I(S1, 1.0, IntegralIndex::of(0, 0)), 4 * std::sqrt(2.0)) < 1e-11);
    // I_{2,0} = I_{0,0}
    for (double h : {0.4, 1.7}) {
        CHECK(rel(integral_I(S1, h, IntegralIndex::of(2, 0)),
                  integral_I(S1, h, IntegralIndex::of(0, 0))) < 1e-10);
    }
}

TEST_CASE("J sign rule and S1 J example") {
    for (auto* sys : {&S1, &S2, &R19, &R20}) {
        double h = sys->kind == SystemKind::S2 ? 0.45 : (sys->kind == SystemKind::S1 ? 1.3 : 0.08);
        for (auto idx : {IntegralIndex::of(0, 0), IntegralIndex::of(1, 1),
                         IntegralIndex::of(0, 2), IntegralIndex::of(2, 1)}) {
            double I = integral_I(*sys, h, idx);
            double J = integral_J(*sys, h, idx);
            double sgn = idx.j % 2 == 0 ? -1.0 : 1.0;  // (-1)^{j+1}
            CHECK(rel(J, sgn * I) < 1e-9);
        }
    }
    CHECK(rel(integral_J(S1, 1.0, IntegralIndex::of(0, 0)), -4 * std::sqrt(2.0)) < 1e-10);
}

TEST_CASE("recurrence spot checks at sampled h") {
    auto I = [&](const SystemSpec& s, double h, int i, int j) {
        return integral_I(s, h, IntegralIndex::of(i, j));
    };
    auto Ih = [&](const SystemSpec& s, double h, int i2, int j) {
        return integral_I(s, h, IntegralIndex::half(i2, j));
    };
    for (double h : {0.35, 1.3, 4.0}) {
        CHECK(rel(I(S1, h, 1, 1), -(2 * h + 1) * I(S1, h, 0, 1) + 2 * I(S1, h, -1, 1)) < 1e-8);
        CHECK(rel(I(S1, h, 0, 2), (2 * h + 1) * I(S1, h, 1, 0) - I(S1, h, 0, 0)) < 1e-8);
        CHECK(rel(I(S1, h, -1, 2), (h + 0.5) * I(S1, h, 0, 0) - 0.5 * I(S1, h, 1, 0)) < 1e-8);
    }
    for (double h : {0.2, 0.55, 0.85}) {
        CHECK(rel(I(S2, h, -1, 2), 4.0 / 3.0 * h * I(S2, h, 1, 0)) < 1e-8);
        CHECK(rel(I(S2, h, 0, 0), I(S2, h, 1, 0)) < 1e-9);
        CHECK(rel(I(S2, h, 0, 1), I(S2, h, -1, 1)) < 1e-9);
    }
    for (double h : {0.03, 0.1, 0.5}) {
        CHECK(rel(Ih(R19, h, 1, 0), 64 * h * I(R19, h, 1, 0)) < 1e-8);
        CHECK(rel(I(R19, h, 0, 0), (16384 * h * h - 1) / 3.0 * I(R19, h, 1, 0)) < 1e-8);
        // half-integer j=1 ladder (2.31)
        CHECK(rel(Ih(R19, h, -1, 1), 64 * h * I(R19, h, 0, 1)) < 1e-8);
        CHECK(rel(I(R19, h, 0, 1), 0.5 * I(R19, h, 1, 1) + 32 * h * Ih(R19, h, 1, 1)) < 1e-8);
    }
}

TEST_CASE("dy interchange identity") {
    // int x^i y^j dy = -i/(j+1) * I at the shifted index (1e-7: endpoint-singular path)
    struct Probe { const SystemSpec* sys; double h; };
    for (auto [sys, h] : {Probe{&S1, 1.1}, Probe{&S2, 0.5}, Probe{&R19, 0.07}}) {
        std::mt19937_64 rng(17);
        std::uniform_int_distribution<int> ii(1, 3), jj(0, 2);
        for (int t = 0; t < 4; ++t) {
            int i = ii(rng), j = jj(rng);
            double lhs = integral_dy(*sys, h, i, j);
            // x^{i-1} y^{j+1} dx is I_{i',j+1} with i' - k - 1 = i - 1, so i' = i + k
            IntegralIndex shifted =
                IntegralIndex::half(2 * i + int(std::lround(2 * sys->k_d())), j + 1);
            double rhs = -double(i) / (j + 1) * integral_I(*sys, h, shifted);
            CHECK(rel(lhs, rhs) < 1e-7);
        }
    }
}

TEST_CASE("melnikov quadrature basics") {
    PerturbationPoly zero;
    zero.n = 2;
    for (double h : {0.5, 2.0}) CHECK(melnikov_quadrature(S1, zero, h) == 0.0);

    // smooth pert with only even-j b-terms: I + J = 0
    PerturbationPoly p;
    p.n = 2;
    for (auto [i, j] : {std::pair{0, 0}, {1, 0}, {2, 0}, {0, 2}}) {
        p.set('b', true, i, j, 0.7 - 0.1 * i + 0.2 * j);
        p.set('b', false, i, j, 0.7 - 0.1 * i + 0.2 * j);
    }
    for (double h : {0.5, 2.0}) CHECK(std::abs(melnikov_quadrature(S1, p, h)) < 1e-12);
}

TEST_CASE("non-convergence and domain errors surface") {
    CHECK_THROWS_AS(integral_I(S2, 1.2, IntegralIndex::of(0, 0)), std::domain_error);
    CHECK_THROWS_AS(integral_I(S1, 0.5, IntegralIndex::half(1, 0)), std::invalid_argument);
}
