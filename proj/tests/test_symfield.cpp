#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pfab/symfield.hpp"

#include <cmath>
#include <random>

using namespace pfab;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }
const auto S1sys = make_system(SystemKind::S1);
const auto S2sys = make_system(SystemKind::S2);
const auto R19sys = make_system(SystemKind::R19);

Rat R(const char* s) { return rat_from_string(s); }
}  // namespace

TEST_CASE("differentiation examples and closure") {
    FieldKind f = FieldKind::S1;
    FieldElem h = FieldElem::h(f);
    CHECK(h.derivative() == FieldElem::constant(f, rat(1)));

    // d/dh S = (2h+1) S / (2(h^2+h))
    FieldElem S = FieldElem::gen(f, 0);
    FieldElem dS = S.derivative();
    FieldElem want(f);
    want.add_term({1, 0}, RatFunc(Poly{rat(1, 2), rat(1)}, Poly{rat(0), rat(1), rat(1)}));
    CHECK(dS == want);

    // d/dh evaluated matches central differences
    auto fam = basis_family(S1sys);
    for (const auto& e : fam) {
        FieldElem de = e.derivative();
        for (double x : {0.37, 1.9}) {
            double step = 1e-6;
            double fd = (e.eval(x + step) - e.eval(x - step)) / (2 * step);
            CHECK(rel(de.eval(x), fd) < 1e-6);
        }
    }

    // S2: d/dh L = u/(h(1-h)); check numerically at h=0.3
    FieldElem L2 = FieldElem::log_gen(FieldKind::S2);
    double x = 0.3, step = 1e-7;
    double fd = (L2.eval(x + step) - L2.eval(x - step)) / (2 * step);
    CHECK(rel(L2.derivative().eval(x), fd) < 1e-7);
}

TEST_CASE("linearity and Leibniz hold exactly") {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> C(-4, 4);
    for (FieldKind fk : {FieldKind::S1, FieldKind::S2, FieldKind::R}) {
        int nrad = fk == FieldKind::S2 ? 2 : 1;
        auto rand_elem = [&] {
            FieldElem e(fk);
            for (int t = 0; t < 4; ++t) {
                FieldMono m{static_cast<std::uint8_t>(C(rng) & (nrad == 2 ? 3 : 1)),
                            static_cast<std::uint8_t>(C(rng) & 1)};
                e.add_term(m, RatFunc(Poly{rat(C(rng)), rat(C(rng))}));
            }
            return e;
        };
        for (int t = 0; t < 12; ++t) {
            FieldElem a = rand_elem(), b = rand_elem();
            Rat s = rat(C(rng));
            CHECK((RatFunc(s) * a + b).derivative() ==
                  RatFunc(s) * a.derivative() + b.derivative());
            CHECK((a * b).derivative() == a.derivative() * b + a * b.derivative());
        }
    }
}

TEST_CASE("evaluation agrees with direct generator composition") {
    auto fam1 = basis_family(S1sys);
    for (double h : {0.21, 1.4, 17.0}) {
        double S = std::sqrt(h * h + h), L = std::log(2 * S + 2 * h + 1);
        double direct[6] = {h, S, h * h + h, L, 0.5 * L - (2 * h + 1) * S,
                            0.5 * (2 * h + 1) * L - S};
        for (int i = 0; i < 6; ++i) CHECK(rel(fam1[i].eval(h), direct[i]) < 1e-12);
    }
    auto fam2 = basis_family(S2sys);
    for (double h : {0.12, 0.77}) {
        double u = std::sqrt(h), v = std::sqrt(1 - h), L = std::log((1 + u) / (1 - u));
        double direct[7] = {u, h, h * u, 1 - v, 2 * h - 1 + (1 - h) * v,
                            u - 0.5 * (1 - h) * L, (u - 0.5 * (1 - h) * L) / (1 - h)};
        for (int i = 0; i < 7; ++i) CHECK(rel(fam2[i].eval(h), direct[i]) < 1e-12);
    }
    auto famr = basis_family(R19sys);
    for (double h : {0.04, 0.6}) {
        double S = std::sqrt(4096 * h * h - 1), L = std::acosh(64 * h);
        double direct[3] = {h - 1.0 / 64.0, S, h * L};
        for (int i = 0; i < 3; ++i) CHECK(rel(famr[i].eval(h), direct[i]) < 1e-12);
    }
    // S1 f4 -> 0 as h -> 0+
    CHECK(std::abs(fam1[4].eval(1e-10)) < 1e-4);
    CHECK(std::abs(fam1[4].eval(1e-14)) < 1e-6);
}

TEST_CASE("printed Wronskian formulas reproduce (S1 all, S2 first four)") {
    auto fam = basis_family(S1sys);
    std::vector<FieldElem> ws;
    for (int k = 1; k <= 6; ++k) ws.push_back(wronskian(fam, k));
    for (const auto& w : ws) CHECK(w.log_degree() <= 1);
    for (double h : {0.11, 0.35, 0.8, 1.3, 2.0, 3.1, 4.4, 6.0, 8.5, 12.0}) {
        double S = std::sqrt(h * h + h), L = std::log(2 * S + 2 * h + 1);
        double printed[6] = {
            h,
            -h / (2 * S),
            -h * (4 * h + 3) / (4 * (1 + h) * S),
            -(8 * h * h * h + 15 * h * h + 6 * h - 3 * (2 * h + 1) * S * L) /
                (4 * std::pow(h * h + h, 3)),
            3.0 / 16.0 * (4 * h * h * h - 2 * h * h - 6 * h + 3 * S * L) /
                std::pow(h * h + h, 5.5),
            -3.0 / 16.0 *
                (8 * std::pow(h, 4) - 8 * h * h * h - 46 * h * h - 30 * h +
                 3 * (6 * h + 5) * S * L) /
                std::pow(h * h + h, 8)};
        for (int k = 0; k < 6; ++k)
            CHECK_MESSAGE(rel(ws[k].eval(h), printed[k]) < 1e-10, "S1 W", k + 1, " at h=", h);
    }

    auto fam2 = basis_family(S2sys);
    for (double h : {0.15, 0.33, 0.52, 0.71, 0.88}) {
        double u = std::sqrt(h), v = std::sqrt(1 - h);
        double printed[4] = {u, u / 2, 0.25,
                             3.0 / 32.0 * (4 * h * h - 5 * h + 2 - 2 * std::pow(1 - h, 2.5)) /
                                 (h * h * h * std::pow(1 - h, 2.5))};
        (void)v;
        for (int k = 1; k <= 4; ++k)
            CHECK_MESSAGE(rel(wronskian(fam2, k).eval(h), printed[k - 1]) < 1e-10, "S2 W", k);
    }
}

TEST_CASE("exact Wronskian values at Pythagorean points (independent jet oracle)") {
    // S2 printed family at h = 9/25 (u=3/5, v=4/5); log power coefficients
    auto fam2 = basis_family(S2sys);
    Rat h = rat(9, 25);
    std::vector<Rat> gens = {rat(3, 5), rat(4, 5)};
    auto W5 = wronskian(fam2, 5).eval_exact(h, gens);
    CHECK(W5[0] == R("-3082275390625/1761205026816"));
    CHECK(W5.count(1) == 0);
    auto W6 = wronskian(fam2, 6).eval_exact(h, gens);
    CHECK(W6[0] == R("449307262897491455078125/224381014647131602944"));
    CHECK(W6[1] == R("-186264514923095703125/129850124217090048"));
    auto W7 = wronskian(fam2, 7).eval_exact(h, gens);
    CHECK(W7[0] ==
          R("41669551364975632168352603912353515625/1626259139582727175063656726528"));
    CHECK(W7[1] ==
          R("-702442548572435043752193450927734375/38115448583970168165554454528"));

    // and at h = 25/169 (u=5/13, v=12/13)
    h = rat(25, 169);
    gens = {rat(5, 13), rat(12, 13)};
    auto W7b = wronskian(fam2, 7).eval_exact(h, gens);
    CHECK(W7b[0] ==
          R("58214987694800808308736673236606497178120319476816502602089/"
            "82422331180475627197552184524800000000000000000000"));
    CHECK(W7b[1] ==
          R("-153820518770097674474245854948132769023149284337222671/"
            "176659660451979653629870080000000000000000000"));

    // S1 printed family at h = 1/3 (S = 2/3)
    auto fam1 = basis_family(S1sys);
    h = rat(1, 3);
    gens = {rat(2, 3)};
    auto V4 = wronskian(fam1, 4).eval_exact(h, gens);
    CHECK(V4[0] == R("-2889/256"));
    CHECK(V4[1] == R("1215/128"));
    auto V6 = wronskian(fam1, 6).eval_exact(h, gens);
    CHECK(V6[0] == R("247120065/131072"));
    CHECK(V6[1] == R("-903981141/524288"));

    // S1 at h = 16/9 (S = 20/9)
    h = rat(16, 9);
    gens = {rat(20, 9)};
    auto V5 = wronskian(fam1, 5).eval_exact(h, gens);
    CHECK(V5[0] == R("129140163/819200000000"));
    CHECK(V5[1] == R("31381059609/163840000000000"));

    // r19/r20 basis at h = 5/256 (t=2: S = 3/4, L = ln 2)
    auto famr = basis_family(R19sys);
    h = rat(5, 256);
    gens = {rat(3, 4)};
    auto U3 = wronskian(famr, 3).eval_exact(h, gens);
    CHECK(U3[0] == R("256/3"));
    CHECK(U3[1] == R("-4096/27"));

    // corrected S2 melnikov family (7th element = the bare log)
    auto famc = melnikov_family(S2sys, 0);
    h = rat(9, 25);
    gens = {rat(3, 5), rat(4, 5)};
    auto C7 = wronskian(famc, 7).eval_exact(h, gens);
    CHECK(C7[0] == R("57667648434289731085300445556640625/67760797482613632294319030272"));
    CHECK(C7[1] == R("-5826450433232821524143218994140625/9528862145992542041388613632"));
}

TEST_CASE("S1 negative-branch melnikov family starts with h+1") {
    auto fam = melnikov_family(S1sys, 0);
    CHECK(fam[0].eval(-1.0) == doctest::Approx(0.0));
    CHECK(fam[0].eval(-3.0) == doctest::Approx(-2.0));
    auto pos = melnikov_family(S1sys, 1);
    CHECK(pos[0].eval(2.0) == doctest::Approx(2.0));
}

TEST_CASE("ect_check: hand examples and the paper families") {
    // {1, h^2} on (-1,1): W2 = 2h vanishes at 0 -> not an ECT system
    FieldKind f = FieldKind::S1;
    std::vector<FieldElem> bad = {FieldElem::constant(f, rat(1)),
                                  FieldElem::from_ratfunc(f, RatFunc(Poly{rat(0), rat(0), rat(1)}))};
    EctReport rep = ect_check(bad, {-0.9, 0.9}, 64);
    CHECK(!rep.is_ect_evidence);

    // S2 printed family on (0,1)
    rep = ect_check(basis_family(S2sys), {1e-6, 1.0 - 1e-6}, 96);
    CHECK(rep.is_ect_evidence);

    // corrected S2 melnikov family on (0,1)
    rep = ect_check(melnikov_family(S2sys, 0), {1e-6, 1.0 - 1e-6}, 96);
    CHECK(rep.is_ect_evidence);

    // S1 printed family on (0, inf): truncated tail
    rep = ect_check(basis_family(S1sys), {1e-6, std::numeric_limits<double>::infinity()}, 96);
    CHECK(rep.is_ect_evidence);
    CHECK(rep.hi > 100.0);

    // S1 branch-adapted family on (-inf, -1)
    rep = ect_check(melnikov_family(S1sys, 0),
                    {-std::numeric_limits<double>::infinity(), -1.0 - 1e-6}, 96);
    CHECK(rep.is_ect_evidence);

    // the printed S1 family is NOT an ECT system on the negative annulus
    // (its W4 changes sign near h ~ -1.15)
    rep = ect_check(basis_family(S1sys), {-4.0, -1.0 - 1e-6}, 256);
    CHECK(!rep.is_ect_evidence);

    // r19/r20 closed-form basis on (1/64, inf)
    rep = ect_check(basis_family(R19sys), {1.0 / 64.0 + 1e-7, std::numeric_limits<double>::infinity()},
                    96);
    CHECK(rep.is_ect_evidence);
}
