#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pfab/poly.hpp"
#include "pfab/ratfunc.hpp"

#include <random>

using namespace pfab;

TEST_CASE("poly arithmetic basics") {
    Poly p{rat(1), rat(2), rat(1)};  // 1 + 2h + h^2
    Poly q{rat(-1), rat(1)};         // h - 1
    CHECK(p.degree() == 2);
    CHECK((p * q).degree() == 3);
    CHECK(p.eval(rat(2)) == rat(9));
    CHECK((p + q).eval(rat(3)) == rat(16 + 2));
    CHECK(p.derivative() == Poly{rat(2), rat(2)});
    CHECK((p - p).is_zero());
    CHECK(Poly{}.degree() == -1);
}

TEST_CASE("poly division and gcd") {
    Poly p = Poly{rat(1), rat(1)} * Poly{rat(-2), rat(1)} * Poly{rat(3), rat(0), rat(1)};
    Poly g = Poly::gcd(p, Poly{rat(1), rat(1)} * Poly{rat(5), rat(1)});
    CHECK(g == Poly{rat(1), rat(1)});
    Poly q = p / Poly{rat(1), rat(1)};
    CHECK(q * Poly{rat(1), rat(1)} == p);
    CHECK_THROWS(p / Poly{rat(7), rat(1)});
}

TEST_CASE("poly random ring identities") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> C(-6, 6), D(0, 5);
    auto rand_poly = [&] {
        std::vector<Rat> cs(D(rng) + 1);
        for (auto& c : cs) c = rat(C(rng), 1 + D(rng));
        return Poly(std::move(cs));
    };
    for (int t = 0; t < 50; ++t) {
        Poly a = rand_poly(), b = rand_poly(), c = rand_poly();
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a * b).derivative() == a.derivative() * b + a * b.derivative());
    }
}

TEST_CASE("ratfunc normalization and calculus") {
    RatFunc f(Poly{rat(0), rat(2)}, Poly{rat(0), rat(0), rat(4)});  // 2h/4h^2 = 1/(2h)
    CHECK(f.num() == Poly{rat(1, 2)});
    CHECK(f.den() == Poly{rat(0), rat(1)});
    RatFunc g = RatFunc::var();
    CHECK((f * g) == RatFunc(rat(1, 2)));
    RatFunc d = f.derivative();  // -1/(2h^2)
    CHECK(d.eval(2.0) == doctest::Approx(-0.125));
    CHECK(f.den_power_of(Poly{rat(0), rat(1)}) == 1);
    CHECK(RatFunc(Poly::one(), Poly{rat(0), rat(0), rat(0), rat(1)})
              .den_power_of(Poly{rat(0), rat(1)}) == 3);
}

TEST_CASE("ratfunc field identities") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> C(-5, 5), D(0, 3);
    auto rand_rf = [&] {
        std::vector<Rat> n(D(rng) + 1), d(D(rng) + 1);
        for (auto& c : n) c = rat(C(rng));
        for (auto& c : d) c = rat(C(rng));
        d.push_back(rat(1 + D(rng)));
        return RatFunc(Poly(std::move(n)), Poly(std::move(d)));
    };
    for (int t = 0; t < 40; ++t) {
        RatFunc a = rand_rf(), b = rand_rf();
        CHECK((a + b) - b == a);
        if (!b.is_zero()) CHECK((a / b) * b == a);
        CHECK((a * b).derivative() == a.derivative() * b + a * b.derivative());
    }
}
