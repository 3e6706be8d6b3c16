#pragma once

#include "pfab/rational.hpp"

#include <algorithm>
#include <cassert>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace pfab {

/// Dense univariate polynomial over Q, coefficients ascending in h.
/// The zero polynomial has empty coefficient storage and degree() == -1.
class Poly {
  public:
    Poly() = default;
    Poly(std::initializer_list<Rat> cs) : c_(cs) { trim(); }
    explicit Poly(Rat constant) { c_.push_back(std::move(constant)); trim(); }
    explicit Poly(std::vector<Rat> cs) : c_(std::move(cs)) { trim(); }

    static Poly zero() { return Poly(); }
    static Poly one() { return Poly{Rat(1)}; }
    static Poly var() { return Poly{Rat(0), Rat(1)}; }  // h
    static Poly monomial(int deg, Rat coeff) {
        std::vector<Rat> v(deg + 1);
        v[deg] = std::move(coeff);
        return Poly(std::move(v));
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
    const Rat& operator[](int i) const { return c_[i]; }
    const std::vector<Rat>& coeffs() const { return c_; }

    const Rat& leading() const {
        if (is_zero()) throw std::logic_error("leading coefficient of zero polynomial");
        return c_.back();
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<Rat> out(std::max(a.c_.size(), b.c_.size()));
        for (size_t i = 0; i < out.size(); ++i) {
            if (i < a.c_.size()) out[i] += a.c_[i];
            if (i < b.c_.size()) out[i] += b.c_[i];
        }
        return Poly(std::move(out));
    }
    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
    Poly operator-() const {
        std::vector<Rat> out(c_);
        for (auto& x : out) x = -x;
        return Poly(std::move(out));
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        std::vector<Rat> out(a.c_.size() + b.c_.size() - 1);
        for (size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (size_t j = 0; j < b.c_.size(); ++j)
                if (b.c_[j] != 0) out[i + j] += a.c_[i] * b.c_[j];
        }
        return Poly(std::move(out));
    }
    friend Poly operator*(const Rat& s, const Poly& p) {
        if (s == 0) return Poly();
        std::vector<Rat> out(p.c_);
        for (auto& x : out) x *= s;
        return Poly(std::move(out));
    }
    Poly& operator+=(const Poly& o) { *this = *this + o; return *this; }
    Poly& operator-=(const Poly& o) { *this = *this - o; return *this; }
    Poly& operator*=(const Poly& o) { *this = *this * o; return *this; }

    bool operator==(const Poly& o) const { return c_ == o.c_; }

    Poly derivative() const {
        if (c_.size() <= 1) return Poly();
        std::vector<Rat> out(c_.size() - 1);
        for (size_t i = 1; i < c_.size(); ++i) out[i - 1] = Rat(i) * c_[i];
        return Poly(std::move(out));
    }

    Rat eval(const Rat& x) const {
        Rat acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }
    double eval(double x) const {
        double acc = 0.0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + to_double(*it);
        return acc;
    }

    /// Euclidean division; throws if the remainder is nonzero when exact=true.
    static void divmod(const Poly& a, const Poly& b, Poly& q, Poly& r) {
        if (b.is_zero()) throw std::domain_error("polynomial division by zero");
        std::vector<Rat> rem(a.c_);
        std::vector<Rat> quo(std::max<int>(a.degree() - b.degree() + 1, 0));
        int db = b.degree();
        for (int d = static_cast<int>(rem.size()) - 1; d >= db; --d) {
            if (rem[d] == 0) continue;
            Rat f = rem[d] / b.c_[db];
            quo[d - db] = f;
            for (int j = 0; j <= db; ++j) rem[d - db + j] -= f * b.c_[j];
        }
        q = Poly(std::move(quo));
        r = Poly(std::move(rem));
    }
    friend Poly operator/(const Poly& a, const Poly& b) {
        Poly q, r;
        divmod(a, b, q, r);
        if (!r.is_zero()) throw std::domain_error("non-exact polynomial division");
        return q;
    }

    static Poly gcd(Poly a, Poly b) {
        while (!b.is_zero()) {
            Poly q, r;
            divmod(a, b, q, r);
            a = std::move(b);
            b = std::move(r);
        }
        if (a.is_zero()) return a;
        return (Rat(1) / a.leading()) * a;  // monic
    }

    Poly pow(unsigned e) const {
        Poly acc = one(), base = *this;
        while (e) {
            if (e & 1) acc *= base;
            base *= base;
            e >>= 1;
        }
        return acc;
    }

    std::string str(const std::string& var = "h") const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (int i = degree(); i >= 0; --i) {
            const Rat& a = c_[i];
            if (a == 0) continue;
            if (!first) os << (a > 0 ? " + " : " - ");
            else if (a < 0) os << "-";
            Rat mag = a > 0 ? a : Rat(-a);
            if (mag != 1 || i == 0) os << mag.str();
            if (i > 0) {
                if (mag != 1) os << "*";
                os << var;
                if (i > 1) os << "^" << i;
            }
            first = false;
        }
        return os.str();
    }

  private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<Rat> c_;
};

}  // namespace pfab
