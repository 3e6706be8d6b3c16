#pragma once

#include "pfab/poly.hpp"

namespace pfab {

/// Rational function num/den over Q[h], kept reduced with monic denominator.
class RatFunc {
  public:
    RatFunc() : num_(), den_(Poly::one()) {}
    RatFunc(Poly num, Poly den = Poly::one()) : num_(std::move(num)), den_(std::move(den)) {
        normalize();
    }
    explicit RatFunc(Rat constant) : num_(Poly(std::move(constant))), den_(Poly::one()) {}

    static RatFunc zero() { return RatFunc(); }
    static RatFunc one() { return RatFunc(Poly::one()); }
    static RatFunc var() { return RatFunc(Poly::var()); }

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.is_one(); }

    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    RatFunc operator-() const { return RatFunc(-num_, den_); }
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
        if (b.is_zero()) throw std::domain_error("rational function division by zero");
        return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
    }
    friend RatFunc operator*(const Rat& s, const RatFunc& f) { return RatFunc(s * f.num_, f.den_); }
    RatFunc& operator+=(const RatFunc& o) { *this = *this + o; return *this; }
    RatFunc& operator-=(const RatFunc& o) { *this = *this - o; return *this; }
    RatFunc& operator*=(const RatFunc& o) { *this = *this * o; return *this; }

    bool operator==(const RatFunc& o) const { return num_ == o.num_ && den_ == o.den_; }

    RatFunc derivative() const {
        return RatFunc(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
    }

    double eval(double x) const { return num_.eval(x) / den_.eval(x); }
    Rat eval(const Rat& x) const {
        Rat d = den_.eval(x);
        if (d == 0) throw std::domain_error("rational function pole");
        return num_.eval(x) / d;
    }

    /// Largest m with factor^m dividing the denominator.
    int den_power_of(const Poly& factor) const {
        int m = 0;
        Poly d = den_, q, r;
        for (;;) {
            Poly::divmod(d, factor, q, r);
            if (!r.is_zero()) break;
            d = q;
            ++m;
        }
        return m;
    }

    std::string str(const std::string& var = "h") const {
        if (is_polynomial()) return num_.str(var);
        return "(" + num_.str(var) + ")/(" + den_.str(var) + ")";
    }

  private:
    void normalize() {
        if (den_.is_zero()) throw std::domain_error("zero denominator");
        if (num_.is_zero()) { den_ = Poly::one(); return; }
        Poly g = Poly::gcd(num_, den_);
        if (g.degree() > 0) {
            num_ = num_ / g;
            den_ = den_ / g;
        }
        Rat lead = den_.leading();
        if (lead != 1) {
            den_ = (Rat(1) / lead) * den_;
            num_ = (Rat(1) / lead) * num_;
        }
    }
    Poly num_, den_;
};

}  // namespace pfab
