#pragma once

#include "pfab/ratfunc.hpp"
#include "pfab/systems.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace pfab {

/// Generator sets of the three differential fields:
///   S1:  S = sqrt(h^2+h),       L = ln|2S+2h+1|
///   S2:  u = sqrt(h), v = sqrt(1-h), L = ln((1+u)/(1-u))
///   R:   S = sqrt(4096h^2-1),   L = acosh(64h) (r19 and r20 share the field)
enum class FieldKind { S1, S2, R };

FieldKind field_of(SystemKind kind);

/// Monomial over the generators: radical bitmask (bit0 = S or u, bit1 = v)
/// and a log power.
struct FieldMono {
    std::uint8_t rad = 0;
    std::uint8_t lpow = 0;
    bool operator<(const FieldMono& o) const {
        return rad != o.rad ? rad < o.rad : lpow < o.lpow;
    }
    bool operator==(const FieldMono& o) const { return rad == o.rad && lpow == o.lpow; }
};

/// Exact element of the differential field: generator-monomial normal form
/// with rational-function coefficients. Closed under d/dh.
class FieldElem {
  public:
    explicit FieldElem(FieldKind f = FieldKind::S1) : field_(f) {}
    static FieldElem from_ratfunc(FieldKind f, RatFunc c);
    static FieldElem constant(FieldKind f, Rat c) { return from_ratfunc(f, RatFunc(std::move(c))); }
    static FieldElem h(FieldKind f) { return from_ratfunc(f, RatFunc::var()); }
    static FieldElem gen(FieldKind f, std::uint8_t rad_bit);  // S, u or v
    static FieldElem log_gen(FieldKind f);

    FieldKind field() const { return field_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<FieldMono, RatFunc>& terms() const { return terms_; }
    int log_degree() const;

    FieldElem& operator+=(const FieldElem& o);
    FieldElem& operator-=(const FieldElem& o);
    friend FieldElem operator+(FieldElem a, const FieldElem& b) { return a += b; }
    friend FieldElem operator-(FieldElem a, const FieldElem& b) { return a -= b; }
    FieldElem operator-() const;
    friend FieldElem operator*(const FieldElem& a, const FieldElem& b);
    friend FieldElem operator*(const RatFunc& c, const FieldElem& e);
    bool operator==(const FieldElem& o) const { return field_ == o.field_ && terms_ == o.terms_; }

    FieldElem derivative() const;
    double eval(double h) const;
    /// High-precision evaluation (for Wronskian sign scans whose double
    /// evaluation cancels catastrophically near interval boundaries).
    double eval_mp(double h) const;

    /// Exact evaluation at rational h where the radical generators take the
    /// given rational values; the log generator stays symbolic. Returns the
    /// coefficients by log power.
    std::map<int, Rat> eval_exact(const Rat& h, const std::vector<Rat>& radical_values) const;

    /// Growth degree in half-integer h-powers as |h| -> inf (log factors count
    /// as degree 0) and the corresponding leading coefficient magnitude.
    std::pair<int, double> growth() const;

    std::string str() const;

    void add_term(FieldMono m, RatFunc c);

  private:
    FieldKind field_;
    std::map<FieldMono, RatFunc> terms_;
};

FieldElem differentiate(const FieldElem& e);

/// Exact Wronskian W_m = det[(d/dh)^r f_c] of the first m functions.
FieldElem wronskian(const std::vector<FieldElem>& funcs, int m);

/// The n=2 analysis family in the printed order: 6 elements for S1,
/// 7 for S2; for r19/r20 the 3-element closed-form basis {h-1/64, S, h L}.
std::vector<FieldElem> basis_family(const SystemSpec& sys);

/// The family actually spanning M(h) for n=2 on a given annulus branch:
/// equals basis_family on S1(0,inf); on S1(-inf,-1) the first element is h+1;
/// for S2 the last element is L itself.
std::vector<FieldElem> melnikov_family(const SystemSpec& sys, int branch);

struct EctReport {
    bool is_ect_evidence = false;
    bool inconclusive = false;
    std::vector<double> min_abs_per_k;  // min |W_k| relative to local scale
    double lo = 0.0, hi = 0.0;          // interval actually scanned (after truncation)
};

/// Numerical evidence that (funcs) is an ECT system on the interval: no W_k
/// sign change and no |W_k| below threshold on a refined sample grid.
/// Unbounded ends are truncated at the dominant-asymptotics radius.
EctReport ect_check(const std::vector<FieldElem>& funcs, std::pair<double, double> interval,
                    int samples);

/// Radius beyond which the top-growth monomial of e dominates (sign-stable
/// tail); dir = +1 for h -> +inf, -1 for h -> -inf.
double tail_radius(const FieldElem& e, int dir);

}  // namespace pfab
