#include "pfab/picard_fuchs.hpp"

#include "pfab/reduction.hpp"

#include <cmath>
#include <stdexcept>

namespace pfab {

namespace {

RatFunc rp(std::initializer_list<Rat> num) { return RatFunc(Poly(num)); }
RatFunc rq(std::initializer_list<Rat> num, std::initializer_list<Rat> den) {
    return RatFunc(Poly(num), Poly(den));
}

PFSystem make_pf(SystemKind kind) {
    PFSystem p;
    p.kind = kind;
    p.basis = basis_indices(kind);  // PF column vectors coincide with the reduction bases
    switch (kind) {
        case SystemKind::S1: {
            // (2.42): entries num/(2h+1)
            auto scal = [&](std::initializer_list<Rat> num) {
                return RatFunc(Poly(num), Poly{rat(1, 2), rat(1)}) * RatFunc(rat(1, 2));
            };
            p.entry = {
                {scal({rat(0), rat(2), rat(2)}), RatFunc::zero(), RatFunc::zero(), RatFunc::zero()},
                {RatFunc::zero(), scal({rat(1, 2), rat(2), rat(2)}), scal({rat(-1, 2)}),
                 RatFunc::zero()},
                {RatFunc::zero(), RatFunc::zero(), scal({rat(0), rat(1), rat(1)}), RatFunc::zero()},
                {scal({rat(0), rat(-2), rat(-2)}), RatFunc::zero(), RatFunc::zero(),
                 scal({rat(1, 2), rat(2), rat(2)})}};
            p.singular_h = {-0.5};
            break;
        }
        case SystemKind::S2:
            // (2.43)
            p.entry = {{rp({rat(0), rat(1)}), RatFunc::zero(), RatFunc::zero(), RatFunc::zero()},
                       {RatFunc::zero(), rp({rat(0), rat(2)}), RatFunc::zero(), RatFunc::zero()},
                       {rp({rat(2)}), RatFunc::zero(), rp({rat(-2), rat(2)}), RatFunc::zero()},
                       {RatFunc::zero(), rp({rat(0), rat(4)}), RatFunc::zero(),
                        rp({rat(-1), rat(1)})}};
            p.singular_h = {};
            break;
        case SystemKind::R19:
        case SystemKind::R20:
            // (2.44) == (2.45)
            p.entry = {{rp({rat(0), rat(1)}), rp({rat(-1, 64)}), RatFunc::zero()},
                       {rp({rat(-1, 64)}), rp({rat(0), rat(1)}), RatFunc::zero()},
                       {RatFunc::zero(), RatFunc::zero(),
                        rq({rat(-1, 4096), rat(0), rat(1)}, {rat(0), rat(1)})}};
            p.singular_h = {0.0};
            break;
    }
    return p;
}

}  // namespace

const PFSystem& pf_system(SystemKind kind) {
    static const PFSystem s1 = make_pf(SystemKind::S1);
    static const PFSystem s2 = make_pf(SystemKind::S2);
    static const PFSystem r19 = make_pf(SystemKind::R19);
    static const PFSystem r20 = make_pf(SystemKind::R20);
    switch (kind) {
        case SystemKind::S1: return s1;
        case SystemKind::S2: return s2;
        case SystemKind::R19: return r19;
        case SystemKind::R20: return r20;
    }
    throw std::logic_error("bad kind");
}

std::vector<std::vector<double>> pf_matrix(const SystemSpec& sys, double h) {
    const PFSystem& p = pf_system(sys.kind);
    sys.branch_of(h);
    for (double s : p.singular_h)
        if (h == s) throw std::domain_error("h is a singular value of the Picard-Fuchs system");
    std::vector<std::vector<double>> A(p.entry.size());
    for (size_t r = 0; r < p.entry.size(); ++r)
        for (const auto& e : p.entry[r]) A[r].push_back(e.eval(h));
    return A;
}

double pf_residual(const SystemSpec& sys, double h, double step) {
    const PFSystem& p = pf_system(sys.kind);
    size_t n = p.basis.size();
    std::vector<double> V(n), D(n);
    for (size_t i = 0; i < n; ++i) {
        V[i] = integral_I(sys, h, p.basis[i]);
        double d1 = (integral_I(sys, h + step, p.basis[i]) -
                     integral_I(sys, h - step, p.basis[i])) / (2 * step);
        double d2 = (integral_I(sys, h + step / 2, p.basis[i]) -
                     integral_I(sys, h - step / 2, p.basis[i])) / step;
        D[i] = (4 * d2 - d1) / 3;  // two-level Richardson
    }
    auto A = pf_matrix(sys, h);
    double worst = 0.0, scale = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double r = V[i];
        for (size_t j = 0; j < n; ++j) r -= A[i][j] * D[j];
        worst = std::max(worst, std::abs(r));
        scale = std::max(scale, std::abs(V[i]));
    }
    return worst / scale;
}

double derivative_identity_error(const SystemSpec& sys, double h, IntegralIndex idx, double step) {
    // I_{i,j} = I'_{i-k,j+2}/(j+2)  (2.47)
    IntegralIndex up{idx.i2 - static_cast<int>(std::lround(2 * sys.k_d())), idx.j + 2};
    auto f = [&](double x) { return integral_I(sys, x, up); };
    double d1 = (f(h + step) - f(h - step)) / (2 * step);
    double d2 = (f(h + step / 2) - f(h - step / 2)) / step;
    double d = (4 * d2 - d1) / 3;
    double lhs = integral_I(sys, h, idx);
    return std::abs(lhs - d / (idx.j + 2)) / std::max(1e-300, std::abs(lhs));
}

}  // namespace pfab
