#include "pfab/reduction.hpp"

#include <json.hpp>

#include <cmath>
#include <mutex>
#include <sstream>

namespace pfab {

namespace {

const Poly kH = Poly::var();

RatFunc rf(Rat c) { return RatFunc(std::move(c)); }
RatFunc rf_poly(std::initializer_list<Rat> cs) { return RatFunc(Poly(cs)); }

struct Memo {
    std::mutex mu;
    std::map<IntegralIndex, BasisCombo> table;
};
Memo& memo_for(SystemKind kind) {
    static Memo memos[4];
    return memos[static_cast<int>(kind)];
}

[[noreturn]] void unreachable_index(SystemKind kind, IntegralIndex idx, const char* why) {
    throw std::domain_error(std::string(to_string(kind)) + " " + idx.str() +
                            ": not reachable by the reduction ladder (" + why + ")");
}

}  // namespace

const std::vector<IntegralIndex>& basis_indices(SystemKind kind) {
    static const std::vector<IntegralIndex> s1 = {
        IntegralIndex::of(0, 0), IntegralIndex::of(1, 1), IntegralIndex::of(-1, 1),
        IntegralIndex::of(0, 2)};
    static const std::vector<IntegralIndex> s2 = {
        IntegralIndex::of(0, 1), IntegralIndex::of(1, 0), IntegralIndex::of(1, 1),
        IntegralIndex::of(0, 2)};
    static const std::vector<IntegralIndex> r19 = {
        IntegralIndex::half(1, 1), IntegralIndex::of(1, 1), IntegralIndex::of(1, 0)};
    static const std::vector<IntegralIndex> r20 = {
        IntegralIndex::of(0, 1), IntegralIndex::half(1, 1), IntegralIndex::of(0, 0)};
    switch (kind) {
        case SystemKind::S1: return s1;
        case SystemKind::S2: return s2;
        case SystemKind::R19: return r19;
        case SystemKind::R20: return r20;
    }
    throw std::logic_error("bad kind");
}

BasisCombo BasisCombo::zero(SystemKind kind) {
    BasisCombo c;
    c.kind = kind;
    c.coeff.assign(basis_indices(kind).size(), RatFunc::zero());
    return c;
}

bool BasisCombo::is_zero() const {
    if (!log_coeff.is_zero()) return false;
    for (const auto& c : coeff)
        if (!c.is_zero()) return false;
    return true;
}

BasisCombo& BasisCombo::operator+=(const BasisCombo& o) {
    if (kind != o.kind) throw std::invalid_argument("mixing basis combos of different systems");
    for (size_t i = 0; i < coeff.size(); ++i) coeff[i] += o.coeff[i];
    log_coeff += o.log_coeff;
    return *this;
}

BasisCombo& BasisCombo::scale(const RatFunc& f) {
    for (auto& c : coeff) c *= f;
    log_coeff *= f;
    return *this;
}

BasisCombo BasisCombo::scaled(const RatFunc& f) const {
    BasisCombo c = *this;
    c.scale(f);
    return c;
}

double BasisCombo::eval(double h, const std::vector<double>& basis_values) const {
    double acc = 0.0;
    for (size_t i = 0; i < coeff.size(); ++i)
        if (!coeff[i].is_zero()) acc += coeff[i].eval(h) * basis_values[i];
    if (!log_coeff.is_zero()) acc += log_coeff.eval(h) * std::acosh(64.0 * h);
    return acc;
}

double BasisCombo::eval_quadrature(const SystemSpec& sys, double h) const {
    std::vector<double> vals;
    for (const auto& idx : basis_indices(kind)) vals.push_back(integral_I(sys, h, idx));
    return eval(h, vals);
}

std::string BasisCombo::str() const {
    std::ostringstream os;
    const auto& ids = basis_indices(kind);
    bool first = true;
    for (size_t i = 0; i < coeff.size(); ++i) {
        if (coeff[i].is_zero()) continue;
        if (!first) os << " + ";
        os << "[" << coeff[i].str() << "]*" << ids[i].str();
        first = false;
    }
    if (!log_coeff.is_zero()) {
        if (!first) os << " + ";
        os << "[" << log_coeff.str() << "]*acosh(64h)";
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

std::string BasisCombo::to_json() const {
    nlohmann::json j;
    j["system"] = to_string(kind);
    auto poly_json = [](const Poly& p) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& c : p.coeffs()) {
            arr.push_back({{"num", Int(numerator(c)).str()}, {"den", Int(denominator(c)).str()}});
        }
        return arr;
    };
    auto rf_json = [&](const RatFunc& f) {
        return nlohmann::json{{"num", poly_json(f.num())}, {"den", poly_json(f.den())}};
    };
    const auto& ids = basis_indices(kind);
    nlohmann::json terms = nlohmann::json::object();
    for (size_t i = 0; i < coeff.size(); ++i) terms[ids[i].str()] = rf_json(coeff[i]);
    j["coefficients"] = terms;
    j["log_coefficient"] = rf_json(log_coeff);
    return j.dump(2);
}

namespace {

class Reducer {
  public:
    explicit Reducer(SystemKind kind) : kind_(kind), basis_(basis_indices(kind)) {}

    BasisCombo reduce(IntegralIndex idx) {
        for (size_t b = 0; b < basis_.size(); ++b)
            if (basis_[b] == idx) {
                BasisCombo c = BasisCombo::zero(kind_);
                c.coeff[b] = RatFunc::one();
                return c;
            }
        auto& memo = memo_for(kind_);
        {
            std::scoped_lock lk(memo.mu);
            auto it = memo.table.find(idx);
            if (it != memo.table.end()) return it->second;
        }
        BasisCombo out = compute(idx);
        std::scoped_lock lk(memo.mu);
        memo.table.emplace(idx, out);
        return out;
    }

  private:
    BasisCombo compute(IntegralIndex idx) {
        switch (kind_) {
            case SystemKind::S1: return s1(idx);
            case SystemKind::S2: return s2(idx);
            case SystemKind::R19: return r19(idx);
            case SystemKind::R20: return r20(idx);
        }
        throw std::logic_error("bad kind");
    }

    BasisCombo lin(std::initializer_list<std::pair<RatFunc, IntegralIndex>> terms) {
        BasisCombo acc = BasisCombo::zero(kind_);
        for (const auto& [c, ix] : terms) {
            if (c.is_zero()) continue;
            acc += reduce(ix).scaled(c);
        }
        return acc;
    }

    // ---- S1 (k=1): recurrences (2.12)/(2.13), base identities (2.14)-(2.16) ----
    BasisCombo s1(IntegralIndex idx) {
        if (!idx.integer_i()) unreachable_index(kind_, idx, "half-integer index");
        int i = idx.i2 / 2, j = idx.j;
        if (j < 0 || i < -1) unreachable_index(kind_, idx, "outside i>=-1, j>=0");
        auto I = IntegralIndex::of;
        const RatFunc inv2h1 = RatFunc(Poly::one(), Poly{rat(1), rat(2)});  // 1/(2h+1)
        if (i == 0 && j == 1)  // (2.15): I11 = -(2h+1) I01 + 2 I-11
            return lin({{2 * inv2h1, I(-1, 1)}, {-inv2h1, I(1, 1)}});
        if (i == 1 && j == 0)  // (2.15): I02 = (2h+1) I10 - I00
            return lin({{inv2h1, I(0, 2)}, {inv2h1, I(0, 0)}});
        if (i == 2 && j == 0) return lin({{RatFunc::one(), I(0, 0)}});  // (2.14)
        if (i == -1 && j == 2)  // (2.16)
            return lin({{rf_poly({rat(1, 2), rat(1)}), I(0, 0)}, {rf(rat(-1, 2)), I(1, 0)}});
        if (i == -1 && j == 0) unreachable_index(kind_, idx, "I(-1,0) has no printed relation");
        if (j >= 2) {
            // (2.13): I_{i,j} = j/(2(i+j-1)) [ (2h+1) I_{i+1,j-2} - I_{i,j-2} ]
            Rat piv = rat(2) * rat(i + j - 1);
            if (piv == 0) unreachable_index(kind_, idx, "(2.13) pivot i+j=1");
            RatFunc c = rf(rat(j) / piv);
            return lin({{c * rf_poly({rat(1), rat(2)}), I(i + 1, j - 2)}, {-c, I(i, j - 2)}});
        }
        // j <= 1, i >= 2 (j=1) or i >= 3 (j=0): (2.12)
        Rat piv = rat(i + j - 1);
        if (piv == 0) unreachable_index(kind_, idx, "(2.12) pivot i+j=1");
        RatFunc c = rf(Rat(1) / piv);
        return lin({{c * rf(rat(2 * i + j - 4)) * rf_poly({rat(1), rat(2)}), I(i - 1, j)},
                    {c * rf(rat(-(i - 3))), I(i - 2, j)}});
    }

    // ---- S2 (k=2): recurrences (2.19)/(2.20), base identities (2.21)-(2.23) ----
    BasisCombo s2(IntegralIndex idx) {
        if (!idx.integer_i()) unreachable_index(kind_, idx, "half-integer index");
        int i = idx.i2 / 2, j = idx.j;
        if (j < 0 || i < -1) unreachable_index(kind_, idx, "outside i>=-1, j>=0");
        auto I = IntegralIndex::of;
        const RatFunc invhm1 = RatFunc(Poly::one(), Poly{rat(-1), rat(1)});  // 1/(h-1)
        if (i == 0 && j == 0) return lin({{RatFunc::one(), I(1, 0)}});       // (2.21)
        if (i == -1 && j == 1) return lin({{RatFunc::one(), I(0, 1)}});     // (2.21)
        if (i == 2 && j == 0)  // (2.22): I20 = (I02 - 2 I10)/(2(h-1))
            return lin({{rat(1, 2) * invhm1, I(0, 2)}, {rat(-1) * invhm1, I(1, 0)}});
        if (i == -1 && j == 2)  // (2.23)
            return lin({{rf_poly({rat(0), rat(4, 3)}), I(1, 0)}});
        if (i == -1 && j == 3)  // (2.22): I-13 = 2(h-1) I11 + 2 I01
            return lin({{rf_poly({rat(-2), rat(2)}), I(1, 1)}, {rf(rat(2)), I(0, 1)}});
        if (i == -1 && j == 0) unreachable_index(kind_, idx, "I(-1,0) has no printed relation");
        if (j >= 2) {
            // (2.19): I_{i,j} = 2j/(i+j-2) (I_{i+1,j-2} - I_{i,j-2})
            Rat piv = rat(i + j - 2);
            if (piv == 0) unreachable_index(kind_, idx, "(2.19) pivot i+j=2");
            RatFunc c = rf(rat(2 * j) / piv);
            return lin({{c, I(i + 1, j - 2)}, {-c, I(i, j - 2)}});
        }
        // j <= 1, i >= 2 (j=1) or i >= 3 (j=0): (2.20)
        RatFunc c = rat(1, 2) * invhm1;
        return lin({{c, I(i - 2, j + 2)}, {rat(2) * c, I(i - 2, j)}, {rat(-4) * c, I(i - 1, j)}});
    }

    // ---- r19 (k=3/2): ladders (2.28)/(2.34), bases (2.31)/(2.36)/(2.38)/(2.40) ----
    BasisCombo r19(IntegralIndex idx) {
        int i2 = idx.i2, j = idx.j;
        if (j < 0 || i2 < -2) unreachable_index(kind_, idx, "outside i>=-1, j>=0");
        auto H2 = IntegralIndex::half;
        const RatFunc h = RatFunc::var();
        if (j == 0) {
            if (i2 == 0)  // (2.38): I00 = (16384 h^2 - 1)/3 I10
                return lin({{rf_poly({rat(-1, 3), rat(0), rat(16384, 3)}), H2(2, 0)}});
            if (i2 == 1)  // (2.36): I(1/2,0) = 64 h I10
                return lin({{rat(64) * h, H2(2, 0)}});
            if (i2 == 3) {  // I(3/2,0) = 4 acosh(64h)
                BasisCombo c = BasisCombo::zero(kind_);
                c.log_coeff = rf(rat(4));
                return c;
            }
            if (i2 == 4) return lin({{RatFunc::one(), H2(2, 0)}});  // I20 = I10
            if (i2 == -1)  // from (2.34) at i=1/2: I(-1/2,0) = 96 h I00 - I(1/2,0)/2
                return lin({{rat(96) * h, H2(0, 0)}, {rf(rat(-1, 2)), H2(1, 0)}});
            if (i2 == -2)  // from (2.34) at i=0: I(-1,0) = (512 h I(-1/2,0) - 3 I00)/5
                return lin({{rat(512, 5) * h, H2(-1, 0)}, {rf(rat(-3, 5)), H2(0, 0)}});
            if (i2 >= 5) {
                // (2.34): I_{i,0} = [2^8 (i-2) h I_{i-1/2,0} - (2i-5) I_{i-1,0}]/(2i-3)
                Rat i_r = rat(i2, 2);
                Rat piv = 2 * i_r - 3;
                return lin({{rf(Rat(256) * (i_r - 2) / piv) * h, H2(i2 - 1, 0)},
                            {rf(-(2 * i_r - 5) / piv), H2(i2 - 2, 0)}});
            }
            unreachable_index(kind_, idx, "j=0 ladder");
        }
        if (j == 1) {
            if (i2 == 0)  // (2.31): I01 = I11/2 + 32 h I(1/2,1)
                return lin({{rf(rat(1, 2)), H2(2, 1)}, {rat(32) * h, H2(1, 1)}});
            if (i2 == -1)  // (2.31): I(-1/2,1) = 64 h I01
                return lin({{rat(64) * h, H2(0, 1)}});
            if (i2 == -2)  // (2.31): I(-1,1) = 80 h I(-1/2,1) - I01/4
                return lin({{rat(80) * h, H2(-1, 1)}, {rf(rat(-1, 4)), H2(0, 1)}});
            if (i2 >= 3) {
                // (2.28): I_{i,1} = [2^6(4i-5) h I_{i-1/2,1} - 2(i-2) I_{i-1,1}]/(2i-1)
                Rat i_r = rat(i2, 2);
                Rat piv = 2 * i_r - 1;
                return lin({{rf(Rat(64) * (4 * i_r - 5) / piv) * h, H2(i2 - 1, 1)},
                            {rf(Rat(-2) * (i_r - 2) / piv), H2(i2 - 2, 1)}});
            }
            unreachable_index(kind_, idx, "j=1 ladder");
        }
        if (i2 == 0 && j == 2) {  // (2.40): I02 = 8 h acosh(64h) - I10/32
            BasisCombo c = lin({{rf(rat(-1, 32)), H2(2, 0)}});
            c.log_coeff = rat(8) * h;
            return c;
        }
        // j >= 2: prefer (2.10) [I_{i,j} = j (I_{i+2,j-2} - I_{i+1,j-2})/(64(4i+3j-6))],
        // fall back to (2.25) when its pivot vanishes.
        Rat piv = 2 * rat(i2) + 3 * rat(j) - 6;
        if (piv != 0) {
            RatFunc c = rf(rat(j) / (Rat(64) * piv));
            return lin({{c, H2(i2 + 4, j - 2)}, {-c, H2(i2 + 2, j - 2)}});
        }
        // (2.25): I_{i,j} = 2 h I_{i+3/2,j-2} - I_{i+2,j-2}/64 - I_{i+1,j-2}/64
        return lin({{rat(2) * h, H2(i2 + 3, j - 2)},
                    {rf(rat(-1, 64)), H2(i2 + 4, j - 2)},
                    {rf(rat(-1, 64)), H2(i2 + 2, j - 2)}});
    }

    // ---- r20 (k=1/2): same scheme with the shifted ladders ----
    BasisCombo r20(IntegralIndex idx) {
        int i2 = idx.i2, j = idx.j;
        if (j < 0 || i2 < -2) unreachable_index(kind_, idx, "outside i>=-1, j>=0");
        auto H2 = IntegralIndex::half;
        const RatFunc h = RatFunc::var();
        if (j == 0) {
            if (i2 == 2) return lin({{RatFunc::one(), H2(0, 0)}});  // I10 = I00
            if (i2 == 1) {  // I(1/2,0) = 4 acosh(64h)
                BasisCombo c = BasisCombo::zero(kind_);
                c.log_coeff = rf(rat(4));
                return c;
            }
            if (i2 == 3)  // I(3/2,0) = 64 h I10 = 64 h I00
                return lin({{rat(64) * h, H2(0, 0)}});
            if (i2 == -1)  // I(-1/2,0) = 64 h I00
                return lin({{rat(64) * h, H2(0, 0)}});
            if (i2 == -2)  // I(-1,0) = (16384 h^2 - 1)/3 I00
                return lin({{rf_poly({rat(-1, 3), rat(0), rat(16384, 3)}), H2(0, 0)}});
            if (i2 >= 4) {
                // I_{m,0} = [256(m-1) h I_{m-1/2,0} - (2m-3) I_{m-1,0}]/(2m-1)
                Rat m = rat(i2, 2);
                Rat piv = 2 * m - 1;
                return lin({{rf(Rat(256) * (m - 1) / piv) * h, H2(i2 - 1, 0)},
                            {rf(-(2 * m - 3) / piv), H2(i2 - 2, 0)}});
            }
            unreachable_index(kind_, idx, "j=0 ladder");
        }
        if (j == 1) {
            if (i2 == -1)  // I(-1/2,1) = 32 h I01 + I(1/2,1)/2
                return lin({{rat(32) * h, H2(0, 1)}, {rf(rat(1, 2)), H2(1, 1)}});
            if (i2 == -2)  // I(-1,1) = 64 h I(-1/2,1)
                return lin({{rat(64) * h, H2(-1, 1)}});
            if (i2 >= 2) {
                // I_{m,1} = [64(4m-3) h I_{m-1/2,1} - (2m-3) I_{m-1,1}]/(2m)
                Rat m = rat(i2, 2);
                Rat piv = 2 * m;
                return lin({{rf(Rat(64) * (4 * m - 3) / piv) * h, H2(i2 - 1, 1)},
                            {rf(-(2 * m - 3) / piv), H2(i2 - 2, 1)}});
            }
            unreachable_index(kind_, idx, "j=1 ladder");
        }
        if (i2 == 0 && j == 2) {  // I02 = 8 h acosh(64h) - I00/32
            BasisCombo c = lin({{rf(rat(-1, 32)), H2(0, 0)}});
            c.log_coeff = rat(8) * h;
            return c;
        }
        // j >= 2: (2.10)-form I_{i,j} = j (I_{i+1,j-2} - I_{i,j-2})/(64(4i+j-2)),
        // falling back to the (2.25)-form on zero pivot.
        Rat piv = 2 * rat(i2) + rat(j) - 2;
        if (piv != 0) {
            RatFunc c = rf(rat(j) / (Rat(64) * piv));
            return lin({{c, H2(i2 + 2, j - 2)}, {-c, H2(i2, j - 2)}});
        }
        return lin({{rat(2) * h, H2(i2 + 1, j - 2)},
                    {rf(rat(-1, 64)), H2(i2 + 2, j - 2)},
                    {rf(rat(-1, 64)), H2(i2, j - 2)}});
    }

    SystemKind kind_;
    const std::vector<IntegralIndex>& basis_;
};

Rat rat_from_double(double v) {
    return Rat(v);  // exact dyadic conversion
}

}  // namespace

BasisCombo reduce_integral(const SystemSpec& sys, IntegralIndex idx) {
    return Reducer(sys.kind).reduce(idx);
}

BasisCombo reduce_melnikov(const SystemSpec& sys, const PerturbationPoly& pert) {
    pert.validate();
    Reducer red(sys.kind);
    BasisCombo acc = BasisCombo::zero(sys.kind);
    Rat k = sys.k;
    for (int i = 0; i <= pert.n; ++i)
        for (int j = 0; i + j <= pert.n; ++j) {
            Rat bp = rat_from_double(pert.get('b', true, i, j));
            Rat bm = rat_from_double(pert.get('b', false, i, j));
            Rat cb = (j % 2 == 0) ? Rat(bp - bm) : Rat(bp + bm);  // J = (-1)^{j+1} I
            if (cb != 0)
                acc += red.reduce(IntegralIndex::of(i, j)).scaled(RatFunc(cb));
            Rat ap = rat_from_double(pert.get('a', true, i, j));
            Rat am = rat_from_double(pert.get('a', false, i, j));
            Rat ca = (j % 2 == 0) ? Rat(ap + am) : Rat(ap - am);
            if (ca != 0) {
                Rat w = (rat(i) - k - 1) / rat(j + 1);
                acc += red.reduce(IntegralIndex::of(i - 1, j + 1)).scaled(RatFunc(w * ca));
            }
        }
    return acc;
}

Rat rho0(const SystemSpec& sys, const PerturbationPoly& pert) {
    Rat b = rat_from_double(pert.get('b', true, 0, 2)) - rat_from_double(pert.get('b', false, 0, 2));
    Rat a = rat_from_double(pert.get('a', true, 1, 1)) - rat_from_double(pert.get('a', false, 1, 1));
    return b - (sys.k / 2) * a;
}

namespace {
int rdeg(const RatFunc& f) {
    if (f.is_zero()) return std::numeric_limits<int>::min();
    return f.num().degree() - f.den().degree();
}
}  // namespace

bool degree_report(const BasisCombo& combo, int n) {
    switch (combo.kind) {
        case SystemKind::S1: {
            const Poly half = Poly{rat(1, 2), rat(1)};  // monic (h + 1/2)
            int a_bound = n >= 4 ? n - 1 : std::max(n - 1, 2);
            int g_bound = n >= 4 ? n - 3 : std::max(n - 3, 1);
            for (int t = 0; t < 4; ++t) {
                const RatFunc& c = combo.coeff[t];
                if (c.is_zero()) continue;
                int m = c.den_power_of(half);
                if (m > 1 || c.den().degree() != m) return false;
                int deg = c.num().degree() - m + 1;  // as numerator over (2h+1)^1
                int bound = t == 0 || t == 1 ? a_bound : (t == 2 ? g_bound : 2);
                if (deg > bound) return false;
            }
            return combo.log_coeff.is_zero();
        }
        case SystemKind::S2: {
            const Poly hm1 = Poly{rat(-1), rat(1)};
            int m_bound = n >= 2 ? std::max(n - 2, 1) : 0;
            for (int t = 0; t < 4; ++t) {
                const RatFunc& c = combo.coeff[t];
                if (c.is_zero()) continue;
                int m = c.den_power_of(hm1);
                if (m > m_bound || c.den().degree() != m) return false;
                int bound = (t == 0 || t == 3) ? 0 : 1;  // alpha2, delta2 vs beta2, gamma2
                if (rdeg(c) > bound) return false;
            }
            return combo.log_coeff.is_zero();
        }
        case SystemKind::R19: {
            int a_bound = n >= 4 ? 2 * n - 5 : 3;
            int bg_bound = n >= 4 ? 2 * n - 4 : 2;
            const int bounds[3] = {a_bound, bg_bound, bg_bound};  // alpha3, beta3, gamma3
            for (int t = 0; t < 3; ++t) {
                const RatFunc& c = combo.coeff[t];
                if (!c.is_polynomial()) return false;
                if (c.num().degree() > bounds[t]) return false;
            }
            const RatFunc& lc = combo.log_coeff;
            if (!lc.is_polynomial()) return false;
            if (!lc.is_zero() && (lc.num().degree() != 1 || lc.num()[0] != 0)) return false;
            return true;
        }
        case SystemKind::R20: {
            int a_bound = n >= 3 ? 2 * n - 4 : 2;
            int b_bound = n >= 3 ? 2 * n - 3 : 1;
            int g_bound = n >= 3 ? 2 * n - 2 : 2;
            const int bounds[3] = {a_bound, b_bound, g_bound};  // alpha4, beta4, gamma4
            for (int t = 0; t < 3; ++t) {
                const RatFunc& c = combo.coeff[t];
                if (!c.is_polynomial()) return false;
                if (c.num().degree() > bounds[t]) return false;
            }
            // log coefficient: odd polynomial, tau*h for n <= 4; I_{-1,6}
            // (reachable once n >= 5) adds an h^3 term
            const RatFunc& lc = combo.log_coeff;
            if (!lc.is_polynomial()) return false;
            if (!lc.is_zero()) {
                int dmax = n >= 5 ? 3 : 1;
                if (lc.num().degree() > dmax) return false;
                for (int d = 0; d <= lc.num().degree(); d += 2)
                    if (lc.num()[d] != 0) return false;
            }
            return true;
        }
    }
    return false;
}

void clear_reduction_cache() {
    for (auto kind : {SystemKind::S1, SystemKind::S2, SystemKind::R19, SystemKind::R20}) {
        auto& m = memo_for(kind);
        std::scoped_lock lk(m.mu);
        m.table.clear();
    }
}

}  // namespace pfab
