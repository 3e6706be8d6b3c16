#include "pfab/symfield.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace pfab {

namespace {

constexpr int kMaxLogPow = 16;

struct FieldTable {
    int nrad;
    RatFunc square[2];   // rad generator squared, as rational function of h
    RatFunc drad[2];     // d(gen) = gen * drad
    FieldMono dlog_mono; // dL = dlog_coeff * monomial
    RatFunc dlog_coeff;
    const char* rad_name[2];
};

const FieldTable& table(FieldKind f) {
    static const FieldTable s1 = [] {
        FieldTable t{};
        t.nrad = 1;
        t.square[0] = RatFunc(Poly{rat(0), rat(1), rat(1)});  // h^2 + h
        t.drad[0] = RatFunc(Poly{rat(1, 2), rat(1)}, Poly{rat(0), rat(1), rat(1)});
        t.dlog_mono = {1, 0};  // 1/S = S/(h^2+h)
        t.dlog_coeff = RatFunc(Poly::one(), Poly{rat(0), rat(1), rat(1)});
        t.rad_name[0] = "sqrt(h^2+h)";
        return t;
    }();
    static const FieldTable s2 = [] {
        FieldTable t{};
        t.nrad = 2;
        t.square[0] = RatFunc(Poly{rat(0), rat(1)});   // u^2 = h
        t.square[1] = RatFunc(Poly{rat(1), rat(-1)});  // v^2 = 1 - h
        t.drad[0] = RatFunc(Poly::one(), Poly{rat(0), rat(2)});
        t.drad[1] = RatFunc(Poly{rat(1)}, Poly{rat(-2), rat(2)});  // -1/(2(1-h)) = 1/(2(h-1))
        t.dlog_mono = {1, 0};  // dL = u / (h(1-h))
        t.dlog_coeff = RatFunc(Poly::one(), Poly{rat(0), rat(1)} * Poly{rat(1), rat(-1)});
        t.rad_name[0] = "sqrt(h)";
        t.rad_name[1] = "sqrt(1-h)";
        return t;
    }();
    static const FieldTable r = [] {
        FieldTable t{};
        t.nrad = 1;
        t.square[0] = RatFunc(Poly{rat(-1), rat(0), rat(4096)});  // 4096h^2 - 1
        t.drad[0] = RatFunc(Poly{rat(0), rat(4096)}, Poly{rat(-1), rat(0), rat(4096)});
        t.dlog_mono = {1, 0};  // dL = 64/S = S * 64/(4096h^2-1)
        t.dlog_coeff = RatFunc(Poly{rat(64)}, Poly{rat(-1), rat(0), rat(4096)});
        t.rad_name[0] = "sqrt(4096h^2-1)";
        return t;
    }();
    switch (f) {
        case FieldKind::S1: return s1;
        case FieldKind::S2: return s2;
        case FieldKind::R: return r;
    }
    throw std::logic_error("bad field");
}

}  // namespace

FieldKind field_of(SystemKind kind) {
    switch (kind) {
        case SystemKind::S1: return FieldKind::S1;
        case SystemKind::S2: return FieldKind::S2;
        default: return FieldKind::R;
    }
}

FieldElem FieldElem::from_ratfunc(FieldKind f, RatFunc c) {
    FieldElem e(f);
    e.add_term({0, 0}, std::move(c));
    return e;
}

FieldElem FieldElem::gen(FieldKind f, std::uint8_t rad_bit) {
    if (rad_bit >= static_cast<std::uint8_t>(table(f).nrad))
        throw std::invalid_argument("no such radical generator");
    FieldElem e(f);
    e.add_term({static_cast<std::uint8_t>(1u << rad_bit), 0}, RatFunc::one());
    return e;
}

FieldElem FieldElem::log_gen(FieldKind f) {
    FieldElem e(f);
    e.add_term({0, 1}, RatFunc::one());
    return e;
}

void FieldElem::add_term(FieldMono m, RatFunc c) {
    if (c.is_zero()) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, std::move(c));
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

int FieldElem::log_degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, static_cast<int>(m.lpow));
    return d;
}

FieldElem& FieldElem::operator+=(const FieldElem& o) {
    if (field_ != o.field_) throw std::invalid_argument("mixing field elements");
    for (const auto& [m, c] : o.terms_) {
        auto [it, inserted] = terms_.emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }
    return *this;
}

FieldElem& FieldElem::operator-=(const FieldElem& o) { return *this += -o; }

FieldElem FieldElem::operator-() const {
    FieldElem e(field_);
    for (const auto& [m, c] : terms_) e.terms_.emplace(m, -c);
    return e;
}

FieldElem operator*(const FieldElem& a, const FieldElem& b) {
    if (a.field_ != b.field_) throw std::invalid_argument("mixing field elements");
    const FieldTable& t = table(a.field_);
    FieldElem out(a.field_);
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) {
            RatFunc c = ca * cb;
            std::uint8_t common = ma.rad & mb.rad;
            for (int bit = 0; bit < t.nrad; ++bit)
                if (common & (1u << bit)) c *= t.square[bit];
            int lp = ma.lpow + mb.lpow;
            if (lp > kMaxLogPow) throw std::logic_error("log power overflow");
            out.add_term({static_cast<std::uint8_t>(ma.rad ^ mb.rad),
                          static_cast<std::uint8_t>(lp)},
                         std::move(c));
        }
    return out;
}

FieldElem operator*(const RatFunc& c, const FieldElem& e) {
    FieldElem out(e.field_);
    if (c.is_zero()) return out;
    for (const auto& [m, cc] : e.terms_) out.add_term(m, c * cc);
    return out;
}

FieldElem FieldElem::derivative() const {
    const FieldTable& t = table(field_);
    FieldElem out(field_);
    for (const auto& [m, c] : terms_) {
        out.add_term(m, c.derivative());
        for (int bit = 0; bit < t.nrad; ++bit)
            if (m.rad & (1u << bit)) out.add_term(m, c * t.drad[bit]);
        if (m.lpow > 0) {
            // d(L^p) = p L^{p-1} dL
            RatFunc f = rat(m.lpow) * (c * t.dlog_coeff);
            std::uint8_t common = m.rad & t.dlog_mono.rad;
            RatFunc cc = f;
            for (int bit = 0; bit < t.nrad; ++bit)
                if (common & (1u << bit)) cc *= t.square[bit];
            out.add_term({static_cast<std::uint8_t>(m.rad ^ t.dlog_mono.rad),
                          static_cast<std::uint8_t>(m.lpow - 1 + t.dlog_mono.lpow)},
                         std::move(cc));
        }
    }
    return out;
}

FieldElem differentiate(const FieldElem& e) { return e.derivative(); }

double FieldElem::eval(double h) const {
    double g[2] = {0.0, 0.0};
    double lg = 0.0;
    switch (field_) {
        case FieldKind::S1:
            g[0] = std::sqrt(h * h + h);
            lg = h > 0 ? 2.0 * std::asinh(std::sqrt(h)) : -2.0 * std::asinh(std::sqrt(-1.0 - h));
            break;
        case FieldKind::S2:
            g[0] = std::sqrt(h);
            g[1] = std::sqrt(1.0 - h);
            lg = 2.0 * std::atanh(std::sqrt(h));
            break;
        case FieldKind::R:
            g[0] = std::sqrt(4096.0 * h * h - 1.0);
            lg = std::acosh(64.0 * h);
            break;
    }
    double acc = 0.0;
    for (const auto& [m, c] : terms_) {
        double v = c.eval(h);
        if (m.rad & 1u) v *= g[0];
        if (m.rad & 2u) v *= g[1];
        for (int p = 0; p < m.lpow; ++p) v *= lg;
        acc += v;
    }
    return acc;
}

double FieldElem::eval_mp(double h) const {
    using MP = boost::multiprecision::cpp_bin_float_100;
    MP hh(h);
    MP g[2] = {MP(0), MP(0)};
    MP lg(0);
    switch (field_) {
        case FieldKind::S1:
            g[0] = sqrt(hh * hh + hh);
            lg = log(abs(2 * g[0] + 2 * hh + 1));
            break;
        case FieldKind::S2:
            g[0] = sqrt(hh);
            g[1] = sqrt(1 - hh);
            lg = log((1 + g[0]) / (1 - g[0]));
            break;
        case FieldKind::R:
            g[0] = sqrt(4096 * hh * hh - 1);
            lg = log(64 * hh + g[0]);
            break;
    }
    auto poly_mp = [&](const Poly& p) {
        MP acc(0);
        for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it)
            acc = acc * hh + MP(*it);
        return acc;
    };
    MP acc(0);
    for (const auto& [m, c] : terms_) {
        MP v = poly_mp(c.num()) / poly_mp(c.den());
        if (m.rad & 1u) v *= g[0];
        if (m.rad & 2u) v *= g[1];
        for (int p = 0; p < m.lpow; ++p) v *= lg;
        acc += v;
    }
    return acc.convert_to<double>();
}

std::map<int, Rat> FieldElem::eval_exact(const Rat& h, const std::vector<Rat>& radical_values) const {
    std::map<int, Rat> out;
    for (const auto& [m, c] : terms_) {
        Rat v = c.eval(h);
        for (size_t bit = 0; bit < radical_values.size(); ++bit)
            if (m.rad & (1u << bit)) v *= radical_values[bit];
        out[m.lpow] += v;
    }
    for (auto it = out.begin(); it != out.end();)
        it = it->second == 0 ? out.erase(it) : std::next(it);
    return out;
}

std::pair<int, double> FieldElem::growth() const {
    // degree in half-integer units of h: RatFunc contributes 2*(deg num - deg den);
    // radicals: S1's S ~ h (2), S2's u ~ h^{1/2} (1), v ~ const for bounded use,
    // R's S ~ 64h (2). Log factors count as 0 but break ties upward.
    const FieldTable& t = table(field_);
    int best = std::numeric_limits<int>::min();
    double coeff = 0.0;
    for (const auto& [m, c] : terms_) {
        int d = 2 * (c.num().degree() - c.den().degree());
        double lead = std::abs(to_double(c.num().leading()) /
                               to_double(c.den().leading()));
        for (int bit = 0; bit < t.nrad; ++bit)
            if (m.rad & (1u << bit)) {
                int sq_deg = t.square[bit].num().degree();
                d += sq_deg;  // sqrt of degree-sq_deg polynomial
                lead *= std::sqrt(std::abs(to_double(t.square[bit].num().leading())));
            }
        if (d > best || (d == best && lead > coeff)) {
            best = d;
            coeff = lead;
        }
    }
    return {best, coeff};
}

std::string FieldElem::str() const {
    if (terms_.empty()) return "0";
    const FieldTable& t = table(field_);
    const char* lname = field_ == FieldKind::S1   ? "ln|2*sqrt(h^2+h)+2h+1|"
                        : field_ == FieldKind::S2 ? "ln((1+sqrt(h))/(1-sqrt(h)))"
                                                  : "acosh(64h)";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) os << " + ";
        os << "[" << c.str() << "]";
        for (int bit = 0; bit < t.nrad; ++bit)
            if (m.rad & (1u << bit)) os << "*" << t.rad_name[bit];
        if (m.lpow == 1) os << "*" << lname;
        else if (m.lpow > 1) os << "*" << lname << "^" << int(m.lpow);
        first = false;
    }
    return os.str();
}

FieldElem wronskian(const std::vector<FieldElem>& funcs, int m) {
    if (m < 1 || m > static_cast<int>(funcs.size()))
        throw std::invalid_argument("wronskian order out of range");
    FieldKind f = funcs[0].field();
    // derivative rows 0..m-1
    std::vector<std::vector<FieldElem>> rows(m);
    rows[0].assign(funcs.begin(), funcs.begin() + m);
    for (int r = 1; r < m; ++r) {
        rows[r].reserve(m);
        for (int c = 0; c < m; ++c) rows[r].push_back(rows[r - 1][c].derivative());
    }
    // division-free determinant: expansion over column subsets, memoized.
    // minor(mask) = det of rows (m-|mask| .. m-1) on the columns in mask.
    std::vector<FieldElem> memo(1u << m, FieldElem(f));
    std::vector<bool> done(1u << m, false);
    memo[0] = FieldElem::constant(f, rat(1));
    done[0] = true;
    std::function<const FieldElem&(unsigned)> minor = [&](unsigned mask) -> const FieldElem& {
        if (done[mask]) return memo[mask];
        int sz = __builtin_popcount(mask);
        int row = m - sz;
        FieldElem acc(f);
        int pos = 0;
        for (int c = 0; c < m; ++c) {
            if (!(mask & (1u << c))) continue;
            const FieldElem& sub = minor(mask & ~(1u << c));
            FieldElem term = rows[row][c] * sub;
            if (pos % 2 == 0) acc += term;
            else acc -= term;
            ++pos;
        }
        memo[mask] = std::move(acc);
        done[mask] = true;
        return memo[mask];
    };
    return minor((1u << m) - 1);
}

namespace {
FieldElem fe_poly(FieldKind f, std::initializer_list<Rat> cs) {
    return FieldElem::from_ratfunc(f, RatFunc(Poly(cs)));
}
}  // namespace

std::vector<FieldElem> basis_family(const SystemSpec& sys) {
    FieldKind f = field_of(sys.kind);
    switch (sys.kind) {
        case SystemKind::S1: {
            FieldElem h = FieldElem::h(f);
            FieldElem S = FieldElem::gen(f, 0);
            FieldElem L = FieldElem::log_gen(f);
            FieldElem two_h1 = fe_poly(f, {rat(1), rat(2)});
            return {h,
                    S,
                    fe_poly(f, {rat(0), rat(1), rat(1)}),
                    L,
                    RatFunc(rat(1, 2)) * L - two_h1 * S,
                    RatFunc(rat(1, 2)) * (two_h1 * L) - S};
        }
        case SystemKind::S2: {
            FieldElem u = FieldElem::gen(f, 0);
            FieldElem v = FieldElem::gen(f, 1);
            FieldElem L = FieldElem::log_gen(f);
            FieldElem one = FieldElem::constant(f, rat(1));
            FieldElem f5 = u - RatFunc(rat(1, 2)) * (fe_poly(f, {rat(1), rat(-1)}) * L);
            FieldElem f6(f);
            for (const auto& [m, c] : f5.terms())
                f6.add_term(m, c * RatFunc(Poly::one(), Poly{rat(-1), rat(1)}) * RatFunc(rat(-1)));
            // f6 = f5/(1-h): dividing by (1-h) = -(h-1)
            return {u,
                    FieldElem::h(f),
                    FieldElem::h(f) * u,
                    one - v,
                    fe_poly(f, {rat(-1), rat(2)}) + fe_poly(f, {rat(1), rat(-1)}) * v,
                    f5,
                    f6};
        }
        case SystemKind::R19:
        case SystemKind::R20: {
            FieldElem S = FieldElem::gen(f, 0);
            FieldElem L = FieldElem::log_gen(f);
            return {fe_poly(f, {rat(-1, 64), rat(1)}), S, FieldElem::h(f) * L};
        }
    }
    throw std::logic_error("bad kind");
}

std::vector<FieldElem> melnikov_family(const SystemSpec& sys, int branch) {
    FieldKind f = field_of(sys.kind);
    auto fam = basis_family(sys);
    if (sys.kind == SystemKind::S1 && branch == 0) {
        fam[0] = fe_poly(f, {rat(1), rat(1)});  // h+1 on (-inf,-1)
    } else if (sys.kind == SystemKind::S2) {
        fam[6] = FieldElem::log_gen(f);  // L spans the I_{2,0} contribution
    }
    return fam;
}

double tail_radius(const FieldElem& e, int dir) {
    auto [dtop, ctop] = e.growth();
    if (ctop == 0.0) return 100.0;
    double R = 100.0;
    const FieldTable& t = table(e.field());
    for (const auto& [m, c] : e.terms()) {
        int d = 2 * (c.num().degree() - c.den().degree());
        double lead = std::abs(to_double(c.num().leading()) / to_double(c.den().leading()));
        for (int bit = 0; bit < t.nrad; ++bit)
            if (m.rad & (1u << bit)) {
                d += t.square[bit].num().degree();
                lead *= std::sqrt(std::abs(to_double(t.square[bit].num().leading())));
            }
        if (d >= dtop) continue;
        // |c| |h|^{d/2} (ln|h|)^p < |ctop| |h|^{dtop/2} needs
        // |h|^{(dtop-d)/2} > (|c|/|ctop|) (ln|h|)^p; bound the log crudely.
        double ratio = lead / ctop;
        double r = std::pow(std::max(ratio, 1e-12), 2.0 / (dtop - d));
        R = std::max(R, r * std::pow(50.0, 2.0 * m.lpow / (dtop - d)));
    }
    (void)dir;
    return 10.0 * R;
}

EctReport ect_check(const std::vector<FieldElem>& funcs, std::pair<double, double> interval,
                    int samples) {
    EctReport rep;
    double lo = interval.first, hi = interval.second;
    // truncate unbounded ends at the dominant-asymptotics radius of W_1..W_k
    int n = static_cast<int>(funcs.size());
    std::vector<FieldElem> ws;
    for (int k = 1; k <= n; ++k) ws.push_back(wronskian(funcs, k));
    if (std::isinf(hi)) {
        double R = 100.0;
        for (const auto& w : ws) R = std::max(R, tail_radius(w, +1));
        hi = R;
    }
    if (std::isinf(lo)) {
        double R = 100.0;
        for (const auto& w : ws) R = std::max(R, tail_radius(w, -1));
        lo = -R;
    }
    rep.lo = lo;
    rep.hi = hi;
    if (samples < 8) samples = 8;
    // grid log-refined toward both endpoints
    std::vector<double> grid;
    double span = hi - lo;
    for (int i = 0; i < samples; ++i) {
        double t = (i + 0.5) / samples;
        grid.push_back(lo + span * t);
    }
    int edge = samples / 4 + 8;
    for (int i = 1; i <= edge; ++i) {
        double d = span * 0.5 * std::pow(10.0, -7.0 * i / edge);
        grid.push_back(lo + d);
        grid.push_back(hi - d);
    }
    std::sort(grid.begin(), grid.end());
    rep.is_ect_evidence = true;
    for (int k = 1; k <= n; ++k) {
        const FieldElem& w = ws[k - 1];
        std::vector<double> vals;
        vals.reserve(grid.size());
        for (double h : grid) vals.push_back(w.eval_mp(h));
        double min_rel = std::numeric_limits<double>::infinity();
        int sign = 0;
        for (size_t i = 0; i < vals.size(); ++i) {
            double v = vals[i];
            if (!std::isfinite(v)) continue;
            // local magnitude scale: the neighborhood maximum, so values that
            // merely decay toward a boundary zero are not flagged
            double scale = 0.0;
            for (size_t j = i >= 2 ? i - 2 : 0; j < std::min(vals.size(), i + 3); ++j)
                if (std::isfinite(vals[j])) scale = std::max(scale, std::abs(vals[j]));
            double rel = std::abs(v) / std::max(scale, 1e-300);
            min_rel = std::min(min_rel, rel);
            if (rel < 1e-9) {
                rep.inconclusive = true;  // near-zero: do not claim a zero
                continue;
            }
            int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
            if (sign != 0 && s != 0 && s != sign) rep.is_ect_evidence = false;
            if (s != 0) sign = s;
        }
        rep.min_abs_per_k.push_back(min_rel);
    }
    if (rep.inconclusive) rep.is_ect_evidence = false;
    return rep;
}

}  // namespace pfab
