#include "pfab/melnikov.hpp"

#include "pfab/quadrature.hpp"

#include <json.hpp>
#include <Eigen/Dense>

#include <cmath>
#include <mutex>

namespace pfab {

namespace {

double stable_log(const SystemSpec& sys, double h) {
    switch (sys.kind) {
        case SystemKind::S1:
            return h > 0 ? 2.0 * std::asinh(std::sqrt(h)) : -2.0 * std::asinh(std::sqrt(-1.0 - h));
        case SystemKind::S2:
            return 2.0 * std::atanh(std::sqrt(h));
        default:
            return std::acosh(64.0 * h);
    }
}

struct ShapeValue {
    // Lemma 2.3 shape of each basis integral, value without its constant.
    static std::vector<double> at(const SystemSpec& sys, int branch, double h) {
        double L = stable_log(sys, h);
        switch (sys.kind) {
            case SystemKind::S1: {
                double S = std::sqrt(h * h + h);
                double i11 = branch == 1 ? h : h + 1.0;  // positive / negative annulus
                return {S, i11, h * h + h, 0.5 * (2 * h + 1) * L - S};
            }
            case SystemKind::S2: {
                double u = std::sqrt(h), v = std::sqrt(1.0 - h);
                return {h, u, 1.0 - v, u - 0.5 * (1.0 - h) * L};
            }
            case SystemKind::R19:
            case SystemKind::R20: {
                double S = std::sqrt(4096.0 * h * h - 1.0);
                return {h - 1.0 / 64.0, h - 1.0 / 64.0, S};
            }
        }
        throw std::logic_error("bad kind");
    }
    static double reference_h(const SystemSpec& sys, int branch) {
        switch (sys.kind) {
            case SystemKind::S1: return branch == 1 ? 1.0 : -2.0;
            case SystemKind::S2: return 0.5;
            default: return 1.0 / 16.0;
        }
    }
};

}  // namespace

const BasisConstants& basis_constants(const SystemSpec& sys, int branch) {
    static std::mutex mu;
    static std::map<std::pair<SystemKind, int>, BasisConstants> cache;
    std::scoped_lock lk(mu);
    auto key = std::make_pair(sys.kind, branch);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    double href = ShapeValue::reference_h(sys, branch);
    auto shapes = ShapeValue::at(sys, branch, href);
    const auto& ids = basis_indices(sys.kind);
    BasisConstants bc;
    for (size_t i = 0; i < ids.size(); ++i)
        bc.c.push_back(integral_I(sys, href, ids[i]) / shapes[i]);
    return cache.emplace(key, std::move(bc)).first->second;
}

std::vector<double> basis_closed_values(const SystemSpec& sys, int branch, double h) {
    const auto& bc = basis_constants(sys, branch);
    auto shapes = ShapeValue::at(sys, branch, h);
    std::vector<double> out(shapes.size());
    for (size_t i = 0; i < shapes.size(); ++i) out[i] = bc.c[i] * shapes[i];
    return out;
}

KVector k_map(const SystemSpec& sys, const PerturbationPoly& pert, int branch) {
    if (pert.n != 2) throw std::invalid_argument("k_map requires degree n = 2");
    if (sys.kind != SystemKind::S1 && sys.kind != SystemKind::S2)
        throw std::invalid_argument("k_map is defined for S1 and S2 only");
    auto bsum = [&](int i, int j) { return pert.get('b', true, i, j) + pert.get('b', false, i, j); };
    auto bdif = [&](int i, int j) { return pert.get('b', true, i, j) - pert.get('b', false, i, j); };
    auto asum = [&](int i, int j) { return pert.get('a', true, i, j) + pert.get('a', false, i, j); };
    auto adif = [&](int i, int j) { return pert.get('a', true, i, j) - pert.get('a', false, i, j); };
    KVector kv;
    kv.kind = sys.kind;
    kv.branch = branch;
    if (sys.kind == SystemKind::S1) {
        const auto& bc = basis_constants(sys, branch).c;  // {c1, c2*, c2, c1}
        double c1 = bc[0];
        double c2 = bc[2];  // I_{-1,1} constant carries the branch sign
        double sgn = branch == 1 ? 1.0 : -1.0;  // I11 = c2 h (pos) vs -c2(h+1) (neg)
        kv.k = {c2 * (bsum(0, 1) - asum(1, 0) + sgn * (bsum(1, 1) + asum(0, 2))),
                c1 * (bdif(0, 0) + bdif(2, 0)),
                -c2 * (2 * asum(0, 0) + asum(0, 2)),
                0.5 * c1 * bdif(1, 0),
                0.5 * c1 * adif(0, 1),
                c1 * (bdif(0, 2) - 0.5 * adif(1, 1))};
    } else {
        const auto& bc = basis_constants(sys, 0).c;  // {C1, C2, C3, C4}
        double C1 = bc[0], C2 = bc[1], C3 = bc[2], C4 = bc[3];
        kv.k = {C2 * (bdif(0, 0) + bdif(1, 0)),
                C1 * (bsum(0, 1) - 2 * asum(1, 0) - 3 * asum(0, 0) + 2 * asum(0, 2)),
                -2 * C2 * adif(0, 1),
                C3 * (bsum(1, 1) - asum(2, 0)),
                -2 * C3 * asum(0, 2),
                C4 * (bdif(0, 2) - adif(1, 1)),
                bdif(2, 0)};
    }
    return kv;
}

double MelnikovClosed::eval(double h) const {
    double acc = 0.0;
    for (size_t i = 0; i < kv.k.size(); ++i)
        if (kv.k[i] != 0.0) acc += kv.k[i] * family[i].eval(h);
    return acc;
}

MelnikovClosed melnikov_closed(const SystemSpec& sys, const KVector& kv) {
    MelnikovClosed mc;
    mc.kv = kv;
    mc.family = melnikov_family(sys, kv.branch);
    if (mc.family.size() != kv.k.size()) throw std::invalid_argument("k-vector size mismatch");
    return mc;
}

double kmap_jacobian(const SystemSpec& sys, int branch) {
    // Probe the linear map on the independent coordinate block.
    std::vector<std::tuple<char, int, int>> coords;
    if (sys.kind == SystemKind::S1)
        coords = {{'a', 1, 0}, {'b', 0, 0}, {'a', 0, 0}, {'b', 1, 0}, {'a', 0, 1}, {'b', 0, 2}};
    else
        coords = {{'b', 0, 0}, {'b', 0, 1}, {'a', 0, 1}, {'b', 1, 1}, {'a', 0, 2}, {'b', 0, 2},
                  {'b', 2, 0}};
    int n = static_cast<int>(coords.size());
    Eigen::MatrixXd J(n, n);
    for (int c = 0; c < n; ++c) {
        PerturbationPoly p;
        p.n = 2;
        auto [w, i, j] = coords[c];
        p.set(w, true, i, j, 1.0);
        KVector kv = k_map(sys, p, branch);
        for (int r = 0; r < n; ++r) J(r, c) = kv.k[r];
    }
    return J.determinant();
}

int bound_for(const SystemSpec& sys, int n, bool smooth) {
    if (n < 0) throw std::invalid_argument("negative degree");
    switch (sys.kind) {
        case SystemKind::S1: return smooth ? 2 * n : 4 * n + 30;
        case SystemKind::S2:
            if (smooth) return n >= 1 ? 2 * n - 1 : 1;
            return n >= 1 ? 10 * n - 4 : 2;
        case SystemKind::R19:
            if (smooth) return n >= 4 ? 2 * n - 3 : 4;
            return n >= 4 ? 4 * n - 3 : 11;
        case SystemKind::R20:
            if (smooth) return n >= 3 ? 2 * n : 3;
            return n >= 3 ? 4 * n + 3 : 8;
    }
    throw std::logic_error("bad kind");
}

std::string ZeroReport::to_json() const {
    nlohmann::json j;
    j["interval"] = {lo, hi};
    j["count"] = count;
    j["identically_zero"] = identically_zero;
    if (bound >= 0) {
        j["bound"] = bound;
        j["bound_source"] = bound_source;
    }
    nlohmann::json zs = nlohmann::json::array();
    for (const auto& z : zeros)
        zs.push_back({{"h", z.h}, {"residual", z.residual}, {"simple", z.simple}});
    j["zeros"] = zs;
    j["tangencies"] = tangencies;
    return j.dump(2);
}

ZeroReport count_zeros(const std::function<double(double)>& f, double lo, double hi, int grid) {
    if (grid < 2) throw std::invalid_argument("grid must be >= 2");
    ZeroReport rep;
    if (std::isinf(hi)) hi = 1e12;
    if (std::isinf(lo)) lo = -1e12;
    rep.lo = lo;
    rep.hi = hi;
    // grid: logarithmic when the interval spans many scales away from zero
    std::vector<double> xs;
    xs.reserve(grid);
    bool log_pos = lo > 0 && hi / lo > 100.0;
    bool log_neg = hi < 0 && lo / hi > 100.0;
    for (int i = 0; i < grid; ++i) {
        double t = static_cast<double>(i) / (grid - 1);
        if (log_pos)
            xs.push_back(lo * std::pow(hi / lo, t));
        else if (log_neg)
            xs.push_back(hi * std::pow(lo / hi, 1.0 - t));
        else
            xs.push_back(lo + (hi - lo) * t);
    }
    std::vector<double> vs(xs.size());
    double scale = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        vs[i] = f(xs[i]);
        if (std::isfinite(vs[i])) scale = std::max(scale, std::abs(vs[i]));
    }
    if (scale == 0.0) {
        rep.identically_zero = true;
        return rep;
    }
    auto polish = [&](double a, double b, double fa) {
        for (int it = 0; it < 200; ++it) {
            double m = 0.5 * (a + b);
            if (m == a || m == b) break;
            double fm = f(m);
            if (fm == 0.0) { a = b = m; break; }
            if ((fm > 0) == (fa > 0)) {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
            if (std::abs(b - a) < 1e-14 * std::max(1.0, std::abs(a))) break;
        }
        return 0.5 * (a + b);
    };
    // two refinement passes around candidate intervals, then bisection
    for (size_t i = 0; i + 1 < xs.size(); ++i) {
        double a = xs[i], b = xs[i + 1], fa = vs[i], fb = vs[i + 1];
        if (!std::isfinite(fa) || !std::isfinite(fb)) continue;
        if (fa == 0.0) continue;  // counted by its right neighbor interval
        if ((fa > 0) != (fb > 0)) {
            for (int pass = 0; pass < 2; ++pass) {
                int sub = 16;
                for (int s = 1; s <= sub; ++s) {
                    double m = a + (b - a) * s / sub;
                    double fm = f(m);
                    if ((fa > 0) != (fm > 0)) {
                        b = m;
                        fb = fm;
                        break;
                    }
                    a = m;
                    fa = fm;
                }
            }
            Zero z;
            z.h = polish(a, b, fa);
            z.residual = std::abs(f(z.h));
            z.simple = true;
            rep.zeros.push_back(z);
        }
    }
    // possible even-multiplicity zeros: interior |f| dips without sign change,
    // refined by ternary minimization before deciding
    for (size_t i = 1; i + 1 < xs.size(); ++i) {
        if (!std::isfinite(vs[i - 1]) || !std::isfinite(vs[i]) || !std::isfinite(vs[i + 1]))
            continue;
        if ((vs[i - 1] > 0) != (vs[i] > 0) || (vs[i] > 0) != (vs[i + 1] > 0)) continue;
        if (std::abs(vs[i]) >= std::abs(vs[i - 1]) || std::abs(vs[i]) >= std::abs(vs[i + 1]))
            continue;
        double a = xs[i - 1], b = xs[i + 1];
        for (int it = 0; it < 200 && (b - a) > 1e-14 * std::max(1.0, std::abs(a)); ++it) {
            double m1 = a + (b - a) / 3, m2 = b - (b - a) / 3;
            if (std::abs(f(m1)) < std::abs(f(m2))) b = m2;
            else a = m1;
        }
        double hmin = 0.5 * (a + b);
        double local = std::max(std::abs(vs[i - 1]), std::abs(vs[i + 1]));
        if (std::abs(f(hmin)) < 1e-10 * std::max(local, 1e-300)) rep.tangencies.push_back(hmin);
    }
    rep.count = static_cast<int>(rep.zeros.size());
    return rep;
}

namespace {

double combo_tail_radius(const SystemSpec& sys, const BasisCombo& combo, int branch) {
    // growth degree (half-integer units) and magnitude of each term's tail
    const auto& bc = basis_constants(sys, branch).c;
    struct Term {
        int deg;
        double lead;
    };
    std::vector<Term> terms;
    auto add = [&](const RatFunc& c, int basis_deg2, double basis_lead) {
        if (c.is_zero()) return;
        int d = 2 * (c.num().degree() - c.den().degree()) + basis_deg2;
        double lead = std::abs(to_double(c.num().leading()) / to_double(c.den().leading())) *
                      std::abs(basis_lead);
        terms.push_back({d, lead});
    };
    switch (sys.kind) {
        case SystemKind::S1:
            add(combo.coeff[0], 2, bc[0]);       // I00 ~ c1 |h|
            add(combo.coeff[1], 2, bc[1]);       // I11 ~ c2 h
            add(combo.coeff[2], 4, bc[2]);       // I-11 ~ c2 h^2
            add(combo.coeff[3], 2, bc[3] * 2.0); // I02 ~ c1 (2h+1)L/2, log margin
            break;
        case SystemKind::S2:
            return 0.0;  // bounded interval, no truncation
        case SystemKind::R19:
        case SystemKind::R20:
            add(combo.coeff[0], 2, bc[0]);
            add(combo.coeff[1], 2, bc[1]);
            add(combo.coeff[2], 2, bc[2] * 64.0);  // I ~ c * 64 h
            add(combo.log_coeff, 2, 2.0);          // h * acosh(64h), log margin
            break;
    }
    if (terms.empty()) return 0.0;
    int dtop = terms[0].deg;
    double ctop = terms[0].lead;
    for (const auto& t : terms)
        if (t.deg > dtop || (t.deg == dtop && t.lead > ctop)) {
            dtop = t.deg;
            ctop = t.lead;
        }
    double R = 100.0;
    for (const auto& t : terms) {
        if (t.deg >= dtop) continue;
        double r = std::pow(std::max(t.lead / ctop, 1e-12), 2.0 / (dtop - t.deg));
        R = std::max(R, 50.0 * r);  // 50: headroom for the log factors
    }
    return 10.0 * R;
}

}  // namespace

ZeroReport melnikov_zeros(const SystemSpec& sys, const PerturbationPoly& pert, int grid) {
    BasisCombo combo = reduce_melnikov(sys, pert);
    ZeroReport total;
    total.bound = bound_for(sys, pert.n, pert.is_smooth());
    total.bound_source = pert.is_smooth() ? "smooth-degree-bound" : "discontinuous-degree-bound";
    bool any_value = false;
    for (size_t br = 0; br < sys.sigma.size(); ++br) {
        double lo = sys.sigma[br].lo, hi = sys.sigma[br].hi;
        double R = combo_tail_radius(sys, combo, static_cast<int>(br));
        if (std::isinf(hi)) hi = std::max(R, 1000.0);
        if (std::isinf(lo)) lo = -std::max(R, 1000.0);
        // stand off the finite annulus boundaries
        double span = hi - lo;
        if (sys.kind == SystemKind::S1 && br == 0) hi -= 1e-7 * std::max(1.0, std::abs(hi));
        else if (sys.kind == SystemKind::S2) { lo += 1e-9; hi -= 1e-9; }
        else lo += 1e-7 * std::max(std::abs(lo), 1e-3);
        (void)span;
        auto f = [&](double h) { return combo.eval(h, basis_closed_values(sys, static_cast<int>(br), h)); };
        ZeroReport part = count_zeros(f, lo, hi, grid);
        if (!part.identically_zero) any_value = true;
        total.zeros.insert(total.zeros.end(), part.zeros.begin(), part.zeros.end());
        total.tangencies.insert(total.tangencies.end(), part.tangencies.begin(),
                                part.tangencies.end());
        if (br == 0) { total.lo = part.lo; total.hi = part.hi; }
        else { total.lo = std::min(total.lo, part.lo); total.hi = std::max(total.hi, part.hi); }
    }
    total.identically_zero = !any_value;
    total.count = static_cast<int>(total.zeros.size());
    return total;
}

int melnikov_zero_count(const SystemSpec& sys, const PerturbationPoly& pert, int grid) {
    return melnikov_zeros(sys, pert, grid).count;
}

PerturbationPoly realize_max(const SystemSpec& sys, const std::vector<double>& targets) {
    if (sys.kind != SystemKind::S1 && sys.kind != SystemKind::S2)
        throw std::invalid_argument("realize_max is defined for S1 and S2");
    size_t need = sys.kind == SystemKind::S1 ? 5 : 6;
    if (targets.size() != need)
        throw std::invalid_argument("wrong number of targets");
    int branch = sys.branch_of(targets[0]);
    for (double t : targets)
        if (sys.branch_of(t) != branch)
            throw std::invalid_argument("targets must lie in one annulus interval");
    auto family = melnikov_family(sys, branch);
    size_t m = family.size();
    Eigen::MatrixXd A(need, m);
    for (size_t r = 0; r < need; ++r)
        for (size_t c = 0; c < m; ++c) A(r, c) = family[c].eval(targets[r]);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
    if (svd.rank() < static_cast<Eigen::Index>(need))
        throw std::runtime_error("degenerate target configuration (kernel dimension > 1)");
    Eigen::VectorXd kvec = svd.matrixV().col(m - 1);
    KVector kv;
    kv.kind = sys.kind;
    kv.branch = branch;
    kv.k.assign(kvec.data(), kvec.data() + m);

    PerturbationPoly p;
    p.n = 2;
    if (sys.kind == SystemKind::S1) {
        const auto& bc = basis_constants(sys, branch).c;
        double c1 = bc[0], c2 = bc[2];
        p.set('a', true, 1, 0, -kv.k[0] / c2);
        p.set('b', true, 0, 0, kv.k[1] / c1);
        p.set('a', true, 0, 0, -kv.k[2] / (2 * c2));
        p.set('b', true, 1, 0, 2 * kv.k[3] / c1);
        p.set('a', true, 0, 1, 2 * kv.k[4] / c1);
        p.set('b', true, 0, 2, kv.k[5] / c1);
    } else {
        const auto& bc = basis_constants(sys, 0).c;
        double C1 = bc[0], C2 = bc[1], C3 = bc[2], C4 = bc[3];
        double a02 = -kv.k[4] / (2 * C3);
        p.set('a', true, 0, 2, a02);
        p.set('b', true, 0, 1, kv.k[1] / C1 - 2 * a02);
        p.set('b', true, 0, 0, kv.k[0] / C2);
        p.set('a', true, 0, 1, -kv.k[2] / (2 * C2));
        p.set('b', true, 1, 1, kv.k[3] / C3);
        p.set('b', true, 0, 2, kv.k[5] / C4);
        p.set('b', true, 2, 0, kv.k[6]);
    }

    // verify: exactly the target zeros, all simple
    ZeroReport rep = melnikov_zeros(sys, p);
    std::vector<Zero> on_branch;
    for (const auto& z : rep.zeros)
        if (sys.branch_of(z.h) == branch) on_branch.push_back(z);
    if (on_branch.size() != need)
        throw std::runtime_error("realization verification failed: wrong zero count");
    std::vector<double> sorted_targets = targets;
    std::sort(sorted_targets.begin(), sorted_targets.end());
    for (size_t i = 0; i < need; ++i) {
        double t = sorted_targets[i];
        if (std::abs(on_branch[i].h - t) > 1e-6 * std::max(1.0, std::abs(t)))
            throw std::runtime_error("realization verification failed: zero far from target");
        if (!on_branch[i].simple)
            throw std::runtime_error("realization verification failed: non-simple zero");
    }
    return p;
}

PerturbationPoly random_perturbation(int n, std::mt19937_64& rng, bool smooth) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    PerturbationPoly p;
    p.n = n;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; i + j <= n; ++j) {
            double ap = U(rng), bp = U(rng), am = U(rng), bm = U(rng);
            p.set('a', true, i, j, ap);
            p.set('b', true, i, j, bp);
            p.set('a', false, i, j, smooth ? ap : am);
            p.set('b', false, i, j, smooth ? bp : bm);
        }
    return p;
}

AuditResult audit_bounds(const SystemSpec& sys, int n, int trials, std::uint64_t seed,
                         bool smooth) {
    AuditResult res;
    res.trials = trials;
    res.bound = bound_for(sys, n, smooth);
    std::mt19937_64 rng(seed);
    for (int t = 0; t < trials; ++t) {
        PerturbationPoly p = random_perturbation(n, rng, smooth);
        int c = melnikov_zero_count(sys, p);
        res.worst_count = std::max(res.worst_count, c);
        if (c > res.bound) res.ok = false;
    }
    return res;
}

}  // namespace pfab
