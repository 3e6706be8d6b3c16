#include "pfab/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pfab {

std::string IntegralIndex::str() const {
    std::ostringstream os;
    if (integer_i()) os << "I(" << i2 / 2 << "," << j << ")";
    else os << "I(" << i2 << "/2," << j << ")";
    return os.str();
}

OvalGeometry oval_endpoints(const SystemSpec& sys, double h) {
    int branch = sys.branch_of(h);  // throws outside Sigma
    // refuse h hugging the annulus boundary; basis constants are fitted away from it
    for (const auto& c : sys.centers)
        if (std::abs(h - c.second) <= 1e-9 * std::max(1.0, std::abs(c.second)))
            throw std::domain_error("h too close to the center energy level");
    OvalGeometry g;
    g.h = h;
    g.branch = branch;
    switch (sys.kind) {
        case SystemKind::S1: {
            double S = std::sqrt(h * h + h);
            g.x1 = 2 * h + 1 - 2 * S;
            g.x2 = 2 * h + 1 + 2 * S;
            break;
        }
        case SystemKind::S2: {
            double u = std::sqrt(h);
            g.x1 = 1.0 / (1.0 + u);
            g.x2 = 1.0 / (1.0 - u);
            break;
        }
        case SystemKind::R19:
        case SystemKind::R20: {
            double r = std::sqrt(4096.0 * h * h - 1.0);
            double t1 = 64.0 * h - r, t2 = 64.0 * h + r;
            g.x1 = t1 * t1;
            g.x2 = t2 * t2;
            break;
        }
    }
    if (!(g.x1 < g.x2)) throw std::runtime_error("endpoint bracketing failed");
    return g;
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          const QuadratureOptions& opt) {
    using boost::math::quadrature::gauss_kronrod;
    double err = 0.0;
    double v = gauss_kronrod<double, 31>::integrate(f, a, b, opt.max_depth, opt.rel_tol, &err);
    if (!(std::isfinite(v)))
        throw std::runtime_error("quadrature produced a non-finite value");
    if (err > 10 * opt.rel_tol * std::abs(v) + 100 * opt.abs_tol)
        throw std::runtime_error("quadrature failed to converge");
    return v;
}

namespace {

// Integrate over theta in [0, pi/2] with interior split points for ovals
// spanning many decades (the sin^2 substitution alone under-resolves the
// transition layer there).
double integrate_theta(const std::function<double(double)>& f, double x1, double x2,
                       const QuadratureOptions& opt) {
    std::vector<double> cuts = {0.0, M_PI / 2.0};
    double w = x2 - x1;
    auto add_cut = [&](double xc) {
        if (xc <= x1 || xc >= x2) return;
        double s = std::sqrt((xc - x1) / w);
        if (s > 1e-14 && s < 1.0) cuts.push_back(std::asin(std::min(1.0, s)));
    };
    // cap each segment at ~2 decades of x-variation for wide ovals
    if (x1 > 0.0 && x2 / x1 > 1e3) {
        for (double xc = 100.0 * x1; xc < 0.3 * x2; xc *= 100.0) add_cut(xc);
        add_cut(0.3 * x2);
    } else if (x2 < 0.0 && x1 / x2 > 1e3) {
        for (double xc = 100.0 * x2; xc > 0.3 * x1; xc *= 100.0) add_cut(xc);
        add_cut(0.3 * x1);
    }
    std::sort(cuts.begin(), cuts.end());
    using boost::math::quadrature::gauss_kronrod;
    double total = 0.0, err_total = 0.0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        double err = 0.0;
        total += gauss_kronrod<double, 31>::integrate(f, cuts[i], cuts[i + 1], opt.max_depth,
                                                      opt.rel_tol, &err);
        err_total += err;
    }
    if (!std::isfinite(total))
        throw std::runtime_error("quadrature produced a non-finite value");
    if (err_total > 10 * opt.rel_tol * std::abs(total) + 100 * opt.abs_tol)
        throw std::runtime_error("quadrature failed to converge");
    return total;
}

// Fallback for integrands the theta-substituted Gauss-Kronrod path cannot
// settle (extreme dynamic range): tanh-sinh directly in x.
double integrate_tanh_sinh(const std::function<double(double)>& fx, double x1, double x2,
                           const QuadratureOptions& opt) {
    boost::math::quadrature::tanh_sinh<double> ts(14);
    double err = 0.0, l1 = 0.0;
    double v = ts.integrate(fx, x1, x2, 1e-12, &err, &l1);
    if (!std::isfinite(v))
        throw std::runtime_error("quadrature produced a non-finite value");
    if (err > 1e2 * opt.rel_tol * std::max(std::abs(v), 1e-3 * l1) + 100 * opt.abs_tol)
        throw std::runtime_error("quadrature failed to converge");
    return v;
}

}  // namespace

namespace {

// phi(x) = psi(x) (x - x1)(x2 - x) with psi smooth and positive on [x1,x2].
struct OvalFrame {
    OvalGeometry g;
    std::function<double(double)> psi;
    std::function<double(double)> dphi;  // phi'(x)
};

OvalFrame make_frame(const SystemSpec& sys, double h) {
    OvalFrame fr;
    fr.g = oval_endpoints(sys, h);
    double x1 = fr.g.x1, x2 = fr.g.x2;
    switch (sys.kind) {
        case SystemKind::S1:
            fr.psi = [](double) { return 0.25; };
            fr.dphi = [h](double x) { return h - 0.5 * x + 0.5; };
            break;
        case SystemKind::S2:
            fr.psi = [h](double) { return 1.0 - h; };
            fr.dphi = [h](double x) { return 2.0 * (h - 1.0) * x + 2.0; };
            break;
        case SystemKind::R19: {
            double t1 = std::sqrt(x1), t2 = std::sqrt(x2);
            fr.psi = [t1, t2](double x) {
                double t = std::sqrt(x);
                return x / (128.0 * (t + t1) * (t + t2));
            };
            fr.dphi = [h](double x) { return 1.5 * h * std::sqrt(x) - x / 64.0 - 1.0 / 128.0; };
            break;
        }
        case SystemKind::R20: {
            double t1 = std::sqrt(x1), t2 = std::sqrt(x2);
            fr.psi = [t1, t2](double x) {
                double t = std::sqrt(x);
                return 1.0 / (128.0 * (t + t1) * (t + t2));
            };
            fr.dphi = [h](double x) { return 0.5 * h / std::sqrt(x) - 1.0 / 128.0; };
            break;
        }
    }
    return fr;
}

double pow_xi(const SystemSpec&, double x, double e) {
    return std::pow(x, e);  // S1 negative branch reaches here with integer e only
}

}  // namespace

double integral_I(const SystemSpec& sys, double h, IntegralIndex idx,
                  const QuadratureOptions& opt) {
    if (!sys.half_integer_indices() && !idx.integer_i())
        throw std::invalid_argument("half-integer index for " + std::string(to_string(sys.kind)));
    OvalFrame fr = make_frame(sys, h);
    double x1 = fr.g.x1, x2 = fr.g.x2, w = x2 - x1;
    double e = idx.i_value() - sys.k_d() - 1.0;
    int j = idx.j;
    auto f = [&](double th) {
        double st = std::sin(th), ct = std::cos(th);
        double x = x1 + w * st * st;
        double y = std::sqrt(2.0 * fr.psi(x)) * w * st * ct;
        return pow_xi(sys, x, e) * std::pow(y, j) * w * 2.0 * st * ct;
    };
    try {
        return integrate_theta(f, x1, x2, opt);
    } catch (const std::runtime_error&) {
        auto fx = [&](double x) {
            double prod = std::max(0.0, (x - x1) * (x2 - x));
            double y = std::sqrt(2.0 * fr.psi(x) * prod);
            return pow_xi(sys, x, e) * std::pow(y, j);
        };
        return integrate_tanh_sinh(fx, x1, x2, opt);
    }
}

double integral_J(const SystemSpec& sys, double h, IntegralIndex idx,
                  const QuadratureOptions& opt) {
    // lower branch, y = -sqrt(2 phi), traversed x2 -> x1
    OvalFrame fr = make_frame(sys, h);
    double x1 = fr.g.x1, x2 = fr.g.x2, w = x2 - x1;
    double e = idx.i_value() - sys.k_d() - 1.0;
    int j = idx.j;
    auto f = [&](double th) {
        double st = std::sin(th), ct = std::cos(th);
        double x = x1 + w * st * st;
        double y = -std::sqrt(2.0 * fr.psi(x)) * w * st * ct;
        return pow_xi(sys, x, e) * std::pow(y, j) * w * 2.0 * st * ct;
    };
    try {
        return -integrate_theta(f, x1, x2, opt);
    } catch (const std::runtime_error&) {
        auto fx = [&](double x) {
            double prod = std::max(0.0, (x - x1) * (x2 - x));
            double y = -std::sqrt(2.0 * fr.psi(x) * prod);
            return pow_xi(sys, x, e) * std::pow(y, j);
        };
        return -integrate_tanh_sinh(fx, x1, x2, opt);
    }
}

double integral_dy(const SystemSpec& sys, double h, double i_exponent, int j,
                   const QuadratureOptions& opt) {
    // y(th)^2 = 2 phi(x(th)) gives dy/dth = 2 phi'(x) / sqrt(2 psi) at interior points,
    // smooth up to the endpoints.
    OvalFrame fr = make_frame(sys, h);
    double x1 = fr.g.x1, x2 = fr.g.x2, w = x2 - x1;
    auto f = [&](double th) {
        double st = std::sin(th), ct = std::cos(th);
        double x = x1 + w * st * st;
        double y = std::sqrt(2.0 * fr.psi(x)) * w * st * ct;
        double dy = 2.0 * fr.dphi(x) / std::sqrt(2.0 * fr.psi(x));
        return pow_xi(sys, x, i_exponent) * std::pow(y, j) * dy;
    };
    return integrate_theta(f, x1, x2, opt);
}

double melnikov_quadrature(const SystemSpec& sys, const PerturbationPoly& pert, double h,
                           const QuadratureOptions& opt) {
    pert.validate();
    double k = sys.k_d();
    double acc = 0.0;
    auto I = [&](int i, int j) { return integral_I(sys, h, IntegralIndex::of(i, j), opt); };
    for (int i = 0; i <= pert.n; ++i)
        for (int j = 0; i + j <= pert.n; ++j) {
            // J_{i,j} = (-1)^{j+1} I_{i,j}
            double bsgn = (j % 2 == 0) ? -1.0 : 1.0;
            double cb = pert.get('b', true, i, j) + bsgn * pert.get('b', false, i, j);
            if (cb != 0.0) acc += cb * I(i, j);
            double asgn = (j % 2 == 0) ? 1.0 : -1.0;  // J_{i-1,j+1}: (-1)^{j+2}
            double ca = pert.get('a', true, i, j) + asgn * pert.get('a', false, i, j);
            if (ca != 0.0) acc += (i - k - 1.0) / (j + 1.0) * ca * I(i - 1, j + 1);
        }
    return acc;
}

}  // namespace pfab
