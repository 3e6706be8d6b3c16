#include "pfab/odeharness.hpp"

#include "pfab/parallel.hpp"
#include "pfab/quadrature.hpp"

#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>
#include <stdexcept>

namespace pfab {

namespace {

using State = std::array<double, 2>;

struct Box {
    double xlo, xhi, yabs;
    bool inside(const State& s) const {
        return s[0] > xlo && s[0] < xhi && std::abs(s[1]) < yabs;
    }
};

Box bounding_box(const SystemSpec& sys, double h0, double factor) {
    OvalGeometry g = oval_endpoints(sys, h0);
    double span = g.x2 - g.x1;
    double ymax = 0.0;
    for (int i = 1; i < 64; ++i) {
        double x = g.x1 + span * i / 64.0;
        ymax = std::max(ymax, std::sqrt(std::max(0.0, 2.0 * half_energy(sys, h0, x))));
    }
    Box b;
    b.xlo = g.x1 > 0 ? g.x1 / factor : g.x1 * factor;
    b.xhi = g.x2 > 0 ? g.x2 * factor : g.x2 / factor;
    b.yabs = factor * std::max(ymax, 1e-3);
    return b;
}

}  // namespace

double half_return(const SystemSpec& sys, const PerturbationPoly& pert, double eps, double x0,
                   Side side, const SimOptions& opt) {
    if (std::abs(eps) > 1e-2) throw std::invalid_argument("|eps| must be <= 1e-2");
    namespace ode = boost::numeric::odeint;
    double h0 = hamiltonian(sys, x0, 0.0);
    Box box = bounding_box(sys, h0, opt.box_factor);

    auto rhs = [&](const State& s, State& dsdt, double) {
        auto [fx, fy] = vector_field(sys, side, eps, pert, s[0], s[1]);
        dsdt[0] = fx;
        dsdt[1] = fy;
    };

    auto stepper = ode::make_dense_output(opt.abs_tol, opt.rel_tol,
                                          ode::runge_kutta_dopri5<State>());
    State s0{x0, 0.0};
    stepper.initialize(s0, 0.0, 1e-6);

    double y_prev = 0.0, t_prev = 0.0;
    bool left_section = false;
    for (int step = 0; step < opt.max_steps; ++step) {
        stepper.do_step(rhs);
        double t_cur = stepper.current_time();
        const State& s = stepper.current_state();
        if (!box.inside(s))
            throw std::runtime_error("trajectory left the bounding box");
        if (t_cur > opt.max_time)
            throw std::runtime_error("no section crossing within the time budget");
        double y_cur = s[1];
        if (!left_section) {
            if (std::abs(y_cur) > 1e-9) left_section = true;
        } else if ((y_prev > 0) != (y_cur > 0) && y_prev != 0.0) {
            // bracketed crossing: bisect on the dense output
            double ta = t_prev, tb = t_cur, ya = y_prev;
            State tmp;
            for (int it = 0; it < 200; ++it) {
                double tm = 0.5 * (ta + tb);
                if (tm == ta || tm == tb) break;
                stepper.calc_state(tm, tmp);
                double ym = tmp[1];
                if (ym == 0.0) { ta = tb = tm; break; }
                if ((ym > 0) == (ya > 0)) {
                    ta = tm;
                    ya = ym;
                } else {
                    tb = tm;
                }
            }
            double tc = 0.5 * (ta + tb);
            stepper.calc_state(tc, tmp);
            if (std::abs(tmp[1]) > opt.event_tol)
                throw std::runtime_error("event localization failed to reach tolerance");
            State ds;
            rhs(tmp, ds, tc);
            if (std::abs(ds[1]) < 1e-8)
                throw std::runtime_error("non-transversal section crossing (sliding?)");
            return tmp[0];
        }
        y_prev = y_cur;
        t_prev = t_cur;
    }
    throw std::runtime_error("no section crossing within the step budget");
}

ReturnMapSample full_return(const SystemSpec& sys, const PerturbationPoly& pert, double eps,
                            double x0, const SimOptions& opt) {
    PerturbationPoly none;
    auto [fx0, fy0] = vector_field(sys, Side::upper, 0.0, none, x0, 0.0);
    (void)fx0;
    if (fy0 == 0.0) throw std::domain_error("start point is an equilibrium of the section flow");
    Side first = fy0 > 0 ? Side::upper : Side::lower;
    Side second = first == Side::upper ? Side::lower : Side::upper;
    double xm = half_return(sys, pert, eps, x0, first, opt);
    double xr = half_return(sys, pert, eps, xm, second, opt);
    ReturnMapSample r;
    r.x0 = x0;
    r.x_ret = xr;
    r.displacement = xr - x0;
    r.h0 = hamiltonian(sys, x0, 0.0);
    return r;
}

CycleSearch find_limit_cycles(const SystemSpec& sys, const PerturbationPoly& pert, double eps,
                              std::pair<double, double> x_range, int samples,
                              const SimOptions& opt) {
    if (samples < 2) throw std::invalid_argument("need at least 2 samples");
    CycleSearch out;
    out.samples.resize(samples);
    par::for_each_index(samples, [&](std::size_t i) {
        double x0 = x_range.first +
                    (x_range.second - x_range.first) * static_cast<double>(i) / (samples - 1);
        out.samples[i] = full_return(sys, pert, eps, x0, opt);
    });
    double dmax = 0.0;
    for (const auto& s : out.samples) dmax = std::max(dmax, std::abs(s.displacement));
    double noise = 10.0 * opt.rel_tol *
                   std::max(std::abs(x_range.first), std::abs(x_range.second));
    if (dmax <= noise) {
        out.degenerate = true;
        return out;
    }
    for (int i = 0; i + 1 < samples; ++i) {
        double da = out.samples[i].displacement, db = out.samples[i + 1].displacement;
        if ((da > 0) == (db > 0)) continue;
        double a = out.samples[i].x0, b = out.samples[i + 1].x0, fa = da;
        for (int it = 0; it < 80; ++it) {
            double m = 0.5 * (a + b);
            if (m == a || m == b) break;
            double fm = full_return(sys, pert, eps, m, opt).displacement;
            if (fm == 0.0) { a = b = m; break; }
            if ((fm > 0) == (fa > 0)) {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
            if (std::abs(b - a) < 1e-12 * std::max(1.0, std::abs(a))) break;
        }
        double xstar = 0.5 * (a + b);
        out.cycles.emplace_back(xstar, hamiltonian(sys, xstar, 0.0));
    }
    return out;
}

}  // namespace pfab
